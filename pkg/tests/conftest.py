"""Shared fixtures: one recorded seed for every randomized test."""

import numpy as np
import numpy.typing as npt
import pytest

from collisim.channels import ChannelPair
from collisim.environment import CorrelatedPairSpec
from collisim.linalg import DensityMatrix, state_from_bloch

DEFAULT_SEED = 20140107


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(DEFAULT_SEED)


def random_pure_state(rng: np.random.Generator) -> DensityMatrix:
    v = rng.normal(size=3)
    return state_from_bloch(v / np.linalg.norm(v))


def random_mixed_state(rng: np.random.Generator) -> DensityMatrix:
    v = rng.normal(size=3)
    return state_from_bloch(rng.uniform(0, 1) * v / np.linalg.norm(v))


def random_hermitian(rng: np.random.Generator, n: int) -> npt.NDArray[np.complex128]:
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


def random_draw(rng: np.random.Generator) -> tuple[DensityMatrix, CorrelatedPairSpec, ChannelPair]:
    """Pure state, pair spec and channel pair; eps <= 0.3 is inside the domain for every q."""
    spec = CorrelatedPairSpec(
        float(rng.uniform(0, 0.3)), float(rng.uniform(0, 0.3)), float(rng.uniform(0, 1))
    )
    return random_pure_state(rng), spec, ChannelPair(float(rng.uniform(0, 1)))
