"""Entropy, distinguishability and system-environment entanglement."""

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np
from rich.console import Console

from collisim.channels import ChannelPair
from collisim.dynamics import collide_pair_exact, evolve_correlated_chain, exact_global_state
from collisim.environment import CorrelatedPairSpec, correlated_pair_state
from collisim.errors import CollisimError, DimensionError, DomainError, InvalidStateError
from collisim.linalg import (
    DensityMatrix,
    StateVector,
    hermitian_eigen,
    purity,
    state_from_bloch,
)
from collisim.models import DEFAULT_TOLERANCES, DeltaERecord, Tolerances

console = Console(stderr=True)


@dataclass(frozen=True)
class BlochAngles:
    """Pure qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.

    ``phi`` is wrapped into [0, 2 pi).
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", self.phi % (2.0 * math.pi))

    def bloch_vector(self) -> tuple[float, float, float]:
        return (
            math.sin(self.theta) * math.cos(self.phi),
            math.sin(self.theta) * math.sin(self.phi),
            math.cos(self.theta),
        )

    def density(self) -> DensityMatrix:
        return state_from_bloch(self.bloch_vector())

    def state_vector(self) -> StateVector:
        return StateVector(
            np.array(
                [
                    math.cos(self.theta / 2.0),
                    np.exp(1j * self.phi) * math.sin(self.theta / 2.0),
                ],
                dtype=np.complex128,
            )
        )


def von_neumann_entropy(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """S = -sum p log2 p in bits, with 0 log 0 = 0.

    Negative eigenvalues down to ``-entropy_clamp`` are rounding noise and count as zero.
    """
    values = hermitian_eigen(rho.matrix, tol).values
    if values[0] < -tol.entropy_clamp:
        raise InvalidStateError("positivity", f"negative eigenvalue {values[0]:.3e}")
    entropy = 0.0
    for p in np.clip(values, 0.0, None):
        if p > 0.0:
            entropy -= float(p) * math.log2(float(p))
    return max(entropy, 0.0)


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    if rho1.dim != rho2.dim:
        raise DimensionError(f"Cannot compare states of dimension {rho1.dim} and {rho2.dim}")
    values = hermitian_eigen(rho1.matrix - rho2.matrix, tol).values
    return 0.5 * float(np.sum(np.abs(values)))


class Entanglement(NamedTuple):
    E: float
    E0: float
    deltaE: float


def _entropy_after_two(
    angles: BlochAngles, spec: CorrelatedPairSpec, pair: ChannelPair, tol: Tolerances
) -> float:
    result = collide_pair_exact(
        angles.density(), correlated_pair_state(spec, tol), pair, tol=tol
    )
    return von_neumann_entropy(result.rho2, tol)


def entanglement_after_two(
    angles: BlochAngles, spec: CorrelatedPairSpec, a: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> Entanglement:
    """Entanglement E = S(rho(2 dt)) for pure system and pure |R2>, against the q = 1/2 value."""
    pair = ChannelPair(a)
    e = _entropy_after_two(angles, spec, pair, tol)
    e0 = _entropy_after_two(angles, spec.uncorrelated(), pair, tol)
    return Entanglement(e, e0, e - e0)


def global_state_purity(
    angles: BlochAngles, spec: CorrelatedPairSpec, a: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Purity of the 18-dimensional system (x) pair state after both collisions."""
    state = exact_global_state(
        angles.density(), correlated_pair_state(spec, tol), ChannelPair(a), tol=tol
    )
    return purity(DensityMatrix(state))


def _delta_e_point(
    theta: float, phi: float, Q: float, a: float, eps1: float, eps2: float, tol: Tolerances
) -> DeltaERecord:
    try:
        spec = CorrelatedPairSpec.from_correlation(eps1, eps2, Q)
        ent = entanglement_after_two(BlochAngles(theta, phi), spec, a, tol)
    except CollisimError as exc:
        return DeltaERecord(theta=theta, phi=phi, Q=Q, error=str(exc))
    return DeltaERecord(theta=theta, phi=phi, Q=Q, E=ent.E, E0=ent.E0, deltaE=ent.deltaE)


def delta_e_sweep(
    theta_grid: Sequence[float],
    phi_grid: Sequence[float],
    Q_grid: Sequence[float],
    a: float,
    eps1: float,
    eps2: float,
    workers: int = 1,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[DeltaERecord]:
    """Entanglement difference over theta (outer), phi, Q (inner)."""
    points = list(product(theta_grid, phi_grid, Q_grid))
    console.print(f"[blue]Evaluating {len(points)} points with {workers} worker(s)[/blue]")

    def run(point: tuple[float, float, float]) -> DeltaERecord:
        return _delta_e_point(*point, a, eps1, eps2, tol)

    if workers <= 1:
        return [run(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, points))


class MonotonicityReport(NamedTuple):
    passed: bool
    entropies: list[float]


def entropy_monotonicity_check(
    rho0: DensityMatrix,
    spec: CorrelatedPairSpec,
    a: float,
    n_steps: int = 2,
    slack: float = 1e-10,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> MonotonicityReport:
    """Whether S(rho) never decreases from one collision to the next."""
    states = evolve_correlated_chain(rho0, spec, ChannelPair(a), n_steps)
    entropies = [von_neumann_entropy(s, tol) for s in states]
    passed = all(later >= earlier - slack for earlier, later in zip(entropies, entropies[1:]))
    return MonotonicityReport(passed, entropies)
