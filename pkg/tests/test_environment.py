"""Tests for environment states."""

import math

import numpy as np
import pytest

from collisim.environment import (
    CorrelatedPairSpec,
    EpsilonVector,
    GhzChainSpec,
    correlated_pair_state,
    dephased_pair_state,
    ghz_chain_density,
    ghz_weights,
    product_env_mixed,
    product_env_pure,
)
from collisim.errors import DomainError
from collisim.linalg import partial_trace


class TestEpsilonVector:
    """Tests for EpsilonVector."""

    def test_total(self) -> None:
        eps = EpsilonVector((0.01, 0.02))
        assert eps.total == pytest.approx(0.03)
        assert eps.d == 3

    def test_negative(self) -> None:
        with pytest.raises(DomainError):
            EpsilonVector((-0.1, 0.2))

    def test_sum_above_one(self) -> None:
        with pytest.raises(DomainError):
            EpsilonVector((0.6, 0.5))


class TestProductEnvironment:
    """Tests for product_env_mixed() and product_env_pure()."""

    def test_mixed_ground(self) -> None:
        omega = product_env_mixed(EpsilonVector((0.0, 0.0)), 3)
        assert np.allclose(omega.matrix, np.diag([1.0, 0.0, 0.0]))

    def test_mixed_reference_parameters(self) -> None:
        omega = product_env_mixed(EpsilonVector((0.01, 0.02)), 3)
        assert np.allclose(omega.matrix, np.diag([0.97, 0.01, 0.02]), atol=1e-15)

    def test_mixed_trace(self, rng: np.random.Generator) -> None:
        for _ in range(10):
            e = rng.uniform(0, 0.5, size=2)
            omega = product_env_mixed(EpsilonVector(tuple(e)), 3)
            assert np.trace(omega.matrix).real == pytest.approx(1.0, abs=1e-12)

    def test_pure_ground(self) -> None:
        r = product_env_pure(EpsilonVector((0.0, 0.0)), 3)
        assert np.allclose(r.amplitudes, [1.0, 0.0, 0.0])

    def test_pure_amplitudes(self) -> None:
        r = product_env_pure(EpsilonVector((0.01, 0.02)), 3)
        assert np.allclose(r.amplitudes, [math.sqrt(0.97), 0.1, math.sqrt(0.02)])
        assert abs(np.linalg.norm(r.amplitudes) - 1.0) < 1e-14

    def test_level_mismatch(self) -> None:
        with pytest.raises(DomainError):
            product_env_pure(EpsilonVector((0.1, 0.1)), 4)


class TestCorrelatedPair:
    """Tests for CorrelatedPairSpec and the |R2> state."""

    def test_ground(self) -> None:
        amps = correlated_pair_state(CorrelatedPairSpec(0.0, 0.0, 0.7)).amplitudes
        assert np.allclose(amps, np.eye(9)[0])

    def test_uncorrelated_is_product(self) -> None:
        spec = CorrelatedPairSpec(0.01, 0.02, 0.5)
        single = product_env_pure(spec.eps, 3).amplitudes
        assert np.allclose(correlated_pair_state(spec).amplitudes, np.kron(single, single), atol=1e-12)

    def test_fully_correlated(self) -> None:
        amps = correlated_pair_state(CorrelatedPairSpec(0.01, 0.01, 1.0)).amplitudes
        assert amps[5] == 0.0
        assert amps[7] == 0.0
        assert amps[4] == pytest.approx(math.sqrt(2) * 0.01)

    def test_norm_and_marginal(self, rng: np.random.Generator) -> None:
        for _ in range(20):
            spec = CorrelatedPairSpec(
                float(rng.uniform(0, 0.3)), float(rng.uniform(0, 0.3)), float(rng.uniform(0, 1))
            )
            state = correlated_pair_state(spec)
            assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-12
            marginal = partial_trace(state.density().matrix, [3, 3], {0})
            expected = np.diag([1 - spec.eps1 - spec.eps2, spec.eps1, spec.eps2])
            assert np.allclose(np.diag(marginal), np.diag(expected), atol=1e-12)

    def test_from_correlation(self) -> None:
        spec = CorrelatedPairSpec.from_correlation(0.01, 0.02, -0.5)
        assert spec.q == pytest.approx(0.25)
        assert spec.Q == pytest.approx(-0.5)
        assert spec.uncorrelated().Q == 0.0

    def test_negative_radicand(self) -> None:
        with pytest.raises(DomainError):
            CorrelatedPairSpec(0.6, 0.1, 1.0)

    def test_q_out_of_range(self) -> None:
        with pytest.raises(DomainError):
            CorrelatedPairSpec.from_correlation(0.01, 0.02, 1.5)

    def test_dephased(self, rng: np.random.Generator) -> None:
        ground = dephased_pair_state(CorrelatedPairSpec(0.0, 0.0, 0.5))
        assert np.allclose(ground.matrix, np.diag(np.eye(9)[0]))
        spec = CorrelatedPairSpec(0.1, 0.2, float(rng.uniform(0, 1)))
        assert np.trace(dephased_pair_state(spec).matrix).real == pytest.approx(1.0, abs=1e-12)


class TestGhzChain:
    """Tests for GhzChainSpec, ghz_weights() and ghz_chain_density()."""

    def test_valid(self) -> None:
        assert GhzChainSpec((1.0, 0.0, 0.0), 3).d == 3
        assert GhzChainSpec((0.9, 0.05, 0.05), 2).n == 2

    def test_invalid_probabilities(self) -> None:
        with pytest.raises(DomainError):
            GhzChainSpec((0.5, 0.6, -0.1), 2)
        with pytest.raises(DomainError):
            GhzChainSpec((0.5, 0.4), 2)

    def test_density(self) -> None:
        rho = ghz_chain_density(GhzChainSpec((0.9, 0.05, 0.05), 2))
        diag = np.real(np.diag(rho.matrix))
        assert diag[0] == pytest.approx(0.9)
        assert diag[4] == pytest.approx(0.05)  # |11>
        assert diag[8] == pytest.approx(0.05)  # |22>
        assert diag.sum() == pytest.approx(1.0)

    def test_weights_passthrough(self) -> None:
        spec = GhzChainSpec((0.9, 0.05, 0.05), 2)
        assert ghz_weights(spec) is spec
