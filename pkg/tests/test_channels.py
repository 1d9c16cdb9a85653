"""Tests for collision operators and the collision unitary."""

import math

import numpy as np
import pytest

from collisim.channels import (
    ChannelAxis,
    ChannelPair,
    CollisionConfig,
    canonical_pair,
    check_collision_operator,
    collision_unitary,
    interaction_hamiltonian,
    pauli_from_axis,
)
from collisim.errors import DomainError, NonUnitaryError, SquareConditionError
from collisim.linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z


class TestChannelAxis:
    """Tests for ChannelAxis and pauli_from_axis()."""

    def test_x_axis(self) -> None:
        assert np.array_equal(pauli_from_axis(ChannelAxis(1, 0, 0)), PAULI_X)

    def test_z_axis(self) -> None:
        assert np.array_equal(pauli_from_axis(ChannelAxis(0, 0, 1)), PAULI_Z)

    def test_xz_plane(self) -> None:
        sigma = pauli_from_axis(ChannelAxis.in_xz_plane(0.05))
        assert np.allclose(sigma, math.sqrt(0.05) * PAULI_X + math.sqrt(0.95) * PAULI_Z)
        assert np.max(np.abs(sigma @ sigma - PAULI_I)) < 1e-14

    def test_not_unit(self) -> None:
        with pytest.raises(DomainError):
            ChannelAxis(1, 1, 0)

    def test_a_out_of_range(self) -> None:
        with pytest.raises(DomainError):
            ChannelAxis.in_xz_plane(1.5)


class TestChannelPair:
    """Tests for the canonical channel pair."""

    def test_canonical_form(self) -> None:
        pair = canonical_pair(0.3)
        assert np.allclose(pair.sigma1, math.sqrt(0.3) * PAULI_X + math.sqrt(0.7) * PAULI_Z)
        assert np.array_equal(pair.sigma2, PAULI_Z)

    def test_commuting_when_a_zero(self) -> None:
        pair = ChannelPair(0.0)
        assert np.allclose(pair.sigma1 @ pair.sigma2, pair.sigma2 @ pair.sigma1)

    def test_sigmas_are_valid(self) -> None:
        for sigma in ChannelPair(0.7).sigmas:
            check_collision_operator(sigma)


class TestCollisionConfig:
    """Tests for CollisionConfig."""

    def test_tau(self) -> None:
        assert CollisionConfig(eta=2.0).tau == pytest.approx(math.pi / 4, abs=1e-12)

    def test_bad_eta(self) -> None:
        with pytest.raises(DomainError):
            CollisionConfig(eta=0.0)


class TestCheckCollisionOperator:
    """Tests for check_collision_operator()."""

    def test_not_hermitian(self) -> None:
        with pytest.raises(NonUnitaryError):
            check_collision_operator(np.array([[0, 1], [0, 0]]))

    def test_not_involution(self) -> None:
        with pytest.raises(NonUnitaryError):
            check_collision_operator(2 * PAULI_Z)

    def test_wrong_shape(self) -> None:
        with pytest.raises(NonUnitaryError):
            check_collision_operator(np.eye(3))


class TestInteractionHamiltonian:
    """Tests for interaction_hamiltonian()."""

    def test_single_level(self) -> None:
        assert np.allclose(interaction_hamiltonian([], eta=1.7), 1.7 * PAULI_I)

    def test_block_structure(self) -> None:
        h = interaction_hamiltonian([PAULI_Z, PAULI_X])
        assert h.shape == (6, 6)
        blocks = h.reshape(2, 3, 2, 3)
        assert np.allclose(blocks[:, 0, :, 0], PAULI_I)
        assert np.allclose(blocks[:, 1, :, 1], PAULI_Z)
        assert np.allclose(blocks[:, 2, :, 2], PAULI_X)
        assert np.allclose(h @ h, np.eye(6))

    def test_eta_scaling(self) -> None:
        h = interaction_hamiltonian([PAULI_Y], eta=2.0)
        assert np.allclose(h @ h, 4.0 * np.eye(4))


class TestCollisionUnitary:
    """Tests for collision_unitary()."""

    def test_zero_time(self) -> None:
        h = interaction_hamiltonian(ChannelPair(0.4).sigmas)
        assert np.allclose(collision_unitary(h, tau=0.0), np.eye(6))

    def test_collision_time(self) -> None:
        eta = 1.3
        h = interaction_hamiltonian(ChannelPair(0.4).sigmas, eta=eta)
        u = collision_unitary(h, eta=eta)
        assert np.max(np.abs(u - (-1j * h / eta))) < 1e-12
        assert np.max(np.abs(u @ u.conj().T - np.eye(6))) < 1e-12

    def test_unitary_any_time(self, rng: np.random.Generator) -> None:
        h = interaction_hamiltonian([PAULI_X, PAULI_Y])
        for tau in rng.uniform(0, 10, size=5):
            u = collision_unitary(h, tau=float(tau))
            assert np.max(np.abs(u @ u.conj().T - np.eye(6))) < 1e-12

    def test_periodic(self, rng: np.random.Generator) -> None:
        eta = 1.3
        h = interaction_hamiltonian(ChannelPair(0.4).sigmas, eta=eta)
        for tau in rng.uniform(0, 5, size=5):
            u = collision_unitary(h, eta=eta, tau=float(tau))
            full_period = collision_unitary(h, eta=eta, tau=float(tau) + 2 * math.pi / eta)
            half_period = collision_unitary(h, eta=eta, tau=float(tau) + math.pi / eta)
            assert np.max(np.abs(full_period - u)) <= 1e-12
            assert np.max(np.abs(half_period + u)) <= 1e-12

    def test_square_condition(self) -> None:
        with pytest.raises(SquareConditionError):
            collision_unitary(np.diag([1.0, 2.0]))
