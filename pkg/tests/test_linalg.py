"""Tests for the dense matrix kernel."""

import numpy as np
import pytest

from collisim.errors import DimensionError, InvalidStateError, NonHermitianError
from collisim.linalg import (
    PAULI_I,
    PAULI_X,
    PAULI_Z,
    DensityMatrix,
    bloch_vector,
    embed_operator,
    hermitian_eigen,
    jacobi_eigh,
    partial_trace,
    purity,
    state_from_bloch,
    tensor,
    tensor_all,
    validate_density,
    validate_state_vector,
)
from collisim.models import DEFAULT_TOLERANCES
from tests.conftest import random_hermitian, random_mixed_state


class TestTensor:
    """Tests for tensor()."""

    def test_identities(self) -> None:
        assert np.array_equal(tensor(np.eye(2), np.eye(3)), np.eye(6))

    def test_block_layout(self) -> None:
        proj0 = np.diag([1.0, 0.0, 0.0])
        assert np.array_equal(tensor(PAULI_Z, proj0), np.diag([1, 0, 0, -1, 0, 0]))

    def test_bit_flip_both(self) -> None:
        ket00 = np.array([1, 0, 0, 0])
        assert np.array_equal(tensor(PAULI_X, PAULI_X) @ ket00, [0, 0, 0, 1])

    def test_tensor_all_order(self) -> None:
        out = tensor_all([PAULI_Z, PAULI_I, PAULI_X])
        assert np.array_equal(out, np.kron(np.kron(PAULI_Z, PAULI_I), PAULI_X))

    def test_tensor_all_empty(self) -> None:
        with pytest.raises(DimensionError):
            tensor_all([])

    def test_associative(self, rng: np.random.Generator) -> None:
        a, b, c = (
            rng.uniform(-1, 1, size=(n, n)) + 1j * rng.uniform(-1, 1, size=(n, n)) for n in (2, 3, 2)
        )
        left = tensor(tensor(a, b), c)
        right = tensor(a, tensor(b, c))
        assert np.max(np.abs(left - right)) <= 1e-14


class TestPartialTrace:
    """Tests for partial_trace()."""

    def test_product_state(self, rng: np.random.Generator) -> None:
        rho = random_mixed_state(rng).matrix
        omega = np.diag([0.97, 0.01, 0.02])
        assert np.allclose(partial_trace(np.kron(rho, omega), [2, 3], {0}), rho, atol=1e-14)
        assert np.allclose(partial_trace(np.kron(rho, omega), [2, 3], {1}), omega, atol=1e-14)

    def test_bell_state(self) -> None:
        phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert np.allclose(partial_trace(np.outer(phi, phi), [2, 2], {0}), np.eye(2) / 2)

    def test_keeps_middle_factor(self, rng: np.random.Generator) -> None:
        a, b, c = (random_mixed_state(rng).matrix for _ in range(3))
        full = tensor_all([a, b, c])
        assert np.allclose(partial_trace(full, [2, 2, 2], [1]), b, atol=1e-14)
        assert np.allclose(partial_trace(full, [2, 2, 2], [0, 2]), np.kron(a, c), atol=1e-14)

    def test_trace_preserved(self, rng: np.random.Generator) -> None:
        for _ in range(10):
            h = random_hermitian(rng, 6)
            reduced = partial_trace(h, [2, 3], {0})
            assert np.trace(reduced) == pytest.approx(np.trace(h), abs=1e-12)

    def test_scales_by_trace_of_rest(self, rng: np.random.Generator) -> None:
        a = random_hermitian(rng, 2)
        b = random_hermitian(rng, 3) + 2.0 * np.eye(3)
        expected = np.trace(b) * a
        assert np.max(np.abs(partial_trace(tensor(a, b), [2, 3], {0}) - expected)) <= 1e-12

    def test_shape_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            partial_trace(np.eye(5), [2, 3], {0})

    def test_empty_keep(self) -> None:
        with pytest.raises(DimensionError):
            partial_trace(np.eye(6), [2, 3], set())


class TestEmbedOperator:
    """Tests for embed_operator()."""

    def test_first_factor(self) -> None:
        assert np.allclose(embed_operator(PAULI_X, [2, 3], [0]), np.kron(PAULI_X, np.eye(3)))

    def test_non_adjacent_targets(self, rng: np.random.Generator) -> None:
        op_a, op_b = random_hermitian(rng, 2), random_hermitian(rng, 3)
        mid = random_hermitian(rng, 3)
        embedded = embed_operator(np.kron(op_a, op_b), [2, 3, 3], [0, 2])
        expected = tensor_all([op_a, np.eye(3), op_b])
        assert np.allclose(embedded, expected, atol=1e-14)
        # acts as identity on the middle factor
        state = tensor_all([np.eye(2), mid, np.eye(3)])
        assert np.allclose(embedded @ state, state @ embedded, atol=1e-12)

    def test_reversed_targets(self, rng: np.random.Generator) -> None:
        op_a, op_b = random_hermitian(rng, 2), random_hermitian(rng, 3)
        embedded = embed_operator(np.kron(op_b, op_a), [2, 3], [1, 0])
        assert np.allclose(embedded, np.kron(op_a, op_b), atol=1e-14)

    def test_bad_targets(self) -> None:
        with pytest.raises(DimensionError):
            embed_operator(PAULI_X, [2, 3], [0, 0])
        with pytest.raises(DimensionError):
            embed_operator(PAULI_X, [2, 3], [1])


class TestHermitianEigen:
    """Tests for hermitian_eigen() and the Jacobi solver."""

    def test_diagonal(self) -> None:
        values = hermitian_eigen(np.diag([3.0, 1.0, 2.0])).values
        assert np.allclose(values, [1.0, 2.0, 3.0])

    def test_pauli_x(self) -> None:
        assert np.allclose(hermitian_eigen(PAULI_X).values, [-1.0, 1.0])

    def test_reconstruction(self, rng: np.random.Generator) -> None:
        h = random_hermitian(rng, 4)
        values, vectors = hermitian_eigen(h)
        rebuilt = sum(values[i] * np.outer(vectors[:, i], vectors[:, i].conj()) for i in range(4))
        assert np.allclose(rebuilt, h, atol=1e-10)
        assert np.allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-12)

    def test_residual(self, rng: np.random.Generator) -> None:
        for n in (2, 4, 6, 9):
            h = random_hermitian(rng, n)
            values, vectors = hermitian_eigen(h)
            assert np.max(np.abs(h @ vectors - vectors * values)) <= 1e-10
            assert np.max(np.abs(vectors.conj().T @ vectors - np.eye(n))) <= 1e-12

    def test_eigenvalues_sum_to_trace(self, rng: np.random.Generator) -> None:
        for n in (2, 4, 6, 9):
            h = random_hermitian(rng, n)
            assert abs(float(np.sum(hermitian_eigen(h).values)) - np.trace(h).real) <= 1e-10

    def test_tiny_off_diagonal(self) -> None:
        h = np.diag([1.0, 2.0, 3.0]).astype(np.complex128)
        h[0, 2] = 1e-9 + 1e-9j
        h[2, 0] = np.conj(h[0, 2])
        values, vectors = jacobi_eigh(h)
        assert np.max(np.abs(h @ vectors - vectors * values)) <= 1e-13
        assert abs(float(np.sum(values)) - 6.0) <= 1e-13

    def test_jacobi_matches_lapack(self, rng: np.random.Generator) -> None:
        for n in (2, 4, 9, 18):
            h = random_hermitian(rng, n)
            assert np.allclose(jacobi_eigh(h).values, np.linalg.eigvalsh(h), atol=1e-10)

    def test_lapack_switch(self, rng: np.random.Generator) -> None:
        h = random_hermitian(rng, 5)
        lapack = DEFAULT_TOLERANCES.model_copy(update={"eigensolver": "lapack"})
        assert np.allclose(hermitian_eigen(h, lapack).values, hermitian_eigen(h).values, atol=1e-10)

    def test_degenerate(self) -> None:
        values, vectors = hermitian_eigen(np.eye(3))
        assert np.allclose(values, 1.0)
        assert np.allclose(vectors.conj().T @ vectors, np.eye(3))

    def test_rejects_non_hermitian(self) -> None:
        with pytest.raises(NonHermitianError):
            hermitian_eigen(np.array([[0, 1], [0, 0]]))


class TestValidation:
    """Tests for validate_density() and validate_state_vector()."""

    def test_maximally_mixed(self) -> None:
        assert validate_density(np.eye(2) / 2).dim == 2

    def test_negative_eigenvalue(self) -> None:
        with pytest.raises(InvalidStateError) as exc:
            validate_density(np.diag([1.5, -0.5]))
        assert exc.value.invariant == "positivity"

    def test_bad_trace(self) -> None:
        with pytest.raises(InvalidStateError) as exc:
            validate_density(np.diag([0.6, 0.6]))
        assert exc.value.invariant == "trace"

    def test_non_hermitian(self) -> None:
        with pytest.raises(InvalidStateError) as exc:
            validate_density(np.array([[0.5, 0.1], [0.2, 0.5]]))
        assert exc.value.invariant == "hermitian"

    def test_state_vector_norm(self) -> None:
        assert validate_state_vector([0.6, 0.8]).dim == 2
        with pytest.raises(InvalidStateError) as exc:
            validate_state_vector([1.0, 1.0])
        assert exc.value.invariant == "norm"

    def test_density_is_read_only(self) -> None:
        rho = DensityMatrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0


class TestBloch:
    """Tests for the Bloch-vector helpers."""

    def test_round_trip(self) -> None:
        r = np.array([0.3, -0.4, 0.5])
        assert np.allclose(bloch_vector(state_from_bloch(r)), r)

    def test_purity(self) -> None:
        assert purity(state_from_bloch([0, 0, 1])) == pytest.approx(1.0)
        assert purity(state_from_bloch([0, 0, 0])) == pytest.approx(0.5)

    def test_wrong_size(self) -> None:
        with pytest.raises(DimensionError):
            state_from_bloch([1.0, 0.0])
