"""Dense complex matrix kernel.

Conventions:
- Tensor factors are ordered system first, then environment particles in collision order.
- ``partial_trace`` takes the list of factor dimensions and the indices of the factors to keep.
- ``hermitian_eigen`` returns eigenvalues ascending with orthonormal eigenvector columns.
"""

from dataclasses import dataclass, field
from functools import reduce
from math import prod
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from collisim.errors import DimensionError, InvalidStateError, NonHermitianError
from collisim.models import DEFAULT_TOLERANCES, Tolerances

ComplexMatrix = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]

PAULI_I: ComplexMatrix = np.eye(2, dtype=np.complex128)
PAULI_X: ComplexMatrix = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y: ComplexMatrix = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z: ComplexMatrix = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS: tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix] = (PAULI_X, PAULI_Y, PAULI_Z)

for _m in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z):
    _m.setflags(write=False)


def as_matrix(m: npt.ArrayLike) -> ComplexMatrix:
    """Coerce to a 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"Expected a non-empty 2-D matrix, got shape {arr.shape}")
    return arr


def _frozen_copy(m: npt.ArrayLike) -> ComplexMatrix:
    arr = np.array(m, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A dim x dim state. Build checked instances with ``validate_density``."""

    matrix: ComplexMatrix = field(repr=False)

    def __post_init__(self) -> None:
        m = _frozen_copy(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True, eq=False)
class StateVector:
    """A pure state. Build checked instances with ``validate_state_vector``."""

    amplitudes: npt.NDArray[np.complex128] = field(repr=False)

    def __post_init__(self) -> None:
        v = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def density(self) -> DensityMatrix:
        """The projector |psi><psi|."""
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


class Eigensystem(NamedTuple):
    values: RealArray
    vectors: ComplexMatrix


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return m.conj().T


def tensor(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(factors: list[ComplexMatrix]) -> ComplexMatrix:
    """Left-to-right Kronecker product of several factors."""
    if not factors:
        raise DimensionError("Need at least one factor")
    return reduce(tensor, factors)


def partial_trace(m: npt.ArrayLike, dims: list[int], keep: set[int] | list[int]) -> ComplexMatrix:
    """Trace out every factor not listed in ``keep``.

    The kept factors stay in their original order.
    """
    mat = as_matrix(m)
    keep_sorted = sorted(set(keep))
    n = len(dims)
    if not keep_sorted:
        raise DimensionError("keep must name at least one factor")
    if any(k < 0 or k >= n for k in keep_sorted):
        raise DimensionError(f"keep {keep_sorted} out of range for {n} factors")
    total = prod(dims)
    if mat.shape != (total, total):
        raise DimensionError(f"Matrix shape {mat.shape} does not match dims {dims} (total {total})")

    t = mat.reshape(list(dims) + list(dims))
    current = n
    for idx in reversed(range(n)):
        if idx in keep_sorted:
            continue
        t = np.trace(t, axis1=idx, axis2=idx + current)
        current -= 1
    kept = prod(dims[k] for k in keep_sorted)
    return np.asarray(t.reshape(kept, kept), dtype=np.complex128)


def embed_operator(op: npt.ArrayLike, dims: list[int], targets: list[int]) -> ComplexMatrix:
    """Lift ``op`` acting on the ``targets`` factors (in that order) to the full space."""
    mat = as_matrix(op)
    n = len(dims)
    if len(set(targets)) != len(targets) or any(t < 0 or t >= n for t in targets):
        raise DimensionError(f"Invalid target factors {targets} for {n} factors")
    d_targets = prod(dims[t] for t in targets)
    if mat.shape != (d_targets, d_targets):
        raise DimensionError(f"Operator shape {mat.shape} does not match targets of size {d_targets}")

    rest = [i for i in range(n) if i not in targets]
    order = list(targets) + rest
    d_rest = prod(dims[i] for i in rest)
    big = np.kron(mat, np.eye(d_rest, dtype=np.complex128))

    shape = [dims[i] for i in order]
    perm = list(np.argsort(order))
    full = big.reshape(shape + shape).transpose(perm + [p + n for p in perm])
    total = prod(dims)
    return np.asarray(full.reshape(total, total), dtype=np.complex128)


def _hermiticity_defect(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def jacobi_eigh(
    h: ComplexMatrix,
    tol: float = DEFAULT_TOLERANCES.jacobi_offdiag,
    max_sweeps: int = DEFAULT_TOLERANCES.jacobi_max_sweeps,
) -> Eigensystem:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each (p, q) rotation first removes the phase of ``A[p, q]`` and then applies the real
    symmetric rotation that zeroes it. Stops when the off-diagonal Frobenius norm drops
    below the absolute ``tol`` or after ``max_sweeps``.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)

    for _sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                absb = abs(b)
                if absb == 0.0:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                # Below the rounding of both diagonal entries: drop instead of rotating.
                g = 100.0 * absb
                if abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = b / absb
                zeta = (aqq - app) / (2.0 * absb)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g_rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g_rot
                a[cols, :] = dagger(g_rot) @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                v[:, cols] = v[:, cols] @ g_rot

    values = np.real(np.diag(a)).astype(np.float64)
    order = np.argsort(values, kind="stable")
    return Eigensystem(values[order], v[:, order])


def hermitian_eigen(h: npt.ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> Eigensystem:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    Eigenvectors of degenerate eigenvalues are an arbitrary orthonormal basis of the eigenspace.
    """
    mat = as_matrix(h)
    if mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"Eigenproblem needs a square matrix, got {mat.shape}")
    defect = _hermiticity_defect(mat)
    if defect > tol.eigen_hermitian:
        raise NonHermitianError(f"Matrix is not Hermitian (defect {defect:.3e})")

    sym = 0.5 * (mat + dagger(mat))
    if tol.eigensolver == "jacobi" and sym.shape[0] <= tol.jacobi_max_dim:
        return jacobi_eigh(sym, tol.jacobi_offdiag, tol.jacobi_max_sweeps)
    values, vectors = np.linalg.eigh(sym)
    return Eigensystem(np.asarray(values, dtype=np.float64), np.asarray(vectors, dtype=np.complex128))


def validate_density(m: npt.ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Check the density-matrix invariants and wrap ``m``.

    Raises ``InvalidStateError`` naming the first violated invariant.
    """
    mat = as_matrix(m)
    if mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"Density matrix must be square, got shape {mat.shape}")
    defect = _hermiticity_defect(mat)
    if defect > tol.hermitian:
        raise InvalidStateError("hermitian", f"hermiticity defect {defect:.3e}")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > tol.trace:
        raise InvalidStateError("trace", f"trace is {tr.real:.15g}, expected 1")
    lowest = float(hermitian_eigen(mat, tol).values[0])
    if lowest < -tol.psd:
        raise InvalidStateError("positivity", f"negative eigenvalue {lowest:.3e}")
    return DensityMatrix(mat)


def validate_state_vector(v: npt.ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> StateVector:
    """Check that ``v`` is a unit vector and wrap it."""
    vec = np.asarray(v, dtype=np.complex128).reshape(-1)
    if vec.size < 1:
        raise DimensionError("State vector is empty")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > tol.unit_vector:
        raise InvalidStateError("norm", f"norm is {norm:.15g}, expected 1")
    return StateVector(vec)


def as_density(state: DensityMatrix | StateVector) -> DensityMatrix:
    if isinstance(state, StateVector):
        return state.density()
    return state


def bloch_vector(rho: DensityMatrix | ComplexMatrix) -> RealArray:
    """Bloch vector r_i = Tr(rho sigma_i) of a qubit operator."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
    if mat.shape != (2, 2):
        raise DimensionError(f"Bloch vector needs a 2x2 matrix, got {mat.shape}")
    return np.array([float(np.real(np.trace(mat @ s))) for s in PAULIS], dtype=np.float64)


def state_from_bloch(r: npt.ArrayLike) -> DensityMatrix:
    """The qubit state (I + r . sigma) / 2."""
    vec = np.asarray(r, dtype=np.float64).reshape(-1)
    if vec.shape != (3,):
        raise DimensionError(f"Bloch vector must have 3 components, got {vec.shape}")
    mat = 0.5 * (PAULI_I + vec[0] * PAULI_X + vec[1] * PAULI_Y + vec[2] * PAULI_Z)
    return DensityMatrix(mat)


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))
