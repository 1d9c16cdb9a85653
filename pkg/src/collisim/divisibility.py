"""Divisibility of the two-step dynamics.

Maps are handled in their Bloch-affine form r -> Lambda r + t. The intermediate map is
Phi21 = Phi20 o Phi10^-1, and complete positivity is read off the Choi matrix

    H = (I + sum_{mu,nu} Lambda_{mu nu} sigma_mu (x) sigma_nu^*) / 2,

which has trace 2 and equals (Phi (x) id)(|Omega><Omega|) with |Omega> = |00> + |11>.
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from rich.console import Console

from collisim.channels import ChannelPair
from collisim.dynamics import Channel, pair_collision_map, single_collision_map
from collisim.environment import CorrelatedPairSpec, EpsilonVector
from collisim.errors import (
    CollisimError,
    DimensionError,
    DomainError,
    NonHermitianError,
    NonInvertibleMapError,
    NonLinearChannelError,
    NonUnitalMapError,
)
from collisim.linalg import (
    PAULI_I,
    PAULI_Y,
    PAULIS,
    ComplexMatrix,
    RealArray,
    as_matrix,
    hermitian_eigen,
)
from collisim.models import DEFAULT_TOLERANCES, MarkovScanRow, Tolerances

console = Console(stderr=True)

# Operators Phi must be linear on, beyond the four tomography inputs.
_PROBE_A: ComplexMatrix = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]], dtype=np.complex128)
_PROBE_B: ComplexMatrix = np.array([[0.25, -0.4j], [0.4j, 0.75]], dtype=np.complex128)


def _components(m: ComplexMatrix) -> tuple[complex, npt.NDArray[np.complex128]]:
    """Trace and (complex) Bloch components of a 2x2 operator."""
    return complex(np.trace(m)), np.array([np.trace(m @ s) for s in PAULIS], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Trace-preserving qubit map in Bloch form."""

    Lambda: RealArray
    t: RealArray = field(default_factory=lambda: np.zeros(3, dtype=np.float64))

    def __post_init__(self) -> None:
        lam = np.array(self.Lambda, dtype=np.float64, copy=True)
        t = np.array(self.t, dtype=np.float64, copy=True).reshape(-1)
        if lam.shape != (3, 3) or t.shape != (3,):
            raise DimensionError(f"Affine map needs a 3x3 Lambda and 3-vector t, got {lam.shape}, {t.shape}")
        lam.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "Lambda", lam)
        object.__setattr__(self, "t", t)

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(np.eye(3))

    def apply(self, m: npt.ArrayLike) -> ComplexMatrix:
        """Act on any 2x2 operator, extending the Bloch action linearly."""
        mat = as_matrix(m)
        if mat.shape != (2, 2):
            raise DimensionError(f"Qubit map acts on 2x2 operators, got {mat.shape}")
        c0, r = _components(mat)
        r_out = self.Lambda @ r + c0 * self.t
        out = c0 * PAULI_I + sum(r_out[i] * s for i, s in enumerate(PAULIS))
        return np.asarray(0.5 * out, dtype=np.complex128)

    def compose(self, before: "AffineMap") -> "AffineMap":
        """self o before."""
        return AffineMap(self.Lambda @ before.Lambda, self.Lambda @ before.t + self.t)


def affine_from_channel(apply: Channel, tol: Tolerances = DEFAULT_TOLERANCES) -> AffineMap:
    """Process tomography from the inputs I, sigma_x, sigma_y, sigma_z.

    Raises NonLinearChannelError when the result does not reproduce ``apply`` on extra probes.
    """
    image_i = as_matrix(apply(np.array(PAULI_I)))
    _, t = _components(image_i)
    columns = [_components(as_matrix(apply(np.array(s))))[1] for s in PAULIS]
    lam_c = np.column_stack(columns)

    if np.max(np.abs(lam_c.imag)) > tol.linearity or np.max(np.abs(t.imag)) > tol.linearity:
        raise NonLinearChannelError("Channel does not preserve Hermiticity")
    affine = AffineMap(0.5 * lam_c.real, 0.5 * t.real)

    for probe in (_PROBE_A, _PROBE_B, _PROBE_A + 2.0 * _PROBE_B):
        deviation = float(np.max(np.abs(as_matrix(apply(probe)) - affine.apply(probe))))
        if deviation > tol.linearity:
            raise NonLinearChannelError(f"Linearity probe deviates by {deviation:.3e}")
    return affine


def divide_maps(full: AffineMap, first: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> AffineMap:
    """The map Phi21 with full = Phi21 o first."""
    singular = np.linalg.svd(first.Lambda, compute_uv=False)
    if float(singular.min()) < tol.invertible:
        raise NonInvertibleMapError(
            f"Intermediate map is not invertible (smallest singular value {singular.min():.3e})"
        )
    lam = np.linalg.solve(first.Lambda.T, full.Lambda.T).T
    return AffineMap(lam, full.t - lam @ first.t)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Dynamical matrix of a trace-preserving qubit map, normalized to trace 2."""

    H: ComplexMatrix

    def __post_init__(self) -> None:
        h = np.array(self.H, dtype=np.complex128, copy=True)
        if h.shape != (4, 4):
            raise DimensionError(f"Choi matrix must be 4x4, got {h.shape}")
        if np.max(np.abs(h - h.conj().T)) > DEFAULT_TOLERANCES.hermitian:
            raise NonHermitianError("Choi matrix is not Hermitian")
        trace = complex(np.trace(h))
        if abs(trace - 2.0) > 1e-10:
            raise DomainError(f"Choi matrix trace is {trace.real:.15g}, expected 2")
        h.setflags(write=False)
        object.__setattr__(self, "H", h)


def choi_from_affine(affine: AffineMap, tol: Tolerances = DEFAULT_TOLERANCES) -> ChoiMatrix:
    if float(np.linalg.norm(affine.t)) > tol.unital:
        raise NonUnitalMapError(f"Map has translation |t| = {np.linalg.norm(affine.t):.3e}")
    h = np.eye(4, dtype=np.complex128)
    for mu, s_mu in enumerate(PAULIS):
        for nu, s_nu in enumerate(PAULIS):
            h += affine.Lambda[mu, nu] * np.kron(s_mu, s_nu.conj())
    return ChoiMatrix(0.5 * h)


class CpVerdict(NamedTuple):
    min_eigenvalue: float
    is_cp: bool
    tolerance: float


def cp_test(choi: ChoiMatrix, tol: float | None = None) -> CpVerdict:
    """Phi is completely positive iff H >= 0, up to ``tol`` (default ``Tolerances.cp``)."""
    slack = DEFAULT_TOLERANCES.cp if tol is None else tol
    values = hermitian_eigen(choi.H).values
    min_eigenvalue = float(values[0])
    return CpVerdict(min_eigenvalue, min_eigenvalue >= -slack, slack)


class KrausTerm(NamedTuple):
    weight: float
    operator: ComplexMatrix


def kraus_from_choi(choi: ChoiMatrix) -> list[KrausTerm]:
    """Phi(rho) = sum_i w_i T_i rho T_i^+ from the eigensystem of H, largest weight first.

    T_i is the eigenvector u_i read row-wise as [[u0, u1], [u2, u3]]. Negative weights are
    kept; they mark a map that is not CP.
    """
    system = hermitian_eigen(choi.H)
    terms = [
        KrausTerm(float(system.values[i]), np.array(system.vectors[:, i].reshape(2, 2)))
        for i in range(4)
    ]
    return terms[::-1]


def channel_from_kraus(terms: Sequence[KrausTerm]) -> Channel:
    def apply(m: ComplexMatrix) -> ComplexMatrix:
        out = np.zeros((2, 2), dtype=np.complex128)
        for term in terms:
            out += term.weight * (term.operator @ m @ term.operator.conj().T)
        return out

    return apply


def pauli_weights(affine: AffineMap) -> tuple[float, float, float, float]:
    """Diagonal (p_0, p_x, p_y, p_z) of the Pauli process matrix of a unital map.

    For a Pauli channel these are the probabilities of I, sigma_x, sigma_y, sigma_z; the Choi
    eigenvalues are then 2 p_mu.
    """
    lxx, lyy, lzz = (float(v) for v in np.diag(affine.Lambda))
    return (
        (1.0 + lxx + lyy + lzz) / 4.0,
        (1.0 + lxx - lyy - lzz) / 4.0,
        (1.0 - lxx + lyy - lzz) / 4.0,
        (1.0 - lxx - lyy + lzz) / 4.0,
    )


def leading_eigenvalue(a: float, Q: float, eps1: float, eps2: float) -> float:
    """Leading small-eps term of the lowest Choi eigenvalue of Phi21 (trace-2 normalization)."""
    return -4.0 * a * Q * eps1 * eps2


def two_step_map(
    a: float, Q: float, eps1: float, eps2: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> AffineMap:
    """Phi21 for the canonical channel pair and the correlated pair state."""
    spec = CorrelatedPairSpec.from_correlation(eps1, eps2, Q)
    pair = ChannelPair(a)
    first = affine_from_channel(single_collision_map(spec.eps, pair), tol)
    full = affine_from_channel(pair_collision_map(spec, pair), tol)
    return divide_maps(full, first, tol)


def compensated_map(phi21: AffineMap, eps_y: float) -> AffineMap:
    """Phi21 followed by an independent sigma_y collision of probability ``eps_y``."""
    y_step = affine_from_channel(single_collision_map(EpsilonVector((eps_y,)), [PAULI_Y]))
    return y_step.compose(phi21)


def y_compensation_threshold(a: float, eps: float, eps_y: float) -> float:
    """Largest Q kept CP by the extra sigma_y channel, at leading order (eps1 = eps2 = eps)."""
    if a <= 0.0 or eps <= 0.0:
        return float("inf")
    return eps_y / (2.0 * a * eps**2)


def _scan_point(
    a: float, Q: float, eps1: float, eps2: float, eps_y: float, tol: Tolerances
) -> MarkovScanRow:
    try:
        phi21 = two_step_map(a, Q, eps1, eps2, tol)
        if eps_y > 0.0:
            phi21 = compensated_map(phi21, eps_y)
        choi = choi_from_affine(phi21, tol)
        verdict = cp_test(choi, tol.cp)
        negative = sum(1 for term in kraus_from_choi(choi) if term.weight < -tol.cp)
    except CollisimError as exc:
        return MarkovScanRow(Q=Q, a=a, eps1=eps1, eps2=eps2, error=str(exc))
    return MarkovScanRow(
        Q=Q,
        a=a,
        eps1=eps1,
        eps2=eps2,
        min_eigenvalue=verdict.min_eigenvalue,
        is_cp=verdict.is_cp,
        negative_weights=negative,
    )


def markovianity_scan(
    a_grid: Sequence[float],
    Q_grid: Sequence[float],
    eps1: float,
    eps2: float,
    eps_y: float = 0.0,
    workers: int = 1,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[MarkovScanRow]:
    """CP test of Phi21 over an (a, Q) grid; a is the outer axis.

    Points that fail with a CollisimError become rows with the message in ``error``.
    """
    points = list(product(a_grid, Q_grid))
    console.print(f"[blue]Scanning {len(points)} points with {workers} worker(s)[/blue]")

    def run(point: tuple[float, float]) -> MarkovScanRow:
        return _scan_point(point[0], point[1], eps1, eps2, eps_y, tol)

    if workers <= 1:
        rows = [run(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, points))

    failed = sum(1 for r in rows if r.error is not None)
    if failed:
        console.print(f"[yellow]{failed} point(s) outside the valid domain[/yellow]")
    return rows
