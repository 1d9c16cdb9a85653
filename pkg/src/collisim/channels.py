"""Collision operators, the interaction Hamiltonian and the collision unitary."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from collisim.errors import DomainError, NonUnitaryError, SquareConditionError
from collisim.linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, ComplexMatrix, as_matrix, dagger
from collisim.models import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True)
class ChannelAxis:
    """Unit vector s such that sigma = s . (sigma_x, sigma_y, sigma_z)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > DEFAULT_TOLERANCES.unit_axis:
            raise DomainError(f"Channel axis must be a unit vector, norm is {norm:.15g}")

    @classmethod
    def in_xz_plane(cls, a: float) -> "ChannelAxis":
        """The axis (sqrt(a), 0, sqrt(1 - a)) of the canonical first channel."""
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"a must lie in [0, 1], got {a}")
        return cls(math.sqrt(a), 0.0, math.sqrt(1.0 - a))


def pauli_from_axis(axis: ChannelAxis) -> ComplexMatrix:
    """s_x sigma_x + s_y sigma_y + s_z sigma_z; Hermitian, squares to identity."""
    return np.asarray(axis.x * PAULI_X + axis.y * PAULI_Y + axis.z * PAULI_Z, dtype=np.complex128)


@dataclass(frozen=True)
class ChannelPair:
    """sigma_1 = sqrt(a) sigma_x + sqrt(1 - a) sigma_z and sigma_2 = sigma_z."""

    a: float
    sigma1: ComplexMatrix = field(init=False, repr=False, compare=False)
    sigma2: ComplexMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma1", pauli_from_axis(ChannelAxis.in_xz_plane(self.a)))
        object.__setattr__(self, "sigma2", np.array(PAULI_Z, copy=True))

    @property
    def sigmas(self) -> list[ComplexMatrix]:
        return [self.sigma1, self.sigma2]


def canonical_pair(a: float) -> ChannelPair:
    return ChannelPair(a)


@dataclass(frozen=True)
class CollisionConfig:
    """Coupling eta, environment levels d and the fixed duration tau = pi / (2 eta)."""

    eta: float = 1.0
    d: int = 3
    tau: float = field(init=False)

    def __post_init__(self) -> None:
        if self.eta <= 0.0:
            raise DomainError(f"eta must be positive, got {self.eta}")
        if self.d < 1:
            raise DomainError(f"d must be at least 1, got {self.d}")
        object.__setattr__(self, "tau", math.pi / (2.0 * self.eta))


def check_collision_operator(sigma: npt.ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexMatrix:
    """Return ``sigma`` as a matrix if it is a 2x2 Hermitian unitary."""
    mat = as_matrix(sigma)
    if mat.shape != (2, 2):
        raise NonUnitaryError(f"Collision operator must be 2x2, got {mat.shape}")
    if np.max(np.abs(mat - dagger(mat))) > tol.unitary:
        raise NonUnitaryError("Collision operator is not Hermitian")
    if np.max(np.abs(mat @ mat - PAULI_I)) > tol.unitary:
        raise NonUnitaryError("Collision operator does not square to identity")
    return mat


def interaction_hamiltonian(
    sigmas: Sequence[npt.ArrayLike],
    eta: float = 1.0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    """H = eta (I (x) |0><0| + sum_i sigma_i (x) |i><i|) on system (x) one d-level particle."""
    ops = [PAULI_I] + [check_collision_operator(s, tol) for s in sigmas]
    d = len(ops)
    h = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    for level, op in enumerate(ops):
        proj = np.zeros((d, d), dtype=np.complex128)
        proj[level, level] = 1.0
        h += np.kron(op, proj)
    return eta * h


def collision_unitary(
    h: npt.ArrayLike,
    eta: float = 1.0,
    tau: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    """U(tau) = cos(eta tau) - i (H / eta) sin(eta tau), valid because H^2 = eta^2 I.

    ``tau`` defaults to the collision time pi / (2 eta), where U = -i H / eta.
    """
    mat = as_matrix(h)
    if tau is None:
        tau = math.pi / (2.0 * eta)
    ident = np.eye(mat.shape[0], dtype=np.complex128)
    defect = float(np.max(np.abs(mat @ mat - eta**2 * ident)))
    if defect > tol.square_condition:
        raise SquareConditionError(f"H^2 differs from eta^2 I by {defect:.3e}")
    return np.asarray(
        math.cos(eta * tau) * ident - 1j * (mat / eta) * math.sin(eta * tau), dtype=np.complex128
    )
