"""Evolution of the system qubit through collisions.

Two routes are provided and kept in agreement by the test-suite:

- exact: build ``rho (x) omega_env``, apply the collision unitaries one particle at a time and
  trace out the environment;
- analytic: the closed-form maps acting on 2x2 matrices only.

The time step is dt = 1, so rates gamma_i and probabilities eps_i coincide numerically.
"""

import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from collisim.channels import (
    ChannelPair,
    check_collision_operator,
    collision_unitary,
    interaction_hamiltonian,
)
from collisim.environment import CorrelatedPairSpec, EpsilonVector, GhzChainSpec
from collisim.errors import DimensionError, DomainError, SingularConfigurationError
from collisim.linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ComplexMatrix,
    DensityMatrix,
    StateVector,
    as_density,
    embed_operator,
    partial_trace,
)
from collisim.models import DEFAULT_TOLERANCES, Tolerances

Channel = Callable[[ComplexMatrix], ComplexMatrix]
Sigmas = Sequence[npt.ArrayLike] | ChannelPair


@dataclass(frozen=True, eq=False)
class TwoStepResult:
    """States after the first and second collision with a correlated pair.

    ``correction`` is the part of ``rho2`` proportional to Q; it is zero when Q = 0.
    """

    rho1: DensityMatrix
    rho2: DensityMatrix
    correction: ComplexMatrix


@dataclass(frozen=True)
class RateSet:
    """Lindblad rates gamma_i over a step dt, with eps_i = gamma_i dt."""

    gamma: tuple[float, ...]
    dt: float = 1.0

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        self.to_eps()

    def to_eps(self) -> EpsilonVector:
        return EpsilonVector(tuple(g * self.dt for g in self.gamma))


def _sigma_list(sigmas: Sigmas) -> list[ComplexMatrix]:
    if isinstance(sigmas, ChannelPair):
        return sigmas.sigmas
    return [check_collision_operator(s) for s in sigmas]


def _conj(op: ComplexMatrix, m: ComplexMatrix) -> ComplexMatrix:
    return op @ m @ op.conj().T


# -- analytic maps ---------------------------------------------------------------------------


def single_collision_map(eps: EpsilonVector, sigmas: Sigmas) -> Channel:
    """rho -> (1 - sum eps) rho + sum_i eps_i sigma_i rho sigma_i, on any 2x2 matrix."""
    ops = _sigma_list(sigmas)
    if len(ops) != len(eps.eps):
        raise DimensionError(f"{len(eps.eps)} probabilities for {len(ops)} channels")
    weights = list(eps.eps)
    stay = 1.0 - eps.total

    def apply(m: ComplexMatrix) -> ComplexMatrix:
        out = stay * m
        for w, op in zip(weights, ops, strict=True):
            out = out + w * _conj(op, m)
        return np.asarray(out, dtype=np.complex128)

    return apply


def _pair_sigmas(sigmas: Sigmas) -> tuple[ComplexMatrix, ComplexMatrix]:
    ops = _sigma_list(sigmas)
    if len(ops) != 2:
        raise DimensionError(f"The correlated pair needs exactly two channels, got {len(ops)}")
    return ops[0], ops[1]


def pair_collision_map(spec: CorrelatedPairSpec, sigmas: Sigmas) -> Channel:
    """rho(T) -> rho(T + 2 dt) for two collisions with the correlated pair |R2>."""
    s1, s2 = _pair_sigmas(sigmas)
    e1, e2, q = spec.eps1, spec.eps2, spec.q
    stay = 1.0 - e1 - e2
    s12 = s1 @ s2
    s21 = s2 @ s1

    def apply(m: ComplexMatrix) -> ComplexMatrix:
        m1 = _conj(s1, m)
        m2 = _conj(s2, m)
        out = (
            stay * (stay * m + e1 * m1 + e2 * m2)
            + 2.0 * q * (e1**2 + e2**2) * m
            + e1 * (1.0 - 2.0 * (q * e1 + (1.0 - q) * e2)) * m1
            + e2 * (1.0 - 2.0 * (q * e2 + (1.0 - q) * e1)) * m2
            + 2.0 * (1.0 - q) * e1 * e2 * (_conj(s12, m) + _conj(s21, m))
        )
        return np.asarray(out, dtype=np.complex128)

    return apply


def pair_correction_map(spec: CorrelatedPairSpec, sigmas: Sigmas) -> Channel:
    """The Q-proportional part of the two-step map.

    Q {(eps2 - eps1)[eps1 L1 - eps2 L2] rho + eps1 eps2 [2 rho - s1 s2 rho s2 s1 - s2 s1 rho s1 s2]}
    with L_i rho = -rho + s_i rho s_i.
    """
    s1, s2 = _pair_sigmas(sigmas)
    e1, e2, Q = spec.eps1, spec.eps2, spec.Q
    s12 = s1 @ s2
    s21 = s2 @ s1

    def apply(m: ComplexMatrix) -> ComplexMatrix:
        l1 = _conj(s1, m) - m
        l2 = _conj(s2, m) - m
        brace = (e2 - e1) * (e1 * l1 - e2 * l2) + e1 * e2 * (
            2.0 * m - _conj(s12, m) - _conj(s21, m)
        )
        return np.asarray(Q * brace, dtype=np.complex128)

    return apply


def collide_once_analytic(rho: DensityMatrix, eps: EpsilonVector, sigmas: Sigmas) -> DensityMatrix:
    return DensityMatrix(single_collision_map(eps, sigmas)(rho.matrix))


def evolve_product(
    rho: DensityMatrix, eps: EpsilonVector, sigmas: Sigmas, n: int
) -> DensityMatrix:
    """n collisions with independent particles, all in the same state."""
    if n < 0:
        raise DomainError(f"Number of collisions must be >= 0, got {n}")
    step = single_collision_map(eps, sigmas)
    m = rho.matrix
    for _ in range(n):
        m = step(m)
    return DensityMatrix(m)


def collide_pair_analytic(
    rho: DensityMatrix, spec: CorrelatedPairSpec, sigmas: Sigmas
) -> TwoStepResult:
    first = single_collision_map(spec.eps, sigmas)
    return TwoStepResult(
        rho1=DensityMatrix(first(rho.matrix)),
        rho2=DensityMatrix(pair_collision_map(spec, sigmas)(rho.matrix)),
        correction=pair_correction_map(spec, sigmas)(rho.matrix),
    )


def evolve_correlated_chain(
    rho: DensityMatrix, spec: CorrelatedPairSpec, sigmas: Sigmas, n_steps: int
) -> list[DensityMatrix]:
    """States after 0..n_steps collisions with a chain of independent |R2> blocks.

    Odd collisions hit the first particle of a block, even ones complete the block.
    """
    if n_steps < 0:
        raise DomainError(f"Number of collisions must be >= 0, got {n_steps}")
    first = single_collision_map(spec.eps, sigmas)
    pair = pair_collision_map(spec, sigmas)
    states = [rho]
    block_start = rho.matrix
    for step in range(1, n_steps + 1):
        if step % 2 == 1:
            states.append(DensityMatrix(first(block_start)))
        else:
            block_start = pair(block_start)
            states.append(DensityMatrix(block_start))
    return states


# -- exact evolution -------------------------------------------------------------------------


def _particle_count(env_dim: int, d: int) -> int:
    n, size = 0, 1
    while size < env_dim:
        size *= d
        n += 1
    if size != env_dim or n == 0:
        raise DimensionError(f"Environment dimension {env_dim} is not a power of d = {d}")
    return n


def _exact_trajectory(
    rho: DensityMatrix,
    env: DensityMatrix | StateVector,
    sigmas: Sigmas,
    eta: float,
    tau: float | None,
    tol: Tolerances,
) -> Iterator[tuple[list[int], ComplexMatrix]]:
    if rho.dim != 2:
        raise DimensionError(f"The system must be a qubit, got dimension {rho.dim}")
    ops = _sigma_list(sigmas)
    d = len(ops) + 1
    env_rho = as_density(env)
    n = _particle_count(env_rho.dim, d)
    dims = [2] + [d] * n

    u = collision_unitary(interaction_hamiltonian(ops, eta, tol), eta, tau, tol)
    state = np.kron(rho.matrix, env_rho.matrix)
    for j in range(n):
        u_j = embed_operator(u, dims, [0, j + 1])
        state = u_j @ state @ u_j.conj().T
        yield dims, state


def exact_global_state(
    rho: DensityMatrix,
    env: DensityMatrix | StateVector,
    sigmas: Sigmas,
    eta: float = 1.0,
    tau: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    """Joint system (x) environment state after colliding with every particle."""
    state: ComplexMatrix | None = None
    for _dims, state in _exact_trajectory(rho, env, sigmas, eta, tau, tol):
        pass
    if state is None:
        raise DimensionError("Environment holds no particles")
    return state


def evolve_exact(
    rho: DensityMatrix,
    env: DensityMatrix | StateVector,
    sigmas: Sigmas,
    eta: float = 1.0,
    tau: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[DensityMatrix]:
    """System states after each collision: Tr_env[U_j...U_1 (rho (x) omega) U_1^+...U_j^+].

    The number of collisions is the number of particles in ``env``.
    """
    return [
        DensityMatrix(partial_trace(state, dims, {0}))
        for dims, state in _exact_trajectory(rho, env, sigmas, eta, tau, tol)
    ]


def collide_once_exact(
    rho: DensityMatrix,
    env: DensityMatrix | StateVector,
    sigmas: Sigmas,
    eta: float = 1.0,
    tau: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DensityMatrix:
    d = len(_sigma_list(sigmas)) + 1
    if as_density(env).dim != d:
        raise DimensionError(f"Single collision needs a {d}-level particle, got {as_density(env).dim}")
    return evolve_exact(rho, env, sigmas, eta, tau, tol)[0]


def _marginal_eps(pair_rho: DensityMatrix) -> EpsilonVector:
    first = partial_trace(pair_rho.matrix, [3, 3], {0})
    weights = np.real(np.diag(first))
    return EpsilonVector((float(weights[1]), float(weights[2])))


def collide_pair_exact(
    rho: DensityMatrix,
    pair: StateVector | DensityMatrix,
    sigmas: Sigmas,
    eta: float = 1.0,
    tau: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> TwoStepResult:
    """Two collisions with a two-qutrit environment state, computed in 18 dimensions.

    The correction is rho2 minus the uncorrelated prediction built from the pair's
    single-particle marginal.
    """
    if pair.dim != 9:
        raise DimensionError(f"Pair state must be 9-dimensional, got {pair.dim}")
    rho1, rho2 = evolve_exact(rho, pair, sigmas, eta, tau, tol)
    uncorrelated = single_collision_map(_marginal_eps(as_density(pair)), sigmas)(rho1.matrix)
    return TwoStepResult(rho1=rho1, rho2=rho2, correction=rho2.matrix - uncorrelated)


# -- closed forms ----------------------------------------------------------------------------


def same_channel_rate(
    gamma1: float,
    gamma2: float,
    eps1: float,
    eps2: float,
    Q: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """gamma_q = gamma1 + gamma2 - Q (gamma1 - gamma2)(eps1 - eps2) / [1 - 2(eps1 + eps2)]."""
    denominator = 1.0 - 2.0 * (eps1 + eps2)
    if abs(denominator) < tol.singular:
        raise SingularConfigurationError("1 - 2(eps1 + eps2) vanishes")
    return gamma1 + gamma2 - Q * (gamma1 - gamma2) * (eps1 - eps2) / denominator


def effective_y_rate(gamma: float, a: float, eps: float, Q: float) -> float:
    """Rate of the correlation-induced sigma_y channel; negative means non-Lindblad."""
    return -2.0 * gamma * a * eps * Q


@dataclass(frozen=True)
class SecondStepCoefficients:
    c1: float
    c2: float
    c3: float
    c4: float


def second_step_coefficients(
    a: float, eps: float, q: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> SecondStepCoefficients:
    """Coefficients of the exact second-step map for eps1 = eps2 = eps.

    C2 is fixed by trace preservation, C2 + C3 = 2 eps.
    """
    denominator = 1.0 + 4.0 * eps * (a * eps - 1.0)
    if abs(denominator) < tol.singular:
        raise SingularConfigurationError("1 + 4 eps (a eps - 1) vanishes")
    Q = 2.0 * q - 1.0
    c1 = 2.0 * a * Q * eps**2 * (1.0 - 2.0 * eps) / denominator
    c3 = (
        a * eps * (1.0 - 4.0 * eps - 4.0 * eps**2 * ((2.0 * a - 1.0) * (q - 1.0) - q))
    ) / denominator
    c4 = (
        math.sqrt((1.0 - a) * a) * eps * (1.0 - 4.0 * eps * (2.0 * a * (q - 1.0) * eps + 1.0))
    ) / denominator
    return SecondStepCoefficients(c1=c1, c2=2.0 * eps - c3, c3=c3, c4=c4)


def second_step(
    rho1: DensityMatrix, a: float, eps: float, q: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Second collision as a map on rho(dt) for the canonical channel pair with equal eps."""
    c = second_step_coefficients(a, eps, q, tol)
    m = rho1.matrix
    out = (
        (1.0 - 2.0 * eps) * m
        + c.c1 * (m - _conj(PAULI_Y, m))
        + c.c2 * _conj(PAULI_Z, m)
        + c.c3 * _conj(PAULI_X, m)
        + c.c4 * (PAULI_X @ m @ PAULI_Z + PAULI_Z @ m @ PAULI_X)
    )
    return DensityMatrix(out)


def truncated_second_step(rho1: DensityMatrix, a: float, eps: float, q: float) -> DensityMatrix:
    """Second-order expansion: Markovian step plus 2 a Q eps^2 [rho - sigma_y rho sigma_y]."""
    pair = ChannelPair(a)
    m = rho1.matrix
    Q = 2.0 * q - 1.0
    out = (
        (1.0 - 2.0 * eps) * m
        + eps * _conj(pair.sigma1, m)
        + eps * _conj(pair.sigma2, m)
        + 2.0 * a * Q * eps**2 * (m - _conj(PAULI_Y, m))
    )
    return DensityMatrix(out)


def ghz_evolve(rho: DensityMatrix, spec: GhzChainSpec, sigmas: Sigmas) -> DensityMatrix:
    """n collisions with a perfectly correlated chain: identity for even n, one step for odd n."""
    ops = _sigma_list(sigmas)
    if len(ops) + 1 != spec.d:
        raise DimensionError(f"{spec.d} GHZ weights for {len(ops)} channels")
    if spec.n % 2 == 0:
        return rho
    m = rho.matrix
    out = spec.probs[0] * m
    for p, op in zip(spec.probs[1:], ops, strict=True):
        out = out + p * _conj(op, m)
    return DensityMatrix(out)
