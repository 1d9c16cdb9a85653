"""Environment states for the collisional model.

Qutrit levels are |0> (no collision effect), |1> (sigma_1) and |2> (sigma_2); two-particle
states use the lexicographic basis |00>, |01>, ..., |22>.
"""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from collisim.errors import DomainError
from collisim.linalg import DensityMatrix, StateVector
from collisim.models import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True)
class EpsilonVector:
    """Per-channel collision probabilities (epsilon_i = gamma_i dt)."""

    eps: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", tuple(float(e) for e in self.eps))
        for i, e in enumerate(self.eps, start=1):
            if not 0.0 <= e <= 1.0:
                raise DomainError(f"eps_{i} = {e} outside [0, 1]")
        if sum(self.eps) > 1.0 + DEFAULT_TOLERANCES.probability:
            raise DomainError(f"sum of eps is {sum(self.eps)}, must not exceed 1")

    @property
    def total(self) -> float:
        return sum(self.eps)

    @property
    def d(self) -> int:
        """Number of environment levels."""
        return len(self.eps) + 1


@dataclass(frozen=True)
class CorrelatedPairSpec:
    """Parameters of the correlated two-particle state |R2>.

    ``q = 1/2`` is the uncorrelated product; Q = 2q - 1 is the correlation factor.
    """

    eps1: float
    eps2: float
    q: float

    def __post_init__(self) -> None:
        if self.eps1 < 0.0 or self.eps2 < 0.0:
            raise DomainError(f"eps must be non-negative, got ({self.eps1}, {self.eps2})")
        if not 0.0 <= self.q <= 1.0:
            raise DomainError(f"q must lie in [0, 1], got {self.q}")
        for name, value in self.radicands().items():
            if value < 0.0:
                raise DomainError(f"|R2> radicand {name} is negative ({value:.6g})")

    @classmethod
    def from_correlation(cls, eps1: float, eps2: float, Q: float) -> "CorrelatedPairSpec":
        if not -1.0 <= Q <= 1.0:
            raise DomainError(f"Q must lie in [-1, 1], got {Q}")
        return cls(eps1, eps2, (Q + 1.0) / 2.0)

    @property
    def Q(self) -> float:
        return 2.0 * self.q - 1.0

    @property
    def eps(self) -> EpsilonVector:
        return EpsilonVector((self.eps1, self.eps2))

    def radicands(self) -> dict[str, float]:
        e1, e2, q = self.eps1, self.eps2, self.q
        return {
            "1-eps1-eps2": 1.0 - e1 - e2,
            "1-2[q eps1+(1-q) eps2]": 1.0 - 2.0 * (q * e1 + (1.0 - q) * e2),
            "1-2[q eps2+(1-q) eps1]": 1.0 - 2.0 * (q * e2 + (1.0 - q) * e1),
        }

    def uncorrelated(self) -> "CorrelatedPairSpec":
        """Same probabilities with q = 1/2."""
        return CorrelatedPairSpec(self.eps1, self.eps2, 0.5)


@dataclass(frozen=True)
class GhzChainSpec:
    """Perfectly correlated chain sum_i p_i |ii...i><ii...i| over n particles."""

    probs: tuple[float, ...]
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.probs:
            raise DomainError("GHZ chain needs at least one probability")
        if any(p < 0.0 for p in self.probs):
            raise DomainError(f"GHZ probabilities must be non-negative, got {self.probs}")
        if abs(sum(self.probs) - 1.0) > DEFAULT_TOLERANCES.probability:
            raise DomainError(f"GHZ probabilities sum to {sum(self.probs)}, expected 1")
        if self.n < 0:
            raise DomainError(f"Number of collisions must be >= 0, got {self.n}")

    @property
    def d(self) -> int:
        return len(self.probs)


def _check_levels(eps: EpsilonVector, d: int) -> None:
    if eps.d != d:
        raise DomainError(f"{len(eps.eps)} probabilities need d = {eps.d} levels, got d = {d}")


def product_env_mixed(eps: EpsilonVector, d: int) -> DensityMatrix:
    """omega = (1 - sum eps) |0><0| + sum_i eps_i |i><i|."""
    _check_levels(eps, d)
    weights = np.array([max(0.0, 1.0 - eps.total), *eps.eps], dtype=np.float64)
    return DensityMatrix(np.diag(weights).astype(np.complex128))


def product_env_pure(eps: EpsilonVector, d: int) -> StateVector:
    """|R> = sqrt(1 - sum eps) |0> + sum_i sqrt(eps_i) |i>."""
    _check_levels(eps, d)
    amps = np.sqrt(np.array([max(0.0, 1.0 - eps.total), *eps.eps], dtype=np.float64))
    return StateVector(amps.astype(np.complex128))


def _pair_amplitudes(spec: CorrelatedPairSpec) -> npt.NDArray[np.float64]:
    e1, e2, q = spec.eps1, spec.eps2, spec.q
    r = spec.radicands()
    s = 1.0 - e1 - e2
    cross = math.sqrt(2.0 * (1.0 - q) * e1 * e2)
    amps = np.zeros(9, dtype=np.float64)
    amps[0] = s  # |00>
    amps[1] = math.sqrt(s) * math.sqrt(e1)  # |01>
    amps[2] = math.sqrt(s) * math.sqrt(e2)  # |02>
    amps[3] = math.sqrt(e1) * math.sqrt(r["1-2[q eps1+(1-q) eps2]"])  # |10>
    amps[4] = math.sqrt(2.0 * q) * e1  # |11>
    amps[5] = cross  # |12>
    amps[6] = math.sqrt(e2) * math.sqrt(r["1-2[q eps2+(1-q) eps1]"])  # |20>
    amps[7] = cross  # |21>
    amps[8] = math.sqrt(2.0 * q) * e2  # |22>
    return amps


def correlated_pair_state(
    spec: CorrelatedPairSpec, tol: Tolerances = DEFAULT_TOLERANCES
) -> StateVector:
    """The correlated pair |R2> in the basis |00>, |01>, ..., |22>."""
    amps = _pair_amplitudes(spec)
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > tol.pair_norm:
        raise DomainError(f"|R2> norm is {norm:.15g} for {spec}")
    return StateVector(amps.astype(np.complex128))


def dephased_pair_state(
    spec: CorrelatedPairSpec, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Diagonal part of |R2><R2|."""
    amps = correlated_pair_state(spec, tol).amplitudes
    return DensityMatrix(np.diag(np.abs(amps) ** 2).astype(np.complex128))


def ghz_weights(spec: GhzChainSpec) -> GhzChainSpec:
    """Validated GHZ chain parameters (validation happens on construction)."""
    return spec


def ghz_chain_density(spec: GhzChainSpec) -> DensityMatrix:
    """Explicit d^n x d^n chain state; only meant for small n."""
    d, n = spec.d, spec.n
    if n < 1:
        raise DomainError("Materializing the GHZ chain needs n >= 1")
    diag = np.zeros(d**n, dtype=np.float64)
    for level, p in enumerate(spec.probs):
        index = sum(level * d**k for k in range(n))
        diag[index] = p
    return DensityMatrix(np.diag(diag).astype(np.complex128))
