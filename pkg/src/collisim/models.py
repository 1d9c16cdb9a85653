"""Pydantic models for configuration and tabular results."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from collisim.util import parse_grid, parse_number, parse_probabilities

Subcommand = Literal["single-step", "two-step", "markov-scan", "delta-e", "ghz", "validate"]


class Tolerances(BaseModel):
    """Every numeric tolerance used by the library, in one place."""

    model_config = {"frozen": True}

    hermitian: float = Field(default=1e-12, description="max |M - M^dagger| for states")
    trace: float = Field(default=1e-12, description="|trace - 1| for states")
    psd: float = Field(default=1e-10, description="eigenvalue slack below zero for states")
    eigen_hermitian: float = Field(default=1e-10, description="hermiticity required by eigensolver")
    jacobi_offdiag: float = Field(default=1e-13, description="Jacobi off-diagonal Frobenius stop")
    jacobi_max_sweeps: int = Field(default=100, description="Jacobi sweep cap")
    jacobi_max_dim: int = Field(default=64, description="largest dimension handled by Jacobi")
    eigensolver: Literal["jacobi", "lapack"] = Field(default="jacobi")
    unit_axis: float = Field(default=1e-12, description="|norm - 1| for channel axes")
    unit_vector: float = Field(default=1e-12, description="|norm - 1| for pure states")
    pair_norm: float = Field(default=1e-10, description="|norm - 1| for the correlated pair state")
    unitary: float = Field(default=1e-12, description="|sigma^2 - I| for collision operators")
    square_condition: float = Field(default=1e-10, description="|H^2 - eta^2 I|")
    singular: float = Field(default=1e-12, description="smallest admissible analytic denominator")
    invertible: float = Field(default=1e-10, description="smallest admissible singular value")
    linearity: float = Field(default=1e-10, description="linearity probe deviation")
    cp: float = Field(default=1e-12, description="Choi eigenvalue slack below zero")
    unital: float = Field(default=1e-12, description="max |t| of a unital map")
    probability: float = Field(default=1e-12, description="|sum p - 1| for GHZ weights")
    entropy_clamp: float = Field(default=1e-10, description="noise eigenvalues clamped in entropy")


DEFAULT_TOLERANCES = Tolerances()


class RunConfig(BaseModel):
    """Parameters of one CLI invocation after merging defaults, config file and flags."""

    subcommand: Subcommand
    eps1: float = 0.01
    eps2: float = 0.02
    q: float | None = None
    Q: float | None = None
    a: float = 0.05
    a_grid: str | None = None
    Q_grid: str | None = None
    theta: float = 0.0
    phi: float = 0.0
    theta_grid: str | None = None
    phi_grid: str | None = None
    steps: int = Field(default=1, ge=0)
    probs: str = "0.9,0.05,0.05"
    eps_y: float = Field(default=0.0, ge=0.0, le=1.0)
    samples: int = Field(default=50, ge=1)
    workers: int = Field(default=1, ge=1)
    seed: int = 20140107
    output: Path | None = None
    out_dir: Path | None = None
    cp_tol: float = Field(default=DEFAULT_TOLERANCES.cp, gt=0.0)
    psd_tol: float = Field(default=DEFAULT_TOLERANCES.psd, gt=0.0)

    @field_validator("a_grid", "Q_grid", "theta_grid", "phi_grid")
    @classmethod
    def _check_grid(cls, value: str | None) -> str | None:
        if value is not None:
            parse_grid(value)
        return value

    @field_validator("theta", "phi", mode="before")
    @classmethod
    def _parse_angle(cls, value: object) -> object:
        if isinstance(value, str):
            return parse_number(value)
        return value

    @field_validator("probs")
    @classmethod
    def _check_probs(cls, value: str) -> str:
        parse_probabilities(value)
        return value

    @model_validator(mode="after")
    def _q_or_big_q(self) -> "RunConfig":
        if self.q is not None and self.Q is not None:
            raise ValueError("give either q or Q, not both")
        return self

    @property
    def correlation(self) -> float:
        """The correlation factor Q = 2q - 1 (0 when neither is given)."""
        if self.Q is not None:
            return self.Q
        if self.q is not None:
            return 2.0 * self.q - 1.0
        return 0.0

    def grid(self, name: Literal["a", "Q", "theta", "phi"]) -> list[float]:
        """Grid for an axis, falling back to the single scalar value."""
        spec = getattr(self, f"{name}_grid")
        if spec is not None:
            return parse_grid(spec)
        scalar = self.correlation if name == "Q" else getattr(self, name)
        return [float(scalar)]

    def tolerances(self) -> Tolerances:
        """Default tolerances with the CLI overrides applied."""
        return DEFAULT_TOLERANCES.model_copy(update={"cp": self.cp_tol, "psd": self.psd_tol})

    def output_path(self) -> Path | None:
        """Explicit output file, else <out_dir>/<subcommand>.csv, else None for stdout."""
        if self.output is not None:
            return self.output
        if self.out_dir is not None:
            return self.out_dir / f"{self.subcommand}.csv"
        return None


class MarkovScanRow(BaseModel):
    """One point of a Markovianity scan."""

    Q: float
    a: float
    eps1: float
    eps2: float
    min_eigenvalue: float | None = None
    is_cp: bool | None = None
    negative_weights: int | None = None
    error: str | None = None


class DeltaERecord(BaseModel):
    """Entanglement difference at one (theta, phi, Q) point, in bits."""

    theta: float
    phi: float
    Q: float
    E: float | None = None
    E0: float | None = None
    deltaE: float | None = None
    error: str | None = None
