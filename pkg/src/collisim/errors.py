"""Exception hierarchy for collisim.

Everything derives from ``ValueError`` so callers that only care about bad input can keep
catching that.
"""


class CollisimError(ValueError):
    """Base class for all collisim errors."""


class DimensionError(CollisimError):
    """Operand shapes or tensor-factor dimensions do not fit together."""


class NonHermitianError(CollisimError):
    """A matrix that must be Hermitian is not."""


class InvalidStateError(CollisimError):
    """A matrix or vector violates a state invariant.

    ``invariant`` names the violated property: ``hermitian``, ``trace``, ``positivity``
    or ``norm``.
    """

    def __init__(self, invariant: str, message: str) -> None:
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class DomainError(CollisimError):
    """Model parameters lie outside the physical domain."""


class NonUnitaryError(CollisimError):
    """A collision operator is not a Hermitian unitary."""


class SquareConditionError(CollisimError):
    """The Hamiltonian does not satisfy H^2 = eta^2 I."""


class SingularConfigurationError(CollisimError):
    """An analytic formula hits a vanishing denominator."""


class NonInvertibleMapError(CollisimError):
    """The intermediate map cannot be inverted, so the two-step map is undefined."""


class NonLinearChannelError(CollisimError):
    """A channel evaluator failed the linearity probe."""


class NonUnitalMapError(CollisimError):
    """A map with non-zero Bloch translation was given where a unital map is required."""


class ConfigError(ValueError):
    """Bad command-line or config-file input; reported as a usage error, not a domain failure."""
