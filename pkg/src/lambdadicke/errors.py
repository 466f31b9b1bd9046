"""Exception hierarchy shared by all modules."""


class LambdaDickeError(Exception):
    """Base class for every error raised by this package."""


class ModelError(LambdaDickeError, ValueError):
    """Invalid physical parameters."""


class OrderingViolation(ModelError):
    pass


class NonPositiveFrequency(ModelError):
    pass


class NegativeCoupling(ModelError):
    pass


class DomainViolation(LambdaDickeError, ValueError):
    """Order parameters outside the unit disk of the chosen reference frame."""


class FrameSingularity(DomainViolation):
    """The reference-state amplitude vanishes, so the frame's expansion is singular."""


class PhaseMismatch(LambdaDickeError, ValueError):
    """A phase-specific formula was requested where that phase does not exist."""


class ComplexFrequency(LambdaDickeError, ArithmeticError):
    """At least one squared excitation energy is negative (or complex).

    Attributes
    ----------
    eps_squared : numpy.ndarray
        All squared mode energies, so callers can inspect the offending ones.
    """

    def __init__(self, message, eps_squared=None):
        super().__init__(message)
        self.eps_squared = eps_squared


class DeltaNotZero(LambdaDickeError, ValueError):
    """Dark-state routines need exactly degenerate lower levels."""


class OutOfRange(LambdaDickeError, ValueError):
    pass


class NonConvergence(LambdaDickeError, RuntimeError):
    """An iterative solver ran out of iterations or missed its residual target."""


NoConvergence = NonConvergence


class DimensionCap(LambdaDickeError, ValueError):
    """The requested exact-diagonalization basis is larger than the configured cap."""
