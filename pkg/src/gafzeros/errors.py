"""Exception hierarchy shared by all modules."""


class GafZerosError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(GafZerosError, ValueError):
    """Input rejected before any numerical work was attempted."""


class NumericalError(GafZerosError, ArithmeticError):
    """A numerical procedure failed to meet its accuracy contract."""


class DomainError(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class OutsideRegion(ValidationError):
    pass


class DegenerateInput(ValidationError):
    pass


class FactorizationError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class AmbiguousMatching(NumericalError):
    """Two tracked branches came within matching tolerance; refine the r grid."""


class OddMultiplicity(NumericalError):
    pass


class NearMultipleRoot(NumericalError):
    pass


class ZeroOnCircle(NumericalError):
    """A sampled zero landed on the counting circle (a probability-zero event)."""
