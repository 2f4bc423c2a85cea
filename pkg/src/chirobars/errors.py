"""Exception hierarchy shared across the package."""


class ChirobarsError(Exception):
    """Base class for all package errors."""


class ValidationError(ChirobarsError, ValueError):
    """Input violates a documented precondition or invariant."""


class ParseError(ChirobarsError, ValueError):
    """Malformed input file (CSV row, JSON schema, ...)."""


class NonGenericError(ValidationError):
    """Local extreme values are not pairwise distinct."""


class ConstantSeriesError(ValidationError):
    """Series is constant: no bars, no merge events, boundary conventions
    ambiguous.  Rejected by design."""


class CrossingError(ValidationError):
    """Series does not cross the required levels (start below / end above)."""


class DivergenceError(ChirobarsError, ArithmeticError):
    """A path-weight series diverges at the requested evaluation point."""
