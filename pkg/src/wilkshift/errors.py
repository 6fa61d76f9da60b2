"""Exception types raised by the library.

The CLI reports these by class name, so names are part of the interface.
"""


class WilkshiftError(Exception):
    """Base class for all library errors."""


class ShiftIsEigenvalue(WilkshiftError):
    """The requested shift makes ``T - sI`` singular and no extension was allowed."""


class ChartDomainError(WilkshiftError):
    """The matrix is outside the range of the bidiagonal chart."""


class AtConePoint(WilkshiftError):
    """A derivative was requested at (2, 0), where the sub-eigenvalues are not smooth."""


class WrongSide(WilkshiftError):
    """A one-sided branch of the Wilkinson map was applied on the wrong side of x = 2."""


class ConeViolation(WilkshiftError):
    """A pushed tangent vector left the near-horizontal cone."""


class PrecisionBudgetExceeded(WilkshiftError):
    """The working precision cannot resolve the requested number of steps."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class NotBracketable(WilkshiftError):
    """The initial bisection endpoints do not carry the forced signatures."""


class MonotonicityError(WilkshiftError):
    """A bisection probe contradicted monotonicity of the itinerary along a line."""


class BoundViolation(WilkshiftError):
    """A measured quantity fell outside a proven a-priori bound."""
