"""Exception hierarchy shared by every module of the package."""


class SwiptError(Exception):
    """Base class for all package errors."""


class PoleError(SwiptError, ValueError):
    """A gamma-type function was evaluated at a pole."""


class DomainError(SwiptError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SaturationError(SwiptError, ValueError):
    """Energy threshold at or above the rectenna saturation level."""


class ConvergenceError(SwiptError, ArithmeticError):
    """A numerical integral failed to converge within its budget."""


class DegenerateError(SwiptError, ValueError):
    """Inputs for which a closed-form expression is undefined."""


class ParseError(SwiptError, ValueError):
    """Malformed configuration input."""


class RangeError(SwiptError, ValueError):
    """Configuration value violating a model invariant."""


class IoError(SwiptError, OSError):
    """Output could not be written."""
