"""Exception types raised across the package."""


class HeislaxError(Exception):
    """Base class for all errors raised by heislax."""


class InvalidArgument(HeislaxError, ValueError):
    pass


class DegenerateMetricError(InvalidArgument):
    """The Gram matrix of a metric is singular."""


class NotADerivationError(InvalidArgument):
    """A matrix is not a derivation of h_n acting trivially on the center."""


class DivergenceError(HeislaxError, ArithmeticError):
    """A numerical integration produced a non-finite state."""
