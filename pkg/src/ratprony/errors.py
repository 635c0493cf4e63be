"""Exception hierarchy shared by all modules."""


class RatPronyError(Exception):
    """Base class for all errors raised by ratprony."""


class InvalidInputError(RatPronyError, ValueError):
    """Input violates a documented precondition."""


class DiskPointError(InvalidInputError):
    """A point that must lie strictly inside the unit disk does not."""


class InsufficientDataError(InvalidInputError):
    """Not enough moments/samples for the requested order."""


class RankDeficiencyError(RatPronyError, ArithmeticError):
    """A matrix that must have full column rank does not.

    The computed numerical rank is available as ``rank``.
    """

    def __init__(self, message, rank=None, expected=None):
        super().__init__(message)
        self.rank = rank
        self.expected = expected


class SingularDiagonalError(RatPronyError, ArithmeticError):
    """Zero (or sub-threshold) pivot met during triangular back substitution."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class NonConvergenceError(RatPronyError, ArithmeticError):
    """An iteration ended without meeting its convergence criterion.

    ``diagnostics`` holds whatever the iteration recorded before giving up.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
