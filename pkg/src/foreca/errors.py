"""Exception hierarchy.

Input-type problems derive from ``ValueError`` so callers that only care
about bad arguments can catch the builtin.
"""


class ForecaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ForecaError, ValueError):
    """Malformed or non-finite input, or a violated precondition."""


class DimensionError(InputError):
    """Array shapes or component counts do not fit together."""


class TooShortError(InputError):
    """Series is too short for the requested estimator."""


class ContractError(ForecaError):
    """An object was passed that does not satisfy a required invariant."""


class DegenerateSeriesError(ForecaError):
    """Series (or spectrum) carries no power, e.g. a constant column."""


class SingularCovarianceError(ForecaError):
    """Covariance matrix is singular or numerically rank deficient."""

    def __init__(self, message, eigenvalue=None, columns=()):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.columns = tuple(columns)


class NumericalFailure(ForecaError):
    """A numerical routine produced NaN or failed to converge."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
