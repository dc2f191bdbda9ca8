"""Exception types shared across the package.

Every error raised deliberately by this package derives from
:class:`GiniJelError`, so callers can catch one base class at API
boundaries (the command line driver maps them onto exit codes).
"""


class GiniJelError(Exception):
    """Base class for all errors raised by this package."""


class SampleTooSmall(GiniJelError):
    """Fewer observations than the requested operation can support."""


class DegenerateSample(GiniJelError):
    """The scale denominator vanished (all x values identical)."""


class IndexOutOfRange(GiniJelError, IndexError):
    """A leave-one-out index does not address an observation."""


class HullViolation(GiniJelError):
    """Zero is not inside the convex hull of the constraint values.

    During confidence-interval inversion this is an expected outcome for
    parameter values far from the point estimate; statistic-level wrappers
    translate it into a +inf statistic rather than an error.
    """


class SingularCovariance(GiniJelError):
    """Constraint rows are affinely degenerate; the vector solver needs
    a nonsingular sample covariance."""


class NonConvergence(GiniJelError):
    """An iterative solver exhausted its iteration budget."""


class OutOfRange(GiniJelError, ValueError):
    """A numeric argument lies outside its documented domain."""


class InvalidScatter(GiniJelError, ValueError):
    """A scatter matrix is not symmetric positive definite."""


class NegativeVariance(GiniJelError, ValueError):
    """A supplied variance was negative."""


class ConfigInvalid(GiniJelError):
    """A study configuration value is unusable.

    Attributes
    ----------
    key : str or None
        The offending configuration key, when known.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ParseError(GiniJelError):
    """A data file could not be parsed.

    Attributes
    ----------
    line, column : int or None
        One-based position of the first offending cell, when known.
    """

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
