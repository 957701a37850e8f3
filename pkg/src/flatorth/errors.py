"""Exception hierarchy shared by every flatorth module."""


class FlatOrthError(Exception):
    """Base class for all errors raised by flatorth."""


class DimensionError(FlatOrthError, ValueError):
    """Input has the wrong shape (non-square, ragged, empty)."""


class PreconditionError(FlatOrthError, ValueError):
    """An operation was called outside its domain."""


class UnsupportedDimensionError(PreconditionError):
    """No construction in this package reaches the requested order."""


class FlatnessInsufficientError(PreconditionError):
    """Matrix is not flat enough for sign extraction to be guaranteed."""


class DecompositionNotFoundError(PreconditionError):
    """No prime decomposition inside the widest search window."""


class NoPlanError(PreconditionError):
    """The planner has no construction for (n, objective)."""


class MatrixFormatError(FlatOrthError, ValueError):
    """A matrix file could not be parsed."""


class InternalContradictionError(FlatOrthError, RuntimeError):
    """A construction produced output that its own theory rules out.

    Never catch this to paper over it: it means either a bug or a false
    theorem.
    """
