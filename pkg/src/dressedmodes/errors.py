"""Exception types shared across the package."""


class DressedModesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(DressedModesError, ValueError):
    """A physical parameter or argument violates its documented range."""


class NonPositiveSpectrumError(DressedModesError):
    """The interaction matrix has an eigenvalue at or below zero.

    Signals an unstable (over-coupled) model: real mode frequencies no
    longer exist.
    """


class NoConvergenceError(DressedModesError):
    """The eigensolver did not reach its off-diagonal target within budget."""


class DimensionMismatchError(DressedModesError, ValueError):
    """An input has a length or shape incompatible with the model dimension."""


class IndexOutOfRangeError(DressedModesError, IndexError):
    """A mode index lies outside [0, N]."""
