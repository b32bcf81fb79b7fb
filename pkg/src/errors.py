"""Exceptions raised by the lattice, potential and capacity engines."""


class DyadicError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(DyadicError):
    """Two boxes (or a box and a measure) live on multi-trees of different dimension."""


class DepthOverflowError(DyadicError):
    """A box lies deeper than the dense lattice it is evaluated on."""


class EmptySetError(DyadicError):
    """A capacity was requested for an empty constraint set."""


class SupportViolationError(DyadicError):
    """A measure charges a box outside the down-set of the constraint set."""


class BudgetExceededError(DyadicError):
    """A construction would exceed a configured memory or size budget."""


class HypothesisViolationError(DyadicError):
    """The inputs do not satisfy the hypothesis of the requested estimate."""


class ConstructionError(DyadicError):
    """Invalid parameters for one of the explicit constructions."""


class FormatError(DyadicError):
    """Malformed box or measure text."""


class ConvergenceError(DyadicError):
    """The dual solver ran out of sweeps before reaching the KKT tolerance.

    ``lower_bound`` is the best dual value reached, which is always a valid
    lower bound for the capacity.
    """

    def __init__(self, message: str, lower_bound: float, sweeps: int):
        super().__init__(message)
        self.lower_bound = lower_bound
        self.sweeps = sweeps
