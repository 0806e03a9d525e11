"""Exception and warning types shared across the numerical modules."""


class GridMismatchError(ValueError):
    """Raised when signals or kernels defined on different time grids are mixed."""


class NumericsError(RuntimeError):
    """A propagation produced a non-finite value.

    Carries the grid index at which the failure was detected and, when
    known, the name of the method being computed.
    """

    def __init__(self, message, time_index=None, method=None):
        super().__init__(message)
        self.time_index = time_index
        self.method = method


class ConditioningWarning(UserWarning):
    """The data of an inverse problem make its triangular solve ill conditioned."""
