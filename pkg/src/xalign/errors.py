"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A network or scheme configuration violates its invariants."""


class SchedulingError(ValueError):
    """A slot set cannot be built or does not satisfy scheme preconditions."""


class NotReadyError(RuntimeError):
    """Requested CSI has not been fed back yet at the queried slot."""


class SingularMatrixError(ArithmeticError):
    """A square solve hit a numerically singular pivot.

    Attributes
    ----------
    pivot : float
        Magnitude of the offending pivot.
    """

    def __init__(self, message: str, pivot: float = 0.0):
        super().__init__(message)
        self.pivot = float(pivot)


class DegenerateChannelError(ArithmeticError):
    """A probability-zero channel realization broke a precoder construction."""


class UnsupportedCaseError(ValueError):
    """The requested antenna/user configuration is outside the stated case."""
