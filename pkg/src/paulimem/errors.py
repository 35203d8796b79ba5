"""Exception types raised across the package."""


class PauliMemError(ValueError):
    """Base class for invalid-input errors."""


class NegativeProbability(PauliMemError):
    pass


class NotNormalized(PauliMemError):
    pass


class MuOutOfRange(PauliMemError):
    pass


class XOutOfRange(PauliMemError):
    pass


class InvalidDensityMatrix(PauliMemError):
    pass


class NotHermitian(PauliMemError):
    pass


class NegativeEigenvalue(PauliMemError):
    pass


class NotRegularized(PauliMemError):
    pass


class NoCrossing(RuntimeError):
    """Raised when a bisection bracket shows no change in classification."""
