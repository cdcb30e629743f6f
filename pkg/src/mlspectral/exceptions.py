"""Exception hierarchy shared by every module."""


class MLSpectralError(Exception):
    """Base class for library errors."""


class InvalidGraph(MLSpectralError, ValueError):
    """Weights are negative, asymmetric, non-finite or carry self-loops."""


class ParseError(MLSpectralError, ValueError):
    """A line of an edge-list or labels file could not be parsed."""


class DimensionMismatch(MLSpectralError, ValueError):
    """Layers (or matrices) disagree on the vertex count."""


class LengthMismatch(MLSpectralError, ValueError):
    """Two label vectors have different lengths."""


class ConfigError(MLSpectralError, ValueError):
    """A configuration violates its invariants."""


class EigenFailure(MLSpectralError, RuntimeError):
    """The symmetric eigensolver did not converge."""


class SingularInit(MLSpectralError, RuntimeError):
    """The initial joint eigenvector matrix is numerically singular."""


class NoConvergence(MLSpectralError, RuntimeError):
    """An iteration hit its cap; ``last`` holds the final iterate."""

    def __init__(self, message, last=None, iterations=None):
        super().__init__(message)
        self.last = last
        self.iterations = iterations
