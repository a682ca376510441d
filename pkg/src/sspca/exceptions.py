"""Exception hierarchy shared by all modules."""


class SspcaError(Exception):
    """Base class for errors raised by this package."""


class InvalidIndex(SspcaError, IndexError):
    """An index is negative or not smaller than the matrix dimension."""


class EmptySet(SspcaError, ValueError):
    """An operation that needs at least one index received an empty set."""


class NoConvergence(SspcaError, ArithmeticError):
    """An iterative eigensolver ran out of iterations.

    ``estimate`` carries the best value reached (a float, an array of floats
    for batched calls, or an eigenvector).
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InvalidSeed(SspcaError, ValueError):
    """A greedy seed is larger than the requested support size."""


class TooManySeeds(SspcaError, OverflowError):
    """The number of seeds does not fit in a signed 64-bit counter."""

    def __init__(self, count):
        super().__init__(f"C(p, k*) = {count} seeds exceeds the 64-bit guard")
        self.count = count


class CtFailed(SspcaError, RuntimeError):
    """Covariance thresholding could not produce a candidate for any threshold."""


class ConfigError(SspcaError, ValueError):
    """An experiment configuration failed validation.

    All problems found are collected in ``problems``.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(self.problems))
