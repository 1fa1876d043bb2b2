"""Exception types raised across the package."""


class CRSError(Exception):
    """Base class for all package errors."""


class DomainError(CRSError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class InvalidConfiguration(CRSError, ValueError):
    """A supplied matrix is not (close enough to) a rotation."""

    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class UnsupportedRegime(CRSError, ValueError):
    """The turning-rate bound is below 1, where no sufficient list is known."""

    def __init__(self, message, u_max=None):
        super().__init__(message)
        self.u_max = u_max


class NoSolutionFound(CRSError, RuntimeError):
    """No candidate path reached the target within tolerance."""

    def __init__(self, message, best_residual=None, best_word=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_word = best_word
