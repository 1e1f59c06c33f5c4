from typing import Optional


class XAError(Exception):
    """Base class for every error raised by the toolkit."""


class ValidationError(XAError, ValueError):
    """Raised when an input value violates a documented precondition."""


class EmptySampleError(ValidationError):
    """Raised when an operation has too few events to produce a result.

    Attributes:
        n_discarded: Number of windows dropped before the sample ran empty
    """

    def __init__(self, message: str, n_discarded: Optional[int] = None) -> None:
        super().__init__(message)
        self.n_discarded = n_discarded


class UnsupportedRegimeError(ValidationError):
    """Raised when an analytic formula is evaluated outside its regime."""


class NonStationaryError(ValidationError):
    """Raised when an autoregressive generator is asked for |beta| >= 1."""


class ConfigurationError(XAError, ValueError):
    """Raised when a run configuration is invalid or cannot be satisfied."""
