"""Exception types raised across the package."""


class FractalSpectrumError(Exception):
    """Base class for all package errors."""


class NotInGamma(FractalSpectrumError, ValueError):
    """An integer has a base-4 digit outside {0, 1} (or is negative)."""


class DepthTooLarge(FractalSpectrumError, ValueError):
    """A truncation depth exceeds the configured enumeration limit."""


class ToleranceUnreachable(FractalSpectrumError, ArithmeticError):
    """The factor budget cannot certify the requested absolute tolerance."""


class ZeroVector(FractalSpectrumError, ValueError):
    pass


class SupportNotInGamma(FractalSpectrumError, ValueError):
    """An operation needing an exact spectrum expansion got other frequencies."""


class DepthMismatch(FractalSpectrumError, ValueError):
    pass


class DegreeTooLarge(FractalSpectrumError, ValueError):
    pass


class ParseError(FractalSpectrumError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
