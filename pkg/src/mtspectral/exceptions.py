"""Exception types raised by mtspectral."""


class MTSpectralError(Exception):
    """Base class for all package errors."""


class DomainError(MTSpectralError, ValueError):
    """An argument lies outside the domain of a map (e.g. |theta| >= pi)."""


class ParameterError(MTSpectralError, ValueError):
    """Invalid basis parameters (Im(lambda) == 0, alpha <= -1, ...)."""


class ReducibilityError(MTSpectralError, ValueError):
    """A recurrence coefficient b_n vanished inside the requested range."""


class WindowError(MTSpectralError, IndexError):
    """Index window invalid for the basis or incompatible with an operator."""


class BasisMismatch(MTSpectralError, ValueError):
    """Expansions in different bases were combined."""


class InsufficientData(MTSpectralError, ValueError):
    """Too few coefficients above the noise floor to fit a decay model."""
