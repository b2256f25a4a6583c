"""Exception types raised by hardylab."""


class HardyLabError(Exception):
    """Base class for all library errors."""


class DomainMembershipError(HardyLabError, ValueError):
    """A point that must be interior lies outside the domain or on its boundary."""


class ResolutionError(HardyLabError):
    """A grid (or restricted grid) has no interior nodes."""


class ConvergenceError(HardyLabError):
    """An iterative eigensolver did not meet its residual tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class TruncationError(HardyLabError):
    """A vector is not represented by the computed eigenbasis to tolerance."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class InapplicableError(HardyLabError):
    """A bound's hypothesis is not met by the measured quantities."""
