"""Numerical Hardy constants, boundary decay and heat-trace bounds on planar domains."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainMembershipError,
    HardyLabError,
    InapplicableError,
    ResolutionError,
    TruncationError,
)
from .geometry import Domain

__all__ = [
    "ConvergenceError",
    "Domain",
    "DomainMembershipError",
    "HardyLabError",
    "InapplicableError",
    "ResolutionError",
    "TruncationError",
    "__version__",
]
