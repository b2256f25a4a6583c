"""Heat trace of the Dirichlet Laplacian and its distance-function bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaincc

from . import geometry
from .eigensolve import Spectrum

TRACE_CSV_HEADER = ("domain", "t", "trace", "tail", "upper", "lower")
# Weyl counting function is multiplied by this before bounding the tail
WEYL_SAFETY = 2.0


@dataclass(frozen=True)
class TraceReport:
    t: float
    trace_value: float
    tail_bound: float
    upper_bound: float
    lower_bound: float
    regularity_b: float = float("nan")

    @property
    def sandwich_holds(self) -> bool:
        return self.lower_bound <= self.trace_value + self.tail_bound <= self.upper_bound

    def csv_row(self, domain):
        return (domain, self.t, self.trace_value, self.tail_bound, self.upper_bound, self.lower_bound)


def weyl_tail(t, lambda_cut, volume, dim=2):
    """Upper estimate of ``sum_{lambda_n > cut} e^(-lambda_n t)``.

    Uses ``N(lambda) <= S |U| lambda / (4 pi)`` in 2D and
    ``N(lambda) <= S |U| sqrt(lambda) / pi`` in 1D with ``S = WEYL_SAFETY``,
    integrated by parts against ``e^(-lambda t)``.
    """
    if dim == 2:
        k = WEYL_SAFETY * volume / (4 * np.pi)
        return k * np.exp(-lambda_cut * t) * (lambda_cut + 1 / t)
    if dim == 1:
        k = WEYL_SAFETY * volume / np.pi
        # t * int_cut^inf k sqrt(l) e^(-l t) dl
        return k * t ** -0.5 * gamma(1.5) * gammaincc(1.5, lambda_cut * t)
    raise ValueError(f"unsupported dimension {dim}")


def heat_trace(spec: Spectrum, t: float, lambda_cut: float, volume=None, dim=2):
    """``(sum_{lambda_n <= cut} e^(-lambda_n t), tail_bound)``.

    The spectrum must extend to ``lambda_cut`` so no eigenvalue below the
    cut is missing. ``volume`` defaults to the area of the spectrum's grid
    domain; without one the tail is reported as 0.
    """
    if not t > 0:
        raise ValueError(f"time must be positive, got {t}")
    vals = np.asarray(spec.values, dtype=float)
    if vals[-1] < lambda_cut:
        raise ValueError(f"spectrum reaches {vals[-1]:.4g}, below the cut {lambda_cut:.4g}")
    value = float(np.exp(-vals[vals <= lambda_cut] * t).sum())
    if volume is None and spec.grid is not None:
        volume, dim = spec.grid.domain.area, spec.grid.dim
    tail = 0.0 if volume is None else float(weyl_tail(t, lambda_cut, volume, dim))
    return value, tail


def _cells(domain, quad_h):
    _, pts, d = geometry.interior_lattice(domain, quad_h, offset=0.5)
    return (pts[:, 0] if domain.dim == 1 else pts), d


def trace_upper_bound(domain, t, quad_h, n_dirs=geometry.DEFAULT_N_DIRS) -> float:
    """Midpoint rule for ``(2 pi t)^(-N/2) int_U exp(-N t / (8 m^2))``."""
    if not t > 0:
        raise ValueError(f"time must be positive, got {t}")
    pts, _ = _cells(domain, quad_h)
    m = geometry.mean_distances(domain, pts, n_dirs)
    N = domain.dim
    integral = np.exp(-N * t / (8 * m ** 2)).sum() * quad_h ** N
    return float((2 * np.pi * t) ** (-N / 2) * integral)


def trace_lower_bound(domain, t, quad_h) -> float:
    """Midpoint rule for ``2^-N (2 pi t)^(-N/2) int_U exp(-8 pi^2 N^2 t / d^2)``."""
    if not t > 0:
        raise ValueError(f"time must be positive, got {t}")
    _, d = _cells(domain, quad_h)
    N = domain.dim
    integral = np.exp(-8 * np.pi ** 2 * N ** 2 * t / d ** 2).sum() * quad_h ** N
    return float(2.0 ** -N * (2 * np.pi * t) ** (-N / 2) * integral)


def trace_report(domain, spec: Spectrum, t, lambda_cut, quad_h, n_dirs=geometry.DEFAULT_N_DIRS, grid_h=None):
    """Trace, tail and both bounds at time ``t``.

    ``regularity_b`` is the lattice estimate of ``sup m/d`` the lower bound's
    hypothesis refers to; it is computed when ``grid_h`` is given.
    """
    value, tail = heat_trace(spec, t, lambda_cut, volume=domain.area, dim=domain.dim)
    b = geometry.mean_to_boundary_ratio(domain, grid_h, n_dirs) if grid_h else float("nan")
    return TraceReport(
        t=float(t),
        trace_value=value,
        tail_bound=tail,
        upper_bound=trace_upper_bound(domain, t, quad_h, n_dirs),
        lower_bound=trace_lower_bound(domain, t, quad_h),
        regularity_b=b,
    )
