"""Extrapolation of grid-level sequences to the continuum limit."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


@dataclass(frozen=True)
class Extrapolation:
    value: float
    method: str
    params: tuple = ()


def _log_model_root(L, y):
    """Offset ``b`` making ``y = y* + K (L + b)^-2`` pass through three points."""

    def mismatch(b):
        u = (L + b) ** -2.0
        return (y[0] - y[1]) / (u[0] - u[1]) - (y[1] - y[2]) / (u[1] - u[2])

    # scan geometrically spaced offsets, then refine the first sign change
    grid = -L[0] + np.geomspace(1e-3, 1e3, 600)
    vals = np.array([mismatch(b) for b in grid])
    ok = np.isfinite(vals)
    for i in range(len(grid) - 1):
        if ok[i] and ok[i + 1] and np.sign(vals[i]) != np.sign(vals[i + 1]):
            return brentq(mismatch, grid[i], grid[i + 1], xtol=1e-12)
    return None


def richardson(hs, values) -> Extrapolation:
    """Extrapolate ``values(h)`` to ``h -> 0`` from the three finest levels.

    Hardy-type pencil eigenvalues approach their limit like
    ``K / log(1/h)^2`` when the infimum is not attained, so the primary model
    is ``y* + K (log(1/h) + b)^-2`` with ``y*, K, b`` fitted exactly. If that
    model has no solution, geometric (Aitken) extrapolation is tried, and
    otherwise the finest value is returned unchanged.
    """
    hs = np.asarray(hs, dtype=float)
    y = np.asarray(values, dtype=float)
    order = np.argsort(-hs)
    hs, y = hs[order], y[order]
    if len(hs) < 3:
        return Extrapolation(float(y[-1]), "finest")
    hs, y = hs[-3:], y[-3:]
    d1, d2 = y[1] - y[0], y[2] - y[1]
    if d1 == 0 or d2 == 0 or np.sign(d1) != np.sign(d2) or abs(d2) >= abs(d1):
        return Extrapolation(float(y[-1]), "finest")
    L = np.log(1.0 / hs)
    b = _log_model_root(L, y)
    if b is not None:
        u = (L + b) ** -2.0
        K = (y[0] - y[1]) / (u[0] - u[1])
        return Extrapolation(float(y[0] - K * u[0]), "log", (float(K), float(b)))
    r = d2 / d1
    return Extrapolation(float(y[2] + d2 * r / (1 - r)), "aitken", (float(r),))
