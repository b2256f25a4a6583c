"""Boundary-layer mass and energy of operator-domain functions, against Hardy-based bounds.

For a Hardy pair ``(c, a)`` and ``f`` in the operator domain,

    int_{d<eps} |f|^2      <= c0 eps^(2+2/c) ||(H+a) f|| ||(H+a)^(1/c) f||
    int_{d<eps} |grad f|^2 <= c1 eps^(2/c)   ||(H+a) f|| ||(H+a)^(1/c) f||

with ``c0 = c^(2+2/c)`` and ``c1 = c^(2/c) + c^(2/c) (1+c)^(2+2/c)``.
Violations are returned as data, never raised.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretize import Grid, gradient_energy_layer, layer_mass
from .eigensolve import Spectrum, fractional_apply
from .geometry import loglog_slope

DECAY_CSV_HEADER = ("domain", "n", "eps", "layer_mass", "bound_A", "layer_energy", "bound_B", "c", "a")
DEFAULT_EPS = (0.2, 0.1, 0.05, 0.025)
# safety factor on extrapolated Hardy constants fed to the bounds
C_MARGIN = 1.02


def _check_c(c):
    if c < 2:
        raise ValueError(f"Hardy constant must be at least 2 for the decay bounds, got {c}")


def bound_constant_c0(c: float) -> float:
    """``c^(2 + 2/c)``."""
    _check_c(c)
    return c ** (2 + 2 / c)


def bound_constant_c1(c: float) -> float:
    """``c^(2/c) + c^(2/c) (1 + c)^(2 + 2/c)``."""
    _check_c(c)
    return c ** (2 / c) + c ** (2 / c) * (1 + c) ** (2 + 2 / c)


def hardy_pair(c_est: float, a: float = 0.0):
    """Conservative ``(c, a)`` for the bounds: ``max(2, 1.02 c_est)``."""
    return max(2.0, C_MARGIN * c_est), a


@dataclass(frozen=True)
class DecayReport:
    eps: tuple
    layer_mass: tuple
    layer_energy: tuple
    bound_mass: tuple
    bound_energy: tuple
    mass_exponent: float
    energy_exponent: float
    c: float
    a: float

    @property
    def mass_ratios(self):
        return tuple(m / b if b > 0 else 0.0 for m, b in zip(self.layer_mass, self.bound_mass))

    @property
    def energy_ratios(self):
        return tuple(m / b if b > 0 else 0.0 for m, b in zip(self.layer_energy, self.bound_energy))

    @property
    def mass_violations(self) -> int:
        return sum(m > b for m, b in zip(self.layer_mass, self.bound_mass))

    @property
    def energy_violations(self) -> int:
        return sum(m > b for m, b in zip(self.layer_energy, self.bound_energy))

    def csv_rows(self, domain, n):
        return [
            (domain, n, e, m, bm, g, bg, self.c, self.a)
            for e, m, bm, g, bg in zip(
                self.eps, self.layer_mass, self.bound_mass, self.layer_energy, self.bound_energy
            )
        ]


def spectral_factor(spec: Spectrum, f, c: float, a: float) -> float:
    """``||(H+a) f|| ||(H+a)^(1/c) f||`` evaluated in the computed eigenbasis."""
    g1 = fractional_apply(spec, a, 1.0, f)
    gc = fractional_apply(spec, a, 1.0 / c, f)
    return np.sqrt(spec.inner(g1, g1) * spec.inner(gc, gc))


def fit_decay_exponent(eps_series, values) -> float:
    """Log-log least-squares slope of ``values`` against ``eps``."""
    values = np.asarray(values, dtype=float)
    if len(values) < 4:
        raise ValueError("need at least four values to fit a decay exponent")
    if np.any(values <= 0):
        raise ValueError("decay values must be positive")
    return loglog_slope(eps_series, values)


def _fit_or_nan(eps, vals):
    try:
        return fit_decay_exponent(eps, vals)
    except ValueError:
        return float("nan")


def decay_report(grid: Grid, spec: Spectrum, f, eps_series=DEFAULT_EPS, c=2.0, a=0.0) -> DecayReport:
    """Layer mass and energy of ``f`` with both bounds at every ``eps``."""
    _check_c(c)
    eps = tuple(float(e) for e in eps_series)
    f = np.asarray(f, dtype=float)
    factor = spectral_factor(spec, f, c, a)
    c0, c1 = bound_constant_c0(c), bound_constant_c1(c)
    mass = tuple(layer_mass(grid, f, e) for e in eps)
    energy = tuple(gradient_energy_layer(grid, f, e) for e in eps)
    return DecayReport(
        eps=eps,
        layer_mass=mass,
        layer_energy=energy,
        bound_mass=tuple(c0 * e ** (2 + 2 / c) * factor for e in eps),
        bound_energy=tuple(c1 * e ** (2 / c) * factor for e in eps),
        mass_exponent=_fit_or_nan(eps, mass),
        energy_exponent=_fit_or_nan(eps, energy),
        c=c,
        a=a,
    )


def verify_layer_mass_bound(grid, spec, f, eps_series, c, a) -> DecayReport:
    """Mass side of :func:`decay_report`; check ``report.mass_violations``."""
    return decay_report(grid, spec, f, eps_series, c, a)


def verify_layer_energy_bound(grid, spec, f, eps_series, c, a) -> DecayReport:
    """Energy side of :func:`decay_report`; check ``report.energy_violations``."""
    return decay_report(grid, spec, f, eps_series, c, a)


def eigenfunction_bounds(lam, eps, c, a):
    """Bounds for a normalised eigenfunction: ``c0|c1 eps^p (lambda + a)^(1+1/c)``."""
    scale = (lam + a) ** (1 + 1 / c)
    return (
        bound_constant_c0(c) * eps ** (2 + 2 / c) * scale,
        bound_constant_c1(c) * eps ** (2 / c) * scale,
    )
