"""Hardy constants as pencil eigenvalues, and checks of the classical inequalities."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import domains, geometry
from .discretize import Grid, build_grid, laplacian, weight_values
from .eigensolve import DEFAULT_TOL, lowest_eigenpairs, pencil_min, symmetric_lowest
from .errors import InapplicableError
from .extrapolate import richardson

HARDY_CSV_HEADER = ("domain", "h", "s", "a", "lambda_min", "c", "extrapolated_c")
DEFAULT_WEIGHT = "lattice"


@dataclass(frozen=True, eq=False)
class HardyReport:
    """Pencil eigenvalues per grid level and their extrapolated limit.

    ``lambda_min`` and ``c = lambda_min^-1/2`` are the extrapolated values;
    ``levels`` keeps the raw ``(h, lambda_h)`` pairs, coarsest first.
    """

    domain: str
    h: float
    s: float
    a: float
    lambda_min: float
    c: float
    levels: tuple
    method: str = "finest"
    minimizer: np.ndarray | None = field(default=None, repr=False)
    grid: Grid | None = field(default=None, repr=False)
    note: str = ""

    @property
    def raw_lambdas(self):
        return tuple(lam for _, lam in self.levels)

    @property
    def raw_c(self):
        return tuple(lam ** -0.5 for _, lam in self.levels)

    def csv_rows(self):
        return [
            (self.domain, h, self.s, self.a, lam, lam ** -0.5, self.c)
            for h, lam in self.levels
        ]


@dataclass(frozen=True, eq=False)
class CertificateReport:
    phi: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    margin: float
    form_margin: float
    tol: float
    verified: bool


@dataclass(frozen=True)
class HalfspaceReport:
    worst_ratio: float
    ratios: tuple
    bumps: tuple


@dataclass(frozen=True)
class ExponentScan:
    s: float
    h: tuple
    lambdas: tuple

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.lambdas) < 0))

    @property
    def relative_change(self) -> float:
        """``(lambda_coarsest - lambda_finest) / lambda_coarsest``."""
        return (self.lambdas[0] - self.lambdas[-1]) / self.lambdas[0]


@dataclass(frozen=True)
class MinkowskiHardyReport:
    alpha: float
    c: float
    dim: int
    product: float
    tol: float
    holds: bool


def level_spacings(h, levels):
    """``h * 2^k`` for ``k = levels-1 .. 0`` (coarsest first)."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    return [h * 2 ** k for k in range(levels - 1, -1, -1)]


def _pencil_at(domain, h, s, a, weight):
    grid = build_grid(domain, h)
    A = laplacian(grid).matrix
    if a:
        A = A + a * sp.identity(grid.size, format="csr")
    w = weight_values(grid, s, weight)
    lam, f = pencil_min(A, sp.diags(w))
    return lam, f, grid


def _ladder(name, domain_at, h, s, a, levels, weight, extrapolate=True):
    hs = level_spacings(h, levels)
    lams, f, grid = [], None, None
    for hk in hs:
        lam, f, grid = _pencil_at(domain_at(hk), hk, s, a, weight)
        lams.append(lam)
    if extrapolate:
        ex = richardson(hs, lams)
        lam_star, method = ex.value, ex.method
    else:
        lam_star, method = lams[-1], "finest"
    return HardyReport(
        domain=name,
        h=h,
        s=s,
        a=a,
        lambda_min=lam_star,
        c=lam_star ** -0.5,
        levels=tuple(zip(hs, lams)),
        method=method,
        minimizer=f,
        grid=grid,
    )


def hardy_constant(domain, h, s=2.0, a=0.0, levels=3, weight=DEFAULT_WEIGHT) -> HardyReport:
    """Pencil ``(A_h + a, d^-s)`` on ``levels`` grids ending at ``h``, extrapolated."""
    if a < 0:
        raise ValueError("shift a must be nonnegative")
    return _ladder(domain.name, lambda hk: domain, h, s, float(a), levels, weight)


def strong_hardy_constant(domain, h, s=2.0, levels=3, weight=DEFAULT_WEIGHT) -> HardyReport:
    """Smallest ``c`` with ``int |f|^2 / d^s <= c^2 Q(f)``, extrapolated from ``levels`` grids.

    The finest spacing is ``h``; coarser levels double it.
    """
    return hardy_constant(domain, h, s, 0.0, levels, weight)


def weak_hardy_constant(domain, h, a, levels=3, weight=DEFAULT_WEIGHT) -> HardyReport:
    """Hardy constant for the shifted form ``Q(f) + a ||f||^2``; non-increasing in ``a``."""
    return hardy_constant(domain, h, 2.0, a, levels, weight)


def sector_constant(beta, h, levels=3, weight=DEFAULT_WEIGHT) -> HardyReport:
    """Strong Hardy constant of the unit sector of opening ``beta``.

    Each level uses its own polygonal arc with chords no longer than the
    level spacing; the corner at the origin is an exact vertex.
    """
    rep = _ladder(f"sector_{beta:g}", lambda hk: domains.sector(beta, max_chord=hk), h, 2.0, 0.0, levels, weight)
    arc = domains.sector(beta, max_chord=h)
    return HardyReport(**{**rep.__dict__, "note": f"arc chords <= {h:g}, {len(arc.vertices) - 1} arc segments"})


def brezis_marcus_offset(domain, h, weight=DEFAULT_WEIGHT) -> float:
    """Least ``a`` with ``d^-2 <= 4 (A_h + a)`` on the grid of spacing ``h``.

    Equal to ``-lambda_min(4 A_h - W) / 4`` with ``W`` the ``d^-2`` weight.
    """
    grid = build_grid(domain, h)
    w = weight_values(grid, 2.0, weight)
    M = (4 * laplacian(grid).matrix - sp.diags(w)).tocsr()
    vals, _, _ = symmetric_lowest(M, 1, DEFAULT_TOL, lower_bound=-float(w.max()))
    return -float(vals[0]) / 4


def barta_certificate(grid: Grid, phi, V, tol=None, n_tests=20, seed=0, coefficients=None) -> CertificateReport:
    """Check ``(A_h phi) / phi >= V`` at every node, which gives ``A_h >= diag(V)``.

    The quadratic-form consequence is also sampled on ``n_tests`` random
    vectors. ``tol`` defaults to ``10 h``.
    """
    if coefficients is not None:
        raise NotImplementedError("only the identity coefficient matrix is supported")
    phi = np.asarray(phi, dtype=float)
    V = np.asarray(V, dtype=float)
    if np.any(phi <= 0):
        raise ValueError("certificate profile phi must be strictly positive")
    tol = 10 * grid.h if tol is None else tol
    A = laplacian(grid).matrix
    margin = float(np.min(A @ phi / phi - V))
    rng = np.random.default_rng(seed)
    form = np.inf
    for _ in range(n_tests):
        f = rng.standard_normal(grid.size)
        form = min(form, float(f @ (A @ f) - f @ (V * f)) / float(f @ f))
    verified = margin >= -tol and form >= -tol
    return CertificateReport(phi=phi, V=V, margin=margin, form_margin=form, tol=tol, verified=verified)


def _bump(t):
    inside = np.abs(t) < 1
    val = np.where(inside, (1 - t * t) ** 3, 0.0)
    der = np.where(inside, -6 * t * (1 - t * t) ** 2, 0.0)
    return val, der


def default_bumps():
    """``(x0, y0, width)`` triples: tensor bumps at several heights and scales."""
    out = []
    for w in (0.5, 1.0, 2.0):
        for rel in (1.02, 1.2, 2.0, 5.0):
            for x0 in (0.0, 1.5 * w):
                out.append((x0, rel * w, w))
    return out


def bump_ratio(x0, y0, w, h) -> float:
    """Left side over right side of the improved half-plane inequality for one bump."""
    n = max(4, int(np.ceil(2 * w / h)))
    t = -1 + (np.arange(n) + 0.5) * (2 / n)
    gx, dgx = _bump(t)
    gy, dgy = _bump(t)
    X = x0 + w * t[:, None]
    Y = y0 + w * t[None, :]
    f2 = (gx[:, None] * gy[None, :]) ** 2
    grad2 = ((dgx[:, None] * gy[None, :]) ** 2 + (gx[:, None] * dgy[None, :]) ** 2) / w ** 2
    weight = 1 / Y ** 2 + 1 / (4 * Y * np.sqrt(Y ** 2 + X ** 2))
    cell = (2 * w / n) ** 2
    return float((weight * f2).sum() * cell / (4 * grad2.sum() * cell))


def check_halfspace_improved(h=0.05, box=20.0, bumps=None) -> HalfspaceReport:
    """Quadrature check of the improved Hardy inequality on ``{y > 0}`` over a bump family."""
    bumps = default_bumps() if bumps is None else list(bumps)
    for x0, y0, w in bumps:
        if y0 - w <= 0 or abs(x0) + w > box or y0 + w > box:
            raise ValueError(f"bump {(x0, y0, w)} is not supported inside the half-plane box")
    ratios = tuple(bump_ratio(x0, y0, w, h) for x0, y0, w in bumps)
    return HalfspaceReport(worst_ratio=max(ratios), ratios=ratios, bumps=tuple(bumps))


def lambda1_lower_bound(domain, h, n_dirs=geometry.DEFAULT_N_DIRS, grid_h=None):
    """``(N / (4 mu^2), lambda_1)`` with ``mu`` the lattice quasi-inradius.

    The lattice supremum of ``m`` is at most the true one, so the returned
    bound is never smaller than the continuum bound.
    """
    mu = geometry.quasi_inradius(domain, grid_h or h, n_dirs)
    bound = domain.dim / (4 * mu ** 2)
    grid = build_grid(domain, h)
    lam1 = float(lowest_eigenpairs(laplacian(grid), 1, grid=grid).values[0])
    if bound > lam1:
        raise AssertionError(f"lower bound {bound} exceeds lambda_1 = {lam1}")
    return bound, lam1


def exponent_scan(domain, h_series, s, weight=DEFAULT_WEIGHT) -> ExponentScan:
    """Pencil eigenvalue of ``(A_h, d^-s)`` on each grid of ``h_series``."""
    hs = [float(h) for h in h_series]
    if not 0 <= s <= 3:
        raise ValueError(f"exponent s must lie in [0, 3], got {s}")
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("h_series must be strictly decreasing")
    lams = tuple(_pencil_at(domain, h, s, 0.0, weight)[0] for h in hs)
    return ExponentScan(s=s, h=tuple(hs), lambdas=lams)


def minkowski_hardy_check(domain, h, eps_series, quad_h=None, c=None, tol=0.1, levels=3) -> MinkowskiHardyReport:
    """Check ``c (2 + alpha - N) >= 2 - tol`` with fitted ``alpha`` and computed ``c``."""
    eps = sorted(eps_series, reverse=True)
    quad_h = eps[-1] / 10 if quad_h is None else quad_h
    fit = geometry.minkowski_fit(domain, eps, quad_h)
    N = domain.dim
    if fit.alpha <= N - 2:
        raise InapplicableError(f"fitted dimension {fit.alpha} does not exceed N - 2")
    if c is None:
        c = strong_hardy_constant(domain, h, levels=levels).c
    product = c * (2 + fit.alpha - N)
    return MinkowskiHardyReport(
        alpha=fit.alpha, c=c, dim=N, product=product, tol=tol, holds=product >= 2 - tol
    )
