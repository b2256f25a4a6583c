"""Distance-to-boundary quantities for intervals and simple polygons.

All length-valued routines come in two flavours: a scalar form that checks
membership of its argument and raises on boundary/exterior points, and a
vectorised form (plural name) used by the grid code, which takes arrays of
points already known to be interior.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import DomainMembershipError

DEFAULT_N_DIRS = 360


@dataclass(frozen=True, eq=False)
class Domain:
    """An open interval ``(0, length)`` or the interior of a simple CCW polygon.

    ``approx_error`` is the Hausdorff distance between the polygon and the
    smooth domain it stands in for (0 for genuinely polygonal domains).
    """

    kind: str
    length: float | None = None
    vertices: np.ndarray | None = field(default=None, repr=False)
    name: str = ""
    approx_error: float = 0.0

    def __post_init__(self):
        if self.kind == "interval":
            if self.length is None or not self.length > 0:
                raise ValueError(f"interval length must be positive, got {self.length}")
            object.__setattr__(self, "length", float(self.length))
        elif self.kind == "polygon":
            v = np.array(self.vertices, dtype=float)
            if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
                raise ValueError("polygon needs at least three 2D vertices")
            if np.allclose(v[0], v[-1]):
                v = v[:-1]
            if _signed_area(v) <= 0:
                raise ValueError("polygon vertices must be counterclockwise with positive area")
            if not _is_simple(v):
                raise ValueError("polygon is not simple")
            v.setflags(write=False)
            object.__setattr__(self, "vertices", v)
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def interval(cls, a, name=""):
        return cls("interval", length=a, name=name or f"interval_{a:g}")

    @classmethod
    def polygon(cls, vertices, name="", approx_error=0.0):
        """Build a polygon domain, reversing clockwise input."""
        v = np.asarray(vertices, dtype=float)
        if len(v) >= 3 and _signed_area(v) < 0:
            v = v[::-1]
        return cls("polygon", vertices=v, name=name or f"polygon_{len(v)}", approx_error=approx_error)

    @property
    def dim(self) -> int:
        return 1 if self.kind == "interval" else 2

    @property
    def area(self) -> float:
        """Lebesgue measure (length in 1D)."""
        if self.kind == "interval":
            return self.length
        return _signed_area(self.vertices)

    @property
    def perimeter(self) -> float:
        if self.kind == "interval":
            return 2.0
        p, q = self.edges()
        return float(np.hypot(*(q - p).T).sum())

    @property
    def bbox(self):
        """``(lower, upper)`` corner arrays of the bounding box."""
        if self.kind == "interval":
            return np.array([0.0]), np.array([self.length])
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def edges(self):
        """Start and end points of the polygon edges, both ``(E, 2)``."""
        v = self.vertices
        return v, np.roll(v, -1, axis=0)


@dataclass(frozen=True)
class MeanDistanceResult:
    point: tuple
    d: float
    m: float
    n_dirs: int


@dataclass(frozen=True)
class MinkowskiFit:
    alpha: float
    k1: float
    k2: float
    eps: tuple
    volumes: tuple


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _is_simple(v):
    """True when no two non-adjacent edges of the closed polygon meet."""
    n = len(v)
    p, q = v, np.roll(v, -1, axis=0)
    e = q - p
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    for i in range(n - 2):
        j = np.arange(i + 2, n if i > 0 else n - 1)
        if len(j) == 0:
            continue
        boxes = np.all((lo[j] <= hi[i]) & (hi[j] >= lo[i]), axis=1)
        j = j[boxes]
        d1 = _cross(e[i, 0], e[i, 1], p[j, 0] - p[i, 0], p[j, 1] - p[i, 1])
        d2 = _cross(e[i, 0], e[i, 1], q[j, 0] - p[i, 0], q[j, 1] - p[i, 1])
        d3 = _cross(e[j, 0], e[j, 1], p[i, 0] - p[j, 0], p[i, 1] - p[j, 1])
        d4 = _cross(e[j, 0], e[j, 1], q[i, 0] - p[j, 0], q[i, 1] - p[j, 1])
        # bounding boxes overlap, so a zero orientation means an actual touch
        if np.any((d1 * d2 <= 0) & (d3 * d4 <= 0)):
            return False
    return True


def _as_points(domain, pts):
    pts = np.asarray(pts, dtype=float)
    if domain.dim == 1:
        return pts.reshape(-1)
    return pts.reshape(-1, 2)


@njit(cache=True)
def _segment_distance_kernel(px, py, vx, vy):
    n, m = len(px), len(vx)
    out = np.empty(n)
    for i in range(n):
        best = np.inf
        for j in range(m):
            k = j + 1 if j + 1 < m else 0
            ex, ey = vx[k] - vx[j], vy[k] - vy[j]
            wx, wy = px[i] - vx[j], py[i] - vy[j]
            s = (wx * ex + wy * ey) / (ex * ex + ey * ey)
            s = min(1.0, max(0.0, s))
            dx, dy = wx - s * ex, wy - s * ey
            dd = dx * dx + dy * dy
            if dd < best:
                best = dd
        out[i] = np.sqrt(best)
    return out


@njit(cache=True)
def _winding_kernel(px, py, vx, vy):
    n, m = len(px), len(vx)
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        wn = 0
        for j in range(m):
            k = j + 1 if j + 1 < m else 0
            left = (vx[k] - vx[j]) * (py[i] - vy[j]) - (vy[k] - vy[j]) * (px[i] - vx[j])
            if vy[j] <= py[i]:
                if vy[k] > py[i] and left > 0:
                    wn += 1
            elif vy[k] <= py[i] and left < 0:
                wn -= 1
        out[i] = wn
    return out


@njit(cache=True)
def _line_exit_kernel(px, py, ux, uy, vx, vy):
    n, nd, m = len(px), len(ux), len(vx)
    out = np.full((n, nd), np.inf)
    for i in range(n):
        for j in range(m):
            k = j + 1 if j + 1 < m else 0
            ex, ey = vx[k] - vx[j], vy[k] - vy[j]
            wx, wy = vx[j] - px[i], vy[j] - py[i]
            we = wx * ey - wy * ex
            for r in range(nd):
                den = ux[r] * ey - uy[r] * ex
                if den == 0.0:
                    continue
                s = (wx * uy[r] - wy * ux[r]) / den
                if s < -1e-14 or s > 1.0 + 1e-14:
                    continue
                t = abs(we / den)
                if t < out[i, r]:
                    out[i, r] = t
    return out


def distances(domain: Domain, pts) -> np.ndarray:
    """Unsigned distance from each point to the boundary."""
    pts = _as_points(domain, pts)
    if domain.kind == "interval":
        return np.minimum(np.abs(pts), np.abs(domain.length - pts))
    v = domain.vertices
    return _segment_distance_kernel(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
        np.ascontiguousarray(v[:, 0]), np.ascontiguousarray(v[:, 1]),
    )


def _winding(domain, pts):
    v = domain.vertices
    return _winding_kernel(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
        np.ascontiguousarray(v[:, 0]), np.ascontiguousarray(v[:, 1]),
    )


def _boundary_tol(domain):
    lo, hi = domain.bbox
    return 1e-12 * max(1.0, float(np.max(hi - lo)))


def interior_mask(domain: Domain, pts, dist=None) -> np.ndarray:
    """Winding-number membership; points within rounding of the boundary are exterior."""
    pts = _as_points(domain, pts)
    if dist is None:
        dist = distances(domain, pts)
    on_boundary = dist <= _boundary_tol(domain)
    if domain.kind == "interval":
        inside = (pts > 0) & (pts < domain.length)
    else:
        inside = _winding(domain, pts) != 0
    return inside & ~on_boundary


def _check_interior(domain, x):
    pts = _as_points(domain, x)
    d = distances(domain, pts)
    if not interior_mask(domain, pts, d)[0]:
        raise DomainMembershipError(f"point {x} is not interior to {domain.name or domain.kind}")
    return pts, float(d[0])


def distance_to_boundary(domain: Domain, x) -> float:
    """Euclidean distance from the interior point ``x`` to the complement."""
    return _check_interior(domain, x)[1]


def unit_directions(n_dirs: int) -> np.ndarray:
    """Uniform angles ``2 pi k / n_dirs`` as an ``(n_dirs, 2)`` array."""
    theta = 2 * np.pi * np.arange(n_dirs) / n_dirs
    return np.column_stack([np.cos(theta), np.sin(theta)])


def directional_distances(domain: Domain, pts, dirs) -> np.ndarray:
    """``d_u`` for every (point, direction) pair: ``min |t|`` with ``x + t u`` outside.

    Both signs of ``t`` count, so in 1D every direction gives ``d(x)``.
    """
    pts = _as_points(domain, pts)
    if domain.kind == "interval":
        dirs = np.asarray(dirs, dtype=float).reshape(-1)
        return np.repeat(distances(domain, pts)[:, None], len(dirs), axis=1)
    dirs = np.asarray(dirs, dtype=float).reshape(-1, 2)
    v = domain.vertices
    return _line_exit_kernel(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
        np.ascontiguousarray(dirs[:, 0]), np.ascontiguousarray(dirs[:, 1]),
        np.ascontiguousarray(v[:, 0]), np.ascontiguousarray(v[:, 1]),
    )


def directional_distance(domain: Domain, x, u) -> float:
    """Exit distance along the line through ``x`` with unit direction ``u``."""
    pts, _ = _check_interior(domain, x)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if abs(float(np.linalg.norm(u)) - 1.0) > 1e-12:
        raise ValueError(f"direction {u} is not a unit vector")
    return float(directional_distances(domain, pts, u[None, :] if domain.dim == 2 else u)[0, 0])


def mean_distances(domain: Domain, pts, n_dirs: int = DEFAULT_N_DIRS) -> np.ndarray:
    """Harmonic mean distance ``m`` at each interior point.

    ``m^-2`` is the average of ``d_u^-2`` over ``n_dirs`` uniform directions.
    Lines through ``x`` are symmetric under ``u -> -u``, so only the first
    half of the directions is traced. On an interval ``S^0 = {+1, -1}`` and
    both lines coincide, so ``m = d``.
    """
    pts = _as_points(domain, pts)
    if domain.kind == "interval":
        return distances(domain, pts)
    if n_dirs < 4 or n_dirs % 2:
        raise ValueError(f"n_dirs must be even and >= 4, got {n_dirs}")
    du = directional_distances(domain, pts, unit_directions(n_dirs)[: n_dirs // 2])
    return np.mean(du ** -2.0, axis=1) ** -0.5


def mean_distance(domain: Domain, x, n_dirs: int = DEFAULT_N_DIRS) -> MeanDistanceResult:
    pts, d = _check_interior(domain, x)
    m = float(mean_distances(domain, pts, n_dirs)[0])
    point = tuple(np.atleast_1d(np.asarray(x, dtype=float)).tolist())
    return MeanDistanceResult(point=point, d=d, m=m, n_dirs=n_dirs if domain.dim == 2 else 2)


def interior_lattice(domain: Domain, h: float, offset: float = 0.0):
    """Interior points of the lattice ``(k + offset) h``, in row-major order.

    Returns ``(index, points, dist)``: integer lattice indices ``(n, N)``,
    coordinates ``(n, N)`` and distances to the boundary ``(n,)``. Rows are
    ordered by ``y`` then ``x`` (``x`` varies fastest).
    """
    if not h > 0:
        raise ValueError(f"spacing must be positive, got {h}")
    lo, hi = domain.bbox
    kmin = np.floor(lo / h - offset).astype(np.int64)
    kmax = np.ceil(hi / h - offset).astype(np.int64)
    axes = [np.arange(a, b + 1) for a, b in zip(kmin, kmax)]
    if domain.dim == 1:
        idx = axes[0][:, None]
    else:
        ky, kx = np.meshgrid(axes[1], axes[0], indexing="ij")
        idx = np.column_stack([kx.ravel(), ky.ravel()])
    pts = (idx + offset) * h
    flat = pts[:, 0] if domain.dim == 1 else pts
    dist = distances(domain, flat)
    keep = interior_mask(domain, flat, dist)
    return idx[keep], pts[keep], dist[keep]


def quasi_inradius(domain: Domain, grid_h: float, n_dirs: int = DEFAULT_N_DIRS) -> float:
    """Largest harmonic mean distance over the interior lattice of spacing ``grid_h``."""
    _, pts, _ = interior_lattice(domain, grid_h)
    return float(np.max(mean_distances(domain, pts, n_dirs)))


def mean_to_boundary_ratio(domain: Domain, grid_h: float, n_dirs: int = DEFAULT_N_DIRS) -> float:
    """Empirical ``sup m/d`` over the interior lattice; always >= 1."""
    _, pts, d = interior_lattice(domain, grid_h)
    return float(np.max(mean_distances(domain, pts, n_dirs) / d))


def _layer_distances(domain, quad_h):
    _, _, d = interior_lattice(domain, quad_h, offset=0.5)
    return d


def boundary_layer_volume(domain: Domain, eps: float, quad_h: float | None = None) -> float:
    """Midpoint-rule measure of ``{x in U : d(x) < eps}``; ``quad_h`` defaults to ``eps/10``."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    quad_h = eps / 10 if quad_h is None else quad_h
    d = _layer_distances(domain, quad_h)
    return float(np.count_nonzero(d < eps)) * quad_h ** domain.dim


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    if np.ptp(lx) == 0:
        raise ValueError("degenerate fit: abscissae have zero variance")
    return float(np.polyfit(lx, ly, 1)[0])


def minkowski_fit(domain: Domain, eps_series, quad_h: float) -> MinkowskiFit:
    """Fit ``|{d < eps}| ~ eps^(N - alpha)`` over ``eps_series`` on one quadrature grid."""
    eps = np.asarray(eps_series, dtype=float)
    if len(eps) < 4:
        raise ValueError("minkowski_fit needs at least four eps values")
    if np.any(eps <= quad_h):
        raise ValueError("every eps must exceed quad_h")
    d = _layer_distances(domain, quad_h)
    vol = np.array([np.count_nonzero(d < e) for e in eps]) * quad_h ** domain.dim
    slope = loglog_slope(eps, vol)
    scaled = vol / eps ** slope
    return MinkowskiFit(
        alpha=domain.dim - slope,
        k1=float(scaled.min()),
        k2=float(scaled.max()),
        eps=tuple(eps.tolist()),
        volumes=tuple(vol.tolist()),
    )
