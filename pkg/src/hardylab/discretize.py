"""Uniform-lattice finite differences with Dirichlet conditions by node omission."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import ndimage

from . import geometry
from .errors import ResolutionError
from .geometry import Domain

# nodes within this fraction of h of a level set d = eps count as on it, so
# exact ties (eps a multiple of h on aligned edges) do not depend on rounding
TIE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Grid:
    """Interior lattice nodes ``k h`` of a domain, in row-major order.

    ``index`` holds the integer lattice coordinates, ``nodes`` the points and
    ``dist`` the distance of each node to the boundary.
    """

    domain: Domain
    h: float
    index: np.ndarray
    nodes: np.ndarray
    dist: np.ndarray

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def size(self) -> int:
        return len(self.dist)

    @property
    def cell_volume(self) -> float:
        return self.h ** self.dim

    def _keys(self, index):
        lo = self.index.min(axis=0) - 1
        span = self.index.max(axis=0) - lo + 2
        rel = np.asarray(index) - lo
        if self.dim == 1:
            return rel[..., 0]
        return rel[..., 1] * span[0] + rel[..., 0]

    def rows(self, index) -> np.ndarray:
        """Row number of each lattice index, or -1 where the node is absent."""
        index = np.atleast_2d(np.asarray(index))
        keys = self._keys(self.index)
        query = self._keys(index)
        pos = np.searchsorted(keys, query)
        pos = np.clip(pos, 0, len(keys) - 1)
        inside = np.all((index >= self.index.min(axis=0) - 1) & (index <= self.index.max(axis=0) + 1), axis=1)
        found = inside & (keys[pos] == query)
        return np.where(found, pos, -1)

    def row(self, point) -> int:
        """Row of the node at ``point`` (must be a lattice point of the grid)."""
        k = np.rint(np.atleast_1d(np.asarray(point, dtype=float)) / self.h).astype(np.int64)
        r = int(self.rows(k[None, :])[0])
        if r < 0:
            raise KeyError(f"{point} is not a node of this grid")
        return r

    def inner(self, f, g) -> float:
        """Discrete L2 inner product ``sum f g h^N``."""
        return float(np.dot(f, g)) * self.cell_volume

    def norm(self, f) -> float:
        return np.sqrt(self.inner(f, f))

    def coords(self):
        """Node coordinates as a tuple of 1D arrays (``x`` or ``x, y``)."""
        return tuple(self.nodes.T)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Immutable sparse matrix with a declared symmetry flag."""

    matrix: sp.csr_matrix
    symmetric: bool = True

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, f):
        return self.matrix @ f

    def diagonal(self):
        return self.matrix.diagonal()

    def is_symmetric(self, tol=0.0) -> bool:
        diff = self.matrix - self.matrix.T
        return diff.nnz == 0 or abs(diff).max() <= tol

    def save_coo(self, path):
        """Write ``row col value`` triples, one per line, in CSR order."""
        coo = self.matrix.tocoo()
        with open(path, "w") as fh:
            fh.write(f"% {self.dim} {self.dim} {coo.nnz}\n")
            for i, j, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{i} {j} {v!r}\n")


def build_grid(domain: Domain, h: float) -> Grid:
    index, pts, dist = geometry.interior_lattice(domain, h)
    if len(dist) == 0:
        raise ResolutionError(f"no interior lattice points at h={h} in {domain.name}")
    return Grid(domain=domain, h=float(h), index=index, nodes=pts, dist=dist)


def _neighbor_pairs(grid):
    """Forward lattice edges ``(i, j)`` with both ends in the grid, per axis."""
    pairs = []
    for axis in range(grid.dim):
        step = np.zeros(grid.dim, dtype=np.int64)
        step[axis] = 1
        j = grid.rows(grid.index + step)
        i = np.nonzero(j >= 0)[0]
        pairs.append((i, j[i]))
    return pairs


def laplacian(grid: Grid) -> SparseOperator:
    """Five-point (three-point in 1D) Dirichlet Laplacian ``-Delta_h``."""
    n, h2 = grid.size, grid.h ** 2
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.full(n, 2 * grid.dim / h2)]
    for i, j in _neighbor_pairs(grid):
        off = np.full(len(i), -1.0 / h2)
        rows += [i, j]
        cols += [j, i]
        vals += [off, off]
    A = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    A.sort_indices()
    return SparseOperator(A, symmetric=True)


def weight_values(grid: Grid, s: float, offset_fn: str = "d", n_dirs: int = geometry.DEFAULT_N_DIRS):
    """Nodal weights ``w^-s``.

    ``offset_fn`` selects ``w``: ``"d"`` boundary distance, ``"m"`` harmonic
    mean distance, ``"lattice"`` distance to the nearest omitted lattice point.
    """
    if offset_fn == "d":
        w = grid.dist
    elif offset_fn == "lattice":
        w = lattice_distance(grid)
    elif offset_fn == "m":
        w = geometry.mean_distances(grid.domain, grid.nodes if grid.dim == 2 else grid.nodes[:, 0], n_dirs)
    else:
        raise ValueError(f"offset_fn must be 'd', 'm' or 'lattice', got {offset_fn!r}")
    if np.any(w <= 0):
        raise AssertionError("grid node with nonpositive distance")
    return w ** -float(s)


def weight_operator(grid: Grid, s: float, offset_fn: str = "d", n_dirs: int = geometry.DEFAULT_N_DIRS):
    """Diagonal operator with entries ``w(node)^-s``."""
    return SparseOperator(sp.diags(weight_values(grid, s, offset_fn, n_dirs)).tocsr(), symmetric=True)


def _edge_terms(grid, f):
    """Squared difference quotients and midpoints of every stencil edge.

    Each node contributes its forward edge and, where the backward neighbour
    is missing, the backward edge to the zero boundary value.
    """
    h = grid.h
    sq, mids = [], []
    for axis in range(grid.dim):
        step = np.zeros(grid.dim, dtype=np.int64)
        step[axis] = 1
        fwd = grid.rows(grid.index + step)
        bwd = grid.rows(grid.index - step)
        fj = np.where(fwd >= 0, f[np.maximum(fwd, 0)], 0.0)
        sq.append(((fj - f) / h) ** 2)
        mids.append(grid.nodes + 0.5 * h * step)
        lone = bwd < 0
        sq.append((f[lone] / h) ** 2)
        mids.append(grid.nodes[lone] - 0.5 * h * step)
    return np.concatenate(sq), np.concatenate(mids)


def dirichlet_energy(grid: Grid, f) -> float:
    """``sum_edges |difference / h|^2 h^N``, which equals ``<f, A f>_h``."""
    sq, _ = _edge_terms(grid, np.asarray(f, dtype=float))
    return float(sq.sum()) * grid.cell_volume


def gradient_energy_layer(grid: Grid, f, eps: float) -> float:
    """Dirichlet energy of ``f`` restricted to edges whose midpoint has ``d < eps``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.size,):
        raise ValueError(f"vector of length {f.shape} does not match grid of size {grid.size}")
    sq, mids = _edge_terms(grid, f)
    d = geometry.distances(grid.domain, mids if grid.dim == 2 else mids[:, 0])
    return float(sq[d < eps - TIE_TOL * grid.h].sum()) * grid.cell_volume


def layer_mass(grid: Grid, f, eps: float) -> float:
    """``sum_{d(node) < eps} f^2 h^N``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.size,):
        raise ValueError(f"vector of length {f.shape} does not match grid of size {grid.size}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    sel = grid.dist < eps - TIE_TOL * grid.h
    return float(np.dot(f[sel], f[sel])) * grid.cell_volume


def restrict(grid: Grid, eps: float) -> Grid:
    """Subgrid of nodes with ``d(node) > eps`` (the lattice version of ``{d > eps}``)."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    keep = grid.dist > eps + TIE_TOL * grid.h
    if not keep.any():
        raise ResolutionError(f"restriction to d > {eps} leaves no nodes at h={grid.h}")
    return Grid(grid.domain, grid.h, grid.index[keep], grid.nodes[keep], grid.dist[keep])


def restriction_rows(grid: Grid, eps: float) -> np.ndarray:
    """Rows of ``grid`` that survive :func:`restrict` with the same ``eps``."""
    return np.nonzero(grid.dist > eps + TIE_TOL * grid.h)[0]


def lattice_distance(grid: Grid) -> np.ndarray:
    """Distance from each node to the nearest lattice point that is not a node.

    This is the boundary distance of the discrete domain the node-omission
    stencil actually sees. It agrees with ``d`` on lattice-aligned polygons
    such as the unit square and never falls below ``h``.
    """
    if grid.dim == 1:
        # omitted points bracketing the node set along the line
        k = grid.index[:, 0]
        return np.minimum(k - (k.min() - 1), (k.max() + 1) - k) * grid.h
    lo = grid.index.min(axis=0) - 1
    rel = grid.index - lo
    mask = np.zeros(tuple(rel.max(axis=0)[::-1] + 2), dtype=bool)
    mask[rel[:, 1], rel[:, 0]] = True
    edt = ndimage.distance_transform_edt(mask)
    return edt[rel[:, 1], rel[:, 0]] * grid.h
