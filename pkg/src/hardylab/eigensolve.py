"""Lowest eigenpairs of symmetric sparse operators and of diagonal-weight pencils."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .discretize import Grid, SparseOperator
from .errors import ConvergenceError, TruncationError

DEFAULT_TOL = 1e-8
# below this size a dense symmetric eigensolver is cheaper and exact
DENSE_LIMIT = 600


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenpairs. Columns of ``vectors`` have unit discrete L2 norm."""

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    cell_volume: float = 1.0
    grid: Grid | None = None

    def __len__(self):
        return len(self.values)

    def inner(self, f, g):
        return float(np.dot(f, g)) * self.cell_volume

    def coefficients(self, f):
        return self.vectors.T @ np.asarray(f, dtype=float) * self.cell_volume


def _matrix(A):
    return A.matrix if isinstance(A, SparseOperator) else sp.csr_matrix(A)


def _fix_signs(vecs):
    # make the largest-magnitude entry of each vector positive
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def symmetric_lowest(M, k, tol=DEFAULT_TOL, lower_bound=None):
    """``k`` smallest eigenpairs of symmetric ``M`` with Euclidean-unit vectors.

    Shift-invert Lanczos targets the spectrum nearest a shift placed at
    ``lower_bound`` (default: just below zero, valid for PSD input), so the
    shift must not exceed the smallest eigenvalue.
    """
    n = M.shape[0]
    if n <= DENSE_LIMIT or k >= n - 1:
        vals, vecs = la.eigh(M.toarray(), subset_by_index=[0, min(k, n) - 1])
    else:
        v0 = np.ones(n) / np.sqrt(n)
        scale = abs(M).sum(axis=1).max()
        sigma = -1e-6 * scale if lower_bound is None else lower_bound - 1e-6 * scale
        try:
            vals, vecs = sla.eigsh(
                M.tocsc(), k=k, sigma=sigma, which="LM", v0=v0, tol=tol * 1e-2, maxiter=10 * n
            )
        except sla.ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"Lanczos did not converge for {k} eigenpairs", residuals=exc.eigenvalues
            ) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    vecs = _fix_signs(vecs)
    res = np.linalg.norm(M @ vecs - vecs * vals, axis=0)
    return vals, vecs, res


def lowest_eigenpairs(A, k: int, tol: float = DEFAULT_TOL, grid: Grid | None = None) -> Spectrum:
    """The ``k`` smallest eigenpairs of a symmetric operator.

    When ``grid`` is given, vectors are normalised in the grid's discrete L2
    norm ``sum f^2 h^N``; otherwise in the Euclidean norm.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    M = _matrix(A)
    vals, vecs, res = symmetric_lowest(M, k, tol)
    bad = res > tol * np.maximum(1.0, np.abs(vals))
    if np.any(bad):
        raise ConvergenceError(f"residuals {res[bad]} exceed tolerance {tol}", residuals=res)
    cv = grid.cell_volume if grid is not None else 1.0
    return Spectrum(
        values=vals, vectors=vecs / np.sqrt(cv), residuals=res, cell_volume=cv, grid=grid
    )


def pencil_min(A, B, tol: float = DEFAULT_TOL):
    """Smallest ``lambda`` with ``A f = lambda B f`` for diagonal positive ``B``.

    Solved as the symmetric problem ``B^-1/2 A B^-1/2 y = lambda y``,
    ``f = B^-1/2 y``. Returns ``(lambda, f)`` with ``f`` Euclidean-normalised.
    """
    M = _matrix(A)
    b = _matrix(B).diagonal()
    if np.any(b <= 0):
        raise ValueError("pencil weight must have a positive diagonal")
    s = sp.diags(b ** -0.5)
    C = (s @ M @ s).tocsr()
    vals, vecs, res = symmetric_lowest(C, 1, tol)
    lam = float(vals[0])
    f = vecs[:, 0] * b ** -0.5
    f /= np.linalg.norm(f)
    rq = float(f @ (M @ f)) / float(f @ (b * f))
    if abs(rq - lam) > tol * max(1.0, abs(lam)) or res[0] > tol * max(1.0, abs(lam)):
        raise ConvergenceError(
            f"pencil eigenpair inaccurate: Rayleigh quotient {rq} vs {lam}", residuals=res
        )
    return lam, f


def fractional_apply(spec: Spectrum, a: float, p: float, f, trunc_tol: float = 1e-6):
    """``sum_n (lambda_n + a)^p <phi_n, f> phi_n`` over the computed eigenbasis.

    Raises :class:`TruncationError` when the relative discrete L2 norm of the
    part of ``f`` outside the computed span exceeds ``trunc_tol``.
    """
    if a < 0:
        raise ValueError("shift a must be nonnegative")
    f = np.asarray(f, dtype=float)
    coef = spec.coefficients(f)
    proj = spec.vectors @ coef
    fnorm = np.sqrt(spec.inner(f, f))
    resid = np.sqrt(spec.inner(f - proj, f - proj))
    if fnorm > 0 and resid > trunc_tol * fnorm:
        raise TruncationError(f"vector lies outside the computed span (residual {resid:.3e})", resid)
    return spec.vectors @ ((spec.values + a) ** p * coef)
