"""Eigenvalue shifts when the domain shrinks to ``{d > eps}``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretize import build_grid, laplacian, restriction_rows
from .eigensolve import lowest_eigenpairs
from .errors import InapplicableError, ResolutionError
from .geometry import loglog_slope

CONVERGE_CSV_HEADER = (
    "domain", "n", "eps", "lambda_U", "lambda_U_eps", "diff", "fitted_rate", "empirical_cn",
)


@dataclass(frozen=True)
class ConvergenceReport:
    """Eigenvalue ``n`` of the full and shrunken lattices, one entry per ``eps``.

    ``h`` and ``lambda_U`` are per-``eps`` because each ``eps`` may use its own
    spacing; the full and shrunken problems always share one lattice.
    """

    n: int
    eps: tuple
    h: tuple
    lambda_U: tuple
    lambda_U_eps: tuple
    diffs: tuple
    fitted_rate: float
    c: float

    def csv_rows(self, domain, cn=None):
        cn = float("nan") if cn is None else cn
        return [
            (domain, self.n, e, lu, le, df, self.fitted_rate, cn)
            for e, lu, le, df in zip(self.eps, self.lambda_U, self.lambda_U_eps, self.diffs)
        ]


def _lowest(A, k):
    return lowest_eigenpairs(A, min(k, A.shape[0])).values


def shrink_eigenvalues(domain, h, eps_series, n_max, c=2.0):
    """Reports for ``n = 1..n_max`` comparing ``lambda_n(U)`` with ``lambda_n(U_eps)``.

    ``U_eps`` is the subgrid ``{d > eps}``, whose Laplacian is the principal
    submatrix of the full one, so ``lambda_n(U) <= lambda_n(U_eps)`` exactly.
    ``h`` is one spacing or one spacing per ``eps``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    eps = [float(e) for e in eps_series]
    hs = [float(h)] * len(eps) if np.ndim(h) == 0 else [float(x) for x in h]
    if len(hs) != len(eps):
        raise ValueError("need one spacing per eps")
    full_cache = {}
    lam_u, lam_e = [], []
    for e, hk in zip(eps, hs):
        if hk not in full_cache:
            grid = build_grid(domain, hk)
            A = laplacian(grid).matrix
            full_cache[hk] = (grid, A, _lowest(A, n_max))
        grid, A, full = full_cache[hk]
        rows = restriction_rows(grid, e)
        if len(rows) < n_max:
            raise ResolutionError(f"d > {e} leaves {len(rows)} nodes, fewer than n_max={n_max}")
        sub = A[rows][:, rows]
        lam_u.append(full)
        lam_e.append(_lowest(sub, n_max) if e > 0 else full)
    reports = []
    for n in range(1, n_max + 1):
        lu = tuple(float(v[n - 1]) for v in lam_u)
        le = tuple(float(v[n - 1]) for v in lam_e)
        diffs = tuple(b - a for a, b in zip(lu, le))
        pos = [(e, d) for e, d in zip(eps, diffs) if e > 0 and d > 0]
        rate = loglog_slope(*zip(*pos)) if len(pos) >= 2 else float("nan")
        reports.append(
            ConvergenceReport(
                n=n, eps=tuple(eps), h=tuple(hs), lambda_U=lu, lambda_U_eps=le,
                diffs=diffs, fitted_rate=rate, c=c,
            )
        )
    return reports


def empirical_cn(report: ConvergenceReport, rate_tol=0.2) -> float:
    """``max diff / eps^(2/c)``: an admissible constant for the ``eps^(2/c)`` shift bound."""
    p = 2 / report.c
    if not abs(report.fitted_rate - p) <= rate_tol:
        raise InapplicableError(
            f"fitted rate {report.fitted_rate:.3f} is not within {rate_tol} of 2/c = {p:.3f}"
        )
    return max(d / e ** p for e, d in zip(report.eps, report.diffs) if e > 0)
