"""Batch command line: ``hardylab run <config>`` and ``hardylab domains``.

Each run writes ``<command>.csv`` and ``manifest.json`` into the output
directory. Exit status is 0 on success, 2 for a bad config and 3 when the
computation itself fails (resolution, convergence, inapplicable bound).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__, converge, decay, domains, geometry, hardy, trace
from .config import ConfigError, ExperimentConfig, load_config
from .discretize import build_grid, laplacian
from .eigensolve import lowest_eigenpairs
from .errors import HardyLabError, ResolutionError

BARTA_CSV_HEADER = ("domain", "h", "profile", "margin", "form_margin", "tol", "verified")
MDIST_CSV_HEADER = (
    "domain", "grid_h", "n_dirs", "quasi_inradius", "mean_to_boundary_ratio", "lambda1_bound", "lambda1",
)
MINKOWSKI_CSV_HEADER = ("domain", "eps", "volume", "alpha", "k1", "k2", "c", "product")

NAN = float("nan")


def _run_hardy(cfg, seed):
    p, dom = cfg.params, cfg.domain
    rows, meta = [], []
    for a in p.a_series:
        rep = hardy.hardy_constant(dom, p.h, p.s, a, p.levels, p.weight)
        rows += rep.csv_rows()
        meta.append({"a": a, "method": rep.method, "c": rep.c})
    return hardy.HARDY_CSV_HEADER, rows, {"extrapolation": meta}


def _run_sector(cfg, seed):
    p = cfg.params
    rows, meta = [], []
    for beta in p.beta_series:
        rep = hardy.sector_constant(beta, p.h, p.levels)
        rows += rep.csv_rows()
        meta.append({"beta": beta, "method": rep.method, "c": rep.c, "arc": rep.note})
    return hardy.HARDY_CSV_HEADER, rows, {"extrapolation": meta}


def _run_barta(cfg, seed):
    p, dom = cfg.params, cfg.domain
    grid = build_grid(dom, p.h)
    if p.profile == "interval_sqrt":
        if dom.dim != 1:
            raise ConfigError("profile interval_sqrt needs an interval domain")
        x, a = grid.nodes[:, 0], dom.length
        phi = np.sqrt(x * (a - x))
        V = a ** 2 / (4 * x ** 2 * (a - x) ** 2)
    else:
        phi = np.sqrt(grid.dist)
        V = 1 / (4 * grid.dist ** 2)
    rep = hardy.barta_certificate(grid, phi, V, tol=p.tol, n_tests=p.n_tests, seed=seed)
    row = (dom.name, p.h, p.profile, rep.margin, rep.form_margin, rep.tol, rep.verified)
    return BARTA_CSV_HEADER, [row], {}


def _run_decay(cfg, seed):
    p, dom = cfg.params, cfg.domain
    if p.c is None:
        c_est = hardy.strong_hardy_constant(dom, p.hardy_h or p.h, levels=p.hardy_levels).c
        c, a = decay.hardy_pair(c_est, p.a)
    else:
        c_est, (c, a) = NAN, (p.c, p.a)
    grid = build_grid(dom, p.h)
    spec = lowest_eigenpairs(laplacian(grid), p.n_max, grid=grid)
    rows = []
    violations = 0
    for n in range(1, p.n_max + 1):
        rep = decay.decay_report(grid, spec, spec.vectors[:, n - 1], p.eps_series, c, a)
        rows += rep.csv_rows(dom.name, n)
        violations += rep.mass_violations + rep.energy_violations
    return decay.DECAY_CSV_HEADER, rows, {"c_estimate": c_est, "violations": violations}


def _run_converge(cfg, seed):
    p, dom = cfg.params, cfg.domain
    hs = p.h if p.h is not None else [e / p.h_ratio for e in p.eps_series]
    reports = converge.shrink_eigenvalues(dom, hs, p.eps_series, p.n_max, p.c)
    rows = []
    for rep in reports:
        try:
            cn = converge.empirical_cn(rep)
        except HardyLabError:
            cn = NAN
        rows += rep.csv_rows(dom.name, cn)
    return converge.CONVERGE_CSV_HEADER, rows, {}


def _run_trace(cfg, seed):
    p, dom = cfg.params, cfg.domain
    grid = build_grid(dom, p.h)
    spec = lowest_eigenpairs(laplacian(grid), min(p.k, grid.size), grid=grid)
    if spec.values[-1] < p.lambda_cut:
        raise ResolutionError(
            f"{len(spec)} eigenvalues reach {spec.values[-1]:.4g}, below lambda_cut={p.lambda_cut}; raise k"
        )
    rows = [
        trace.trace_report(dom, spec, t, p.lambda_cut, p.quad_h, p.n_dirs, p.grid_h).csv_row(dom.name)
        for t in p.t_series
    ]
    # the lattice spectrum is capped near 4N/h^2, so only t >~ h^2 is meaningful
    return trace.TRACE_CSV_HEADER, rows, {"valid_t_min": p.h ** 2}


def _run_mdist(cfg, seed):
    p, dom = cfg.params, cfg.domain
    mu = geometry.quasi_inradius(dom, p.grid_h, p.n_dirs)
    ratio = geometry.mean_to_boundary_ratio(dom, p.grid_h, p.n_dirs)
    lam1 = NAN
    if p.h is not None:
        grid = build_grid(dom, p.h)
        lam1 = float(lowest_eigenpairs(laplacian(grid), 1, grid=grid).values[0])
    row = (dom.name, p.grid_h, p.n_dirs, mu, ratio, dom.dim / (4 * mu ** 2), lam1)
    return MDIST_CSV_HEADER, [row], {}


def _run_minkowski(cfg, seed):
    p, dom = cfg.params, cfg.domain
    eps = sorted(p.eps_series, reverse=True)
    fit = geometry.minkowski_fit(dom, eps, p.quad_h)
    c = product = NAN
    if p.h is not None:
        rep = hardy.minkowski_hardy_check(dom, p.h, eps, p.quad_h, tol=p.tol, levels=p.levels)
        c, product = rep.c, rep.product
    rows = [(dom.name, e, v, fit.alpha, fit.k1, fit.k2, c, product) for e, v in zip(fit.eps, fit.volumes)]
    return MINKOWSKI_CSV_HEADER, rows, {}


RUNNERS = {
    "hardy": _run_hardy,
    "sector": _run_sector,
    "barta": _run_barta,
    "decay": _run_decay,
    "converge": _run_converge,
    "trace": _run_trace,
    "mdist": _run_mdist,
    "minkowski": _run_minkowski,
}


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def run(cfg: ExperimentConfig, output=None, threads=None, seed=0) -> Path:
    """Execute one experiment; returns the CSV path."""
    out = Path(output or cfg.output or "out")
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    with threadpool_limits(limits=threads):
        header, rows, meta = RUNNERS[cfg.command](cfg, seed)
    wall = time.perf_counter() - start
    csv_path = out / f"{cfg.command}.csv"
    write_csv(csv_path, header, rows)
    manifest = {
        "command": cfg.command,
        "config_sha256": cfg.sha256,
        "version": __version__,
        "seed": seed,
        "threads": threads,
        "wall_time_s": wall,
        "outputs": [csv_path.name],
        "details": meta,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=float) + "\n")
    return csv_path


def _parser():
    ap = argparse.ArgumentParser(prog="hardylab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--output", help="output directory (overrides the config)")
    r.add_argument("--threads", type=int, help="BLAS/LAPACK thread limit")
    r.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    sub.add_parser("domains", help="list built-in domains")
    return ap


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    if args.cmd == "domains":
        for name, desc in domains.list_builtin_domains().items():
            print(f"{name:16s} {desc}")
        return 0
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    if not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        path = run(cfg, args.output, args.threads, args.seed)
    except (HardyLabError, AssertionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # parameters that validate on their own but not against the domain
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
