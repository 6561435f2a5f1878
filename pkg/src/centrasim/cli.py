"""Command-line harness: centrality tables, PageRank runs and oracles.

Exit codes: 0 success, 1 usage or parse failure, 2 violated connectivity
assumption, 3 internal consistency failure between two oracles.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import engine, simulator, surfer, tables
from .errors import AssumptionError, ConsistencyError, GraphFormatError, RepairError
from .graph import parse_edge_list, parse_temporal_edge_list, repair_dangling, \
    validate_oriented_tree
from .levelsets import closeness_centrality, degree_centrality, normalize, \
    run_levelset, tree_betweenness
from .matrix import PersistentAverage, build_hyperlink_matrix
from .oracles import bfs_all_pairs, brandes_betweenness, build_regression_rows, \
    direct_ls_solve, power_method, rows_from_graph, DENSE_ORACLE_LIMIT
from .levelsets import CentralityVector

DEFAULTS = {
    "damping": 0.15,
    "omega": 0.15,
    "rho": 1.0,
    "iterations": 100_000,
    "seed": 0,
    "mode": "unknown-n",
    "dangling": "backlink",
    "snapshot_stride": 1000,
    "joint_window": 1,
    "trace_stride": 100,
    "output_dir": ".",
    "oracle_tol": 1e-8,
}


def _load_config_file(path):
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise GraphFormatError(f"config line {lineno}: expected key=value")
        cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def _coerce(key, val):
    if key in ("damping", "omega", "rho", "oracle_tol"):
        return float(val)
    if key in ("iterations", "seed", "snapshot_stride", "joint_window",
               "trace_stride"):
        return int(val)
    return val


def resolve_config(args):
    """CLI flags override config-file keys override defaults."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        for key, val in _load_config_file(args.config).items():
            if key in cfg:
                cfg[key] = _coerce(key, val)
    for key in cfg:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    if not 0.0 < cfg["damping"] < 1.0:
        raise GraphFormatError(f"damping {cfg['damping']} outside (0,1)")
    if not 0.0 <= cfg["omega"] <= 1.0:
        raise GraphFormatError(f"omega {cfg['omega']} outside [0,1]")
    if not 0.0 < cfg["rho"] <= 1.0:
        raise GraphFormatError(f"rho {cfg['rho']} outside (0,1]")
    if cfg["iterations"] < 0:
        raise GraphFormatError("iterations must be >= 0")
    return cfg


def _normalize_or_raw(cv):
    """Normalize unless the vector is identically zero (e.g. betweenness on
    a graph with no intermediaries), in which case the raw zeros stand."""
    if not np.any(cv.values):
        return cv
    return normalize(cv)


def _write(outdir, name, text):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text)
    return path


def cmd_centrality(args):
    cfg = resolve_config(args)
    g = parse_edge_list(Path(args.input).read_text())
    ls = run_levelset(g)
    outdir = cfg["output_dir"]

    deg = normalize(degree_centrality(g))
    _write(outdir, "degree.csv", tables.serialize_centrality(deg, g.labels))

    clo = normalize(closeness_centrality(ls, g))
    _write(outdir, "closeness.csv", tables.serialize_centrality(clo, g.labels))

    is_tree, _ = validate_oriented_tree(g)
    if is_tree:
        bet = tree_betweenness(ls, g)
        method = "distributed"
    else:
        bet = brandes_betweenness(g)
        method = "oracle"
    bet = _normalize_or_raw(bet)
    _write(outdir, "betweenness.csv",
           tables.serialize_centrality(bet, g.labels, extras={"method": method}))

    repaired = repair_dangling(g, cfg["dangling"])
    w = build_hyperlink_matrix(repaired)
    pr = direct_ls_solve(build_regression_rows(w, cfg["damping"]))
    prv = CentralityVector(values=pr.x, kind="pagerank", normalized=True)
    _write(outdir, "pagerank.csv",
           tables.serialize_centrality(prv, g.labels, extras={"method": "oracle"}))
    return 0


def _oracle_vector(g, m):
    w = build_hyperlink_matrix(g)
    if g.n <= DENSE_ORACLE_LIMIT:
        return direct_ls_solve(build_regression_rows(w, m)).x
    return power_method(w, m, tol=1e-12).x


def cmd_pagerank(args):
    cfg = resolve_config(args)
    g = repair_dangling(parse_edge_list(Path(args.input).read_text()),
                        cfg["dangling"])
    m = cfg["damping"]
    outdir = cfg["output_dir"]
    oracle_x = _oracle_vector(g, m) if g.n <= DENSE_ORACLE_LIMIT else None

    kernel = surfer.build_transition_matrix(g, cfg["omega"])
    chain = surfer.SurferChain(matrix=kernel, omega=cfg["omega"], seed=cfg["seed"])

    mode = cfg["mode"]
    if mode == "dist":
        rows_diag = rows_from_graph(g, m, n_known=True)
        sim = simulator.run_simulation(
            g, m, chain, cfg["iterations"], trace_stride=cfg["trace_stride"],
            oracle_x=oracle_x, rows_diag=rows_diag)
        x = simulator.assemble_vector(sim.actors)
        trace_rows = sim.trace_rows
        sizes = {i: sim.size_estimates.get(i) for i in range(g.n)}
        size_lines = ["# kind=size_estimate"]
        for i in range(g.n):
            est = sizes[i]
            size_lines.append(
                f"{g.labels[i]},{'absent' if est is None else tables.format_value(est)}")
        _write(outdir, "size_estimates.csv", "\n".join(size_lines) + "\n")
        if sim.audit.violations(sim.actors):
            raise ConsistencyError("locality audit found non-neighbor accesses")
    elif mode in ("known-n", "unknown-n"):
        rows = rows_from_graph(g, m, n_known=(mode == "known-n"))
        res = engine.run(rows, chain, mode, cfg["iterations"],
                         trace_stride=cfg["trace_stride"], oracle_x=oracle_x,
                         residual_target=m / g.n)
        x = res.state.x
        trace_rows = res.trace_rows
    else:
        raise GraphFormatError(f"unknown mode {mode!r}")

    xv = CentralityVector(values=x, kind="pagerank", normalized=False)
    _write(outdir, "vector.csv",
           tables.serialize_centrality(xv, g.labels,
                                       extras={"mode": mode, "seed": cfg["seed"]}))
    _write(outdir, "trace.csv",
           "\n".join([engine.TRACE_HEADER] + trace_rows) + "\n")
    if oracle_x is not None:
        err = float(np.abs(x - oracle_x).max())
        ov = CentralityVector(values=oracle_x, kind="pagerank", normalized=True)
        _write(outdir, "oracle.csv",
               tables.serialize_centrality(
                   ov, g.labels,
                   extras={"method": "direct-ls", "final_error": f"{err:.3e}"}))
    return 0


def cmd_pagerank_temporal(args):
    cfg = resolve_config(args)
    seq = parse_temporal_edge_list(Path(args.input).read_text())
    m = cfg["damping"]
    outdir = cfg["output_dir"]
    graphs = [repair_dangling(g, cfg["dangling"]) for g in seq.graphs()]
    mats = [build_hyperlink_matrix(g) for g in graphs]
    kernels = surfer.build_transition_matrix_temporal(
        graphs, cfg["omega"], joint_window=cfg["joint_window"])
    chain = surfer.SurferChain(matrix=kernels[0], omega=cfg["omega"],
                               seed=cfg["seed"])
    pa = PersistentAverage(rho=cfg["rho"])
    res = engine.run_temporal(
        mats, kernels, chain, pa, m, cfg["iterations"], cfg["snapshot_stride"],
        trace_stride=cfg["trace_stride"])
    xv = CentralityVector(values=res.state.x, kind="pagerank", normalized=False)
    _write(outdir, "vector.csv",
           tables.serialize_centrality(
               xv, graphs[0].labels,
               extras={"mode": "temporal", "rho": cfg["rho"], "seed": cfg["seed"]}))
    _write(outdir, "trace.csv",
           "\n".join([engine.TRACE_HEADER] + res.trace_rows) + "\n")
    colsums = np.asarray(pa.wbar.sum(axis=0)).ravel()
    lines = ["# kind=wbar_column_sums"]
    lines += [f"{graphs[0].labels[j]},{tables.format_value(v)}"
              for j, v in enumerate(colsums)]
    _write(outdir, "wbar_colsums.csv", "\n".join(lines) + "\n")
    return 0


def cmd_oracle(args):
    cfg = resolve_config(args)
    g = repair_dangling(parse_edge_list(Path(args.input).read_text()),
                        cfg["dangling"])
    m = cfg["damping"]
    outdir = cfg["output_dir"]
    w = build_hyperlink_matrix(g)
    pm = power_method(w, m, tol=1e-13)
    if g.n > DENSE_ORACLE_LIMIT:
        raise GraphFormatError(
            f"dense LS oracle limited to n <= {DENSE_ORACLE_LIMIT}")
    ls = direct_ls_solve(build_regression_rows(w, m))
    gap = float(np.abs(ls.x - pm.x).max())
    if gap > cfg["oracle_tol"]:
        raise ConsistencyError(
            f"power method and LS solve disagree by {gap:.3e} "
            f"(> {cfg['oracle_tol']:.1e})")
    prv = CentralityVector(values=ls.x, kind="pagerank", normalized=True)
    _write(outdir, "pagerank.csv",
           tables.serialize_centrality(
               prv, g.labels,
               extras={"method": "direct-ls+power", "crosscheck": f"{gap:.3e}",
                       "tolerance": f"{cfg['oracle_tol']:.1e}"}))
    bet = _normalize_or_raw(brandes_betweenness(g))
    _write(outdir, "betweenness.csv",
           tables.serialize_centrality(bet, g.labels, extras={"method": "brandes"}))
    d = bfs_all_pairs(g)
    finite = np.where(np.isfinite(d), d, 0.0)
    reach_all = np.isfinite(d).all()
    vals = np.zeros(g.n)
    for i in range(g.n):
        if reach_all and g.n > 1:
            vals[i] = 1.0 / finite[i].sum()
        else:
            with np.errstate(divide="ignore"):
                recip = np.where(d[i] > 0, 1.0 / d[i], 0.0)
            vals[i] = recip[np.isfinite(recip)].sum()
    kind = "closeness" if reach_all else "harmonic-closeness"
    clo = normalize(CentralityVector(values=vals, kind=kind))
    _write(outdir, "closeness.csv",
           tables.serialize_centrality(clo, g.labels, extras={"method": "bfs"}))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="centrasim",
        description="Distributed centrality and incremental PageRank simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="edge-list input file")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--damping", type=float)
        p.add_argument("--omega", type=float)
        p.add_argument("--rho", type=float)
        p.add_argument("--iterations", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--mode", choices=["known-n", "unknown-n", "dist"])
        p.add_argument("--dangling", choices=["backlink", "uniform-column"])
        p.add_argument("--snapshot-stride", dest="snapshot_stride", type=int)
        p.add_argument("--joint-window", dest="joint_window", type=int)
        p.add_argument("--trace-stride", dest="trace_stride", type=int)
        p.add_argument("--output-dir", dest="output_dir")

    for name, fn in (("centrality", cmd_centrality),
                     ("pagerank", cmd_pagerank),
                     ("pagerank-temporal", cmd_pagerank_temporal),
                     ("oracle", cmd_oracle)):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=fn)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code 1
        raise SystemExit(0 if exc.code == 0 else 1)
    try:
        return args.func(args)
    except AssumptionError as exc:
        print(f"assumption violated: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except (GraphFormatError, RepairError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
