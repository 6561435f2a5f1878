"""Randomized incremental (Kaczmarz-style) PageRank engine.

One activation updates only the activated node and its in-neighbors:

    known size:    x += (1/n) * H_s^T (m/n - H_s x)
    unknown size:  x += a    * H_s^T (m*a - H_s x),  a = visits[s]/(k+1)

starting from x(0) = 0. The unknown-size form never reads the network
size anywhere; the visit-frequency stepsize converges to 1/n on its own,
and its inverse doubles as a per-node network-size estimate.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .oracles import ls_objective

TRACE_HEADER = "k,error,residual,alpha_inv,active_node"


def format_trace_row(k, error, residual, alpha_inv, node):
    def fmt(v):
        return "nan" if v is None or not np.isfinite(v) else f"{v:.11e}"

    return f"{k},{fmt(error)},{fmt(residual)},{fmt(alpha_inv)},{node}"


@dataclass
class KaczmarzState:
    """Mutable solver state; owned by exactly one execution stream."""

    x: np.ndarray
    mode: str
    visits: np.ndarray
    k: int = 0
    trace: list = field(default_factory=list)

    @staticmethod
    def fresh(n, mode):
        if mode not in ("known-n", "unknown-n", "temporal"):
            raise ValueError(f"unknown mode {mode!r}")
        return KaczmarzState(
            x=np.zeros(n), mode=mode, visits=np.zeros(n, dtype=np.int64)
        )


def step_known_n(state, s, rows):
    """One Kaczmarz projection with the exact 1/n stepsize and m/n target."""
    idx = rows.idx[s]
    coef = rows.coef[s]
    r = rows.y - coef @ state.x[idx]
    state.x[idx] += (1.0 / rows.n) * coef * r
    state.visits[s] += 1
    state.k += 1
    return state


def alpha_update(state, s):
    """Activate s: bump its visit counter, return visits[s]/(k+1)."""
    state.visits[s] += 1
    return state.visits[s] / (state.k + 1)


def step_unknown_n(state, s, rows):
    """Projection with the visit-frequency stepsize; reads no global size."""
    alpha = alpha_update(state, s)
    idx = rows.idx[s]
    coef = rows.coef[s]
    r = rows.m * alpha - coef @ state.x[idx]
    state.x[idx] += alpha * coef * r
    state.k += 1
    return state, alpha


def temporal_row(pa_rows, s, m):
    """H-bar row s built on the fly from the current persistent average."""
    lo, hi = pa_rows.indptr[s], pa_rows.indptr[s + 1]
    cols = pa_rows.indices[lo:hi]
    vals = pa_rows.data[lo:hi]
    keep = cols != s
    idx = np.concatenate(([s], cols[keep])).astype(np.int64)
    coef = np.concatenate(([1.0], -(1.0 - m) * vals[keep]))
    return idx, coef


def step_temporal(state, s, pa_rows, m, y=None):
    """Projection against the persistent-average row of s.

    y=None uses the unknown-size target m*alpha; passing m/n runs the
    known-size target instead.
    """
    alpha = alpha_update(state, s)
    idx, coef = temporal_row(pa_rows, s, m)
    target = m * alpha if y is None else y
    r = target - coef @ state.x[idx]
    state.x[idx] += alpha * coef * r
    state.k += 1
    return state, alpha


@dataclass
class EngineRun:
    state: KaczmarzState
    trace_rows: list
    steps_used: int


def run(rows, chain, mode, budget, trace_stride=100, oracle_x=None,
        stop_error=None, residual_target=None):
    """Drive sampling plus stepping for `budget` activations.

    A trace row is recorded every `trace_stride` steps: error against the
    oracle vector (when given), the stacked-residual diagnostic (when a
    target is known), the inverse stepsize and the active node. With
    stop_error set, the run ends early at the first traced step whose
    oracle error is below it.
    """
    state = KaczmarzState.fresh(rows.n, mode)
    trace_rows = []
    y_diag = residual_target if residual_target is not None else rows.y
    for _ in range(budget):
        s = chain.sample_next()
        if mode == "known-n":
            step_known_n(state, s, rows)
            alpha_inv = float(rows.n)
        else:
            _, alpha = step_unknown_n(state, s, rows)
            alpha_inv = 1.0 / alpha
        if state.k % trace_stride == 0:
            err = (float(np.abs(state.x - oracle_x).max())
                   if oracle_x is not None else None)
            res = (ls_objective(state.x, rows, y=y_diag)
                   if y_diag is not None else None)
            trace_rows.append(format_trace_row(state.k, err, res, alpha_inv, s))
            if stop_error is not None and err is not None and err < stop_error:
                break
    return EngineRun(state=state, trace_rows=trace_rows, steps_used=state.k)


def run_temporal(snapshot_mats, kernels, chain, pa, m, budget, snapshot_stride,
                 trace_stride=100, oracle_x=None, y=None, rows_diag=None):
    """Temporal loop: advance one snapshot every snapshot_stride steps.

    snapshot_mats[t] is the hyperlink matrix of snapshot t; kernels[t] the
    matching surfer kernel (chain starts on kernels[0]). The persistent
    average ingests a snapshot the moment the schedule enters it, before
    any step taken inside it. Past the last snapshot the final one stays
    active.
    """
    n = snapshot_mats[0].shape[0]
    state = KaczmarzState.fresh(n, "temporal")
    trace_rows = []
    pa.update(snapshot_mats[0])
    pa_rows = pa.wbar_rows()
    active = 0
    for step in range(budget):
        want = min(step // snapshot_stride, len(snapshot_mats) - 1)
        while active < want:
            active += 1
            pa.update(snapshot_mats[active])
            pa_rows = pa.wbar_rows()
            chain.set_matrix(kernels[active])
        s = chain.sample_next()
        _, alpha = step_temporal(state, s, pa_rows, m, y=y)
        if state.k % trace_stride == 0:
            err = (float(np.abs(state.x - oracle_x).max())
                   if oracle_x is not None else None)
            res = (ls_objective(state.x, rows_diag)
                   if rows_diag is not None else None)
            trace_rows.append(format_trace_row(state.k, err, res, 1.0 / alpha, s))
    return EngineRun(state=state, trace_rows=trace_rows, steps_used=state.k)
