"""Least-squares form of PageRank plus the centralized verification oracles.

The regression row of node i is H_i = e_i - (1-m) * (row i of W): a one on
the diagonal and -(1-m)/outdeg(j) at every in-neighbor j. Solving the
stacked system H x = (m/n) 1 gives the PageRank exactly, and the solution
sums to one without any explicit normalization.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .levelsets import CentralityVector

DENSE_ORACLE_LIMIT = 10_000


@dataclass(frozen=True)
class RegressionRows:
    """Condensed sparse rows H_i, aligned index/coefficient arrays.

    idx[i][0] == i (diagonal), followed by the sorted in-neighbor columns.
    y is the common target m/n, or None when the network size is withheld
    (the unknown-size engine supplies its own running estimate).
    """

    n: int
    m: float
    idx: tuple[np.ndarray, ...]
    coef: tuple[np.ndarray, ...]
    y: float | None

    def matrix(self):
        """Stacked rows as a CSR matrix (diagnostics and direct solves)."""
        rows, cols, vals = [], [], []
        for i in range(self.n):
            rows.extend([i] * len(self.idx[i]))
            cols.extend(self.idx[i].tolist())
            vals.extend(self.coef[i].tolist())
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))


@dataclass(frozen=True)
class LsSolution:
    x: np.ndarray
    residual: float
    iterations: int = 0


def build_regression_rows(w, m, n_known=True):
    """Rows of I - (1-m)W from a column-stochastic W (scipy sparse)."""
    if not 0.0 < m < 1.0:
        raise ValueError(f"damping factor m={m} outside (0,1)")
    n = w.shape[0]
    wr = w.tocsr()
    idx = []
    coef = []
    for i in range(n):
        cols = wr.indices[wr.indptr[i]:wr.indptr[i + 1]]
        vals = wr.data[wr.indptr[i]:wr.indptr[i + 1]]
        order = np.argsort(cols)
        cols = cols[order]
        vals = vals[order]
        self_pos = np.searchsorted(cols, i)
        has_self = self_pos < len(cols) and cols[self_pos] == i
        if has_self:
            # No self-loops upstream, but uniform columns never hit the
            # diagonal either; guard anyway.
            row_idx = np.concatenate(([i], np.delete(cols, self_pos)))
            row_coef = np.concatenate(
                ([1.0 - (1.0 - m) * vals[self_pos]],
                 -(1.0 - m) * np.delete(vals, self_pos))
            )
        else:
            row_idx = np.concatenate(([i], cols))
            row_coef = np.concatenate(([1.0], -(1.0 - m) * vals))
        idx.append(row_idx.astype(np.int64))
        coef.append(row_coef.astype(np.float64))
    y = m / n if n_known else None
    return RegressionRows(n=n, m=m, idx=tuple(idx), coef=tuple(coef), y=y)


def rows_from_graph(g, m, n_known=True):
    """Build rows straight from adjacency, never touching a matrix.

    Equivalent to build_regression_rows(build_hyperlink_matrix(g), m); used
    by the engines so that each node's row depends only on its in-neighbor
    list and their out-degrees.
    """
    if not 0.0 < m < 1.0:
        raise ValueError(f"damping factor m={m} outside (0,1)")
    out_deg = [len(a) for a in g.out_adj]
    uniform = g.uniform_columns
    n = g.n
    idx = []
    coef = []
    for i in range(n):
        nbrs = sorted(set(g.in_adj[i]) | {j for j in uniform if j != i})
        vals = []
        for j in nbrs:
            if j in uniform:
                vals.append(-(1.0 - m) / (n - 1))
            else:
                vals.append(-(1.0 - m) / out_deg[j])
        idx.append(np.array([i] + nbrs, dtype=np.int64))
        coef.append(np.array([1.0] + vals, dtype=np.float64))
    y = m / n if n_known else None
    return RegressionRows(n=n, m=m, idx=tuple(idx), coef=tuple(coef), y=y)


def ls_objective(x, rows, y=None):
    """Sum of squared residuals of the stacked regression; zero at PageRank."""
    x = np.asarray(x, dtype=float)
    if x.shape != (rows.n,):
        raise ValueError(f"vector has shape {x.shape}, expected ({rows.n},)")
    if y is None:
        y = rows.y
    if y is None:
        raise ValueError("rows carry no target; pass y explicitly")
    h = rows.matrix()
    r = y - h @ x
    return float(r @ r)


def direct_ls_solve(rows, y=None):
    """Exact normal-equations solve at desk scale.

    The Gram matrix H^T H is positive definite for every valid hyperlink
    matrix; Cholesky doubles as the definiteness assertion.
    """
    if rows.n > DENSE_ORACLE_LIMIT:
        raise ValueError(f"dense oracle limited to n <= {DENSE_ORACLE_LIMIT}")
    if y is None:
        y = rows.y
    if y is None:
        raise ValueError("rows carry no target; pass y explicitly")
    h = rows.matrix().toarray()
    gram = h.T @ h
    try:
        cho = la.cho_factor(gram)
    except la.LinAlgError as exc:
        raise ValueError("Gram matrix is not positive definite") from exc
    rhs = h.T @ np.full(rows.n, y)
    x = la.cho_solve(cho, rhs)
    res = y - h @ x
    return LsSolution(x=x, residual=float(res @ res))


def power_method(w, m, tol=1e-12, max_iter=10_000):
    """Iterate the Google matrix from the uniform vector until the L1 step
    falls below tol. With m=0 the plain matrix is iterated with per-step
    renormalization (eigenvector centrality of a primitive matrix)."""
    n = w.shape[0]
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        if m == 0.0:
            x_new = w @ x
            s = np.abs(x_new).sum()
            if s == 0:
                raise RuntimeError("matrix annihilated the iterate")
            x_new = x_new / s
        else:
            if not 0.0 < m < 1.0:
                raise ValueError(f"damping factor m={m} outside [0,1)")
            x_new = (1.0 - m) * (w @ x) + (m / n) * x.sum()
        if np.abs(x_new - x).sum() < tol:
            return LsSolution(x=x_new, residual=float(np.abs(x_new - x).sum()),
                              iterations=it)
        x = x_new
    raise RuntimeError(f"power method did not converge in {max_iter} iterations")


def brandes_betweenness(g):
    """Exact betweenness over ordered pairs, unit edge lengths."""
    n = g.n
    bc = np.zeros(n)
    for s in range(n):
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1)
        dist[s] = 0
        preds = [[] for _ in range(n)]
        order = []
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for w_ in g.out_adj[v]:
                if dist[w_] < 0:
                    dist[w_] = dist[v] + 1
                    q.append(w_)
                if dist[w_] == dist[v] + 1:
                    sigma[w_] += sigma[v]
                    preds[w_].append(v)
        delta = np.zeros(n)
        for w_ in reversed(order):
            for v in preds[w_]:
                delta[v] += (sigma[v] / sigma[w_]) * (1.0 + delta[w_])
            if w_ != s:
                bc[w_] += delta[w_]
    return CentralityVector(values=bc, kind="betweenness")


def bfs_all_pairs(g):
    """Hop distances d[i, j]; inf where j is unreachable from i."""
    n = g.n
    d = np.full((n, n), np.inf)
    for s in range(n):
        d[s, s] = 0.0
        q = deque([s])
        while q:
            v = q.popleft()
            for w_ in g.out_adj[v]:
                if not np.isfinite(d[s, w_]):
                    d[s, w_] = d[s, v] + 1
                    q.append(w_)
    return d
