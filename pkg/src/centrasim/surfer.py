"""Random-surfer chain driving the incremental PageRank updates.

The walk lives on the symmetrized communication graph: two pages that
exchange importance values can be walked in both directions, which is also
what makes the Metropolis-Hastings weights doubly stochastic. The hop
weight to a neighbor is min{1/(deg_i+1), 1/(deg_j+1)} with the leftover
mass kept on the diagonal, and an omega-weighted uniform restart is mixed
on top.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import AssumptionError
from .graph import DirectedGraph, is_strongly_connected, symmetrize


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-indexed sparse transition kernel of the pure (omega=0) chain."""

    n: int
    nbr: tuple[tuple[int, ...], ...]       # neighbor targets per row
    prob: tuple[tuple[float, ...], ...]    # matching hop probabilities
    self_prob: tuple[float, ...]           # diagonal remainder

    def dense(self):
        p = np.zeros((self.n, self.n))
        for i in range(self.n):
            p[i, list(self.nbr[i])] = self.prob[i]
            p[i, i] = self.self_prob[i]
        return p

    def cumulative_rows(self):
        """Per-row (targets, cumulative weights) with the self-loop last."""
        rows = []
        for i in range(self.n):
            targets = list(self.nbr[i]) + [i]
            cum = []
            acc = 0.0
            for p in list(self.prob[i]) + [self.self_prob[i]]:
                acc += p
                cum.append(acc)
            cum[-1] = 1.0
            rows.append((targets, cum))
        return rows


def _metropolis_hastings(sym):
    deg = [len(sym.out_adj[i]) for i in range(sym.n)]
    nbr, prob, self_prob = [], [], []
    for i in range(sym.n):
        ps = [min(1.0 / (deg[i] + 1), 1.0 / (deg[j] + 1)) for j in sym.out_adj[i]]
        nbr.append(tuple(sym.out_adj[i]))
        prob.append(tuple(ps))
        self_prob.append(1.0 - sum(ps))
    return TransitionMatrix(n=sym.n, nbr=tuple(nbr), prob=tuple(prob),
                            self_prob=tuple(self_prob))


def build_transition_matrix(g, omega):
    """Static chain kernel; omega=0 requires a connected communication graph."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega={omega} outside [0,1]")
    sym = symmetrize(g)
    if omega == 0.0 and not is_strongly_connected(sym):
        raise AssumptionError(
            "communication graph is not connected; the omega=0 walk "
            "cannot reach every page (strong connectivity assumption)"
        )
    return _metropolis_hastings(sym)


def build_transition_matrix_temporal(graphs, omega, joint_window=None):
    """Per-snapshot kernels; omega=0 additionally needs every window of
    joint_window consecutive snapshots to have a connected union."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega={omega} outside [0,1]")
    if omega == 0.0:
        if joint_window is None or joint_window < 1:
            raise ValueError("omega=0 temporal runs need a joint window Q >= 1")
        check_joint_connectivity(graphs, joint_window)
    return [_metropolis_hastings(symmetrize(g)) for g in graphs]


def check_joint_connectivity(graphs, q):
    """Union of each q-long window of snapshots must be strongly connected
    once symmetrized (the surfer walks the communication edges)."""
    n = graphs[0].n
    for start in range(0, max(1, len(graphs) - q + 1)):
        window = graphs[start:start + q]
        edges = set()
        for g in window:
            edges |= set(g.edges)
        joint = symmetrize(DirectedGraph.from_edges(n, edges, labels=graphs[0].labels))
        if not is_strongly_connected(joint):
            raise AssumptionError(
                f"joint graph of snapshots [{start}, {start + len(window)}) is "
                f"not strongly connected (joint connectivity, window {q})"
            )


@dataclass
class SurferChain:
    """Seeded Markov sampler producing the activation sequence s(k).

    Single-owner, stateful: sample_next advances the walk. The kernel part
    is immutable and may be shared between replications.
    """

    matrix: TransitionMatrix
    omega: float
    seed: int
    start: int = 0
    current: int = field(init=False)
    step_count: int = field(init=False, default=0)

    def __post_init__(self):
        self.current = self.start
        self._rng = np.random.default_rng(self.seed)
        self._rows = self.matrix.cumulative_rows()

    @property
    def n(self):
        return self.matrix.n

    def set_matrix(self, matrix):
        """Swap kernels mid-walk (temporal snapshots); state carries over."""
        self.matrix = matrix
        self._rows = matrix.cumulative_rows()

    def sample_next(self):
        u = self._rng.random()
        if self.omega > 0.0 and u < self.omega:
            nxt = int(self._rng.random() * self.n)
            if nxt == self.n:  # guard the open-interval edge
                nxt = self.n - 1
        else:
            targets, cum = self._rows[self.current]
            nxt = targets[bisect_right(cum, self._rng.random())]
        self.current = nxt
        self.step_count += 1
        return nxt


def empirical_stationary(chain, steps):
    """Visit-frequency histogram over the next `steps` samples."""
    counts = np.zeros(chain.n)
    for _ in range(steps):
        counts[chain.sample_next()] += 1
    return counts / steps
