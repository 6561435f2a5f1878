"""Node-actor realization of the unknown-size PageRank iteration.

Each page owns its own importance value and a condensed row over its
in-neighbors. An activation pulls the neighbors' current values, applies
the same projection the centralized engine would, and pushes the changed
values back; the activation token carries the global counter so nobody
needs a clock. Every read and write is logged so tests can prove that an
activation of s touches nothing outside s and its in-neighbors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import format_trace_row
from .oracles import ls_objective


@dataclass
class NodeActor:
    id: int
    in_nbrs: np.ndarray        # sorted in-neighbor ids
    coef: np.ndarray           # condensed row: [self] + in-neighbor coefficients
    m: float
    own_value: float = 0.0
    visit_count: int = 0
    neighbor_values: dict = field(default_factory=dict)


@dataclass
class ActivationToken:
    k: int = 0


@dataclass
class LocalityAudit:
    """(k, actor, touched) triples; reporting reads are logged separately."""

    events: list = field(default_factory=list)

    def record(self, k, s, reads, writes):
        self.events.append((k, s, tuple(reads), tuple(writes)))

    def violations(self, actors):
        bad = []
        for (k, s, reads, writes) in self.events:
            allowed = set(actors[s].in_nbrs.tolist()) | {s}
            touched = set(reads) | set(writes)
            if not touched <= allowed:
                bad.append((k, s, sorted(touched - allowed)))
        return bad


def init_nodes(g, m):
    """One actor per page; each row built from its own in-neighbor list."""
    from .oracles import rows_from_graph

    rows = rows_from_graph(g, m, n_known=False)
    actors = []
    for i in range(g.n):
        nbrs = rows.idx[i][1:]
        actors.append(NodeActor(id=i, in_nbrs=nbrs, coef=rows.coef[i], m=m))
    return actors


def activate(actors, token, s, audit=None):
    """Run one activation of actor s; returns the new stepsize alpha."""
    actor = actors[s]
    nbrs = actor.in_nbrs
    # pull phase: every in-neighbor sends its current value
    pulled = np.empty(len(nbrs) + 1)
    pulled[0] = actor.own_value
    for pos, j in enumerate(nbrs):
        actor.neighbor_values[int(j)] = actors[j].own_value
        pulled[pos + 1] = actors[j].own_value
    actor.visit_count += 1
    alpha = actor.visit_count / (token.k + 1)
    y_hat = actor.m * alpha
    r = y_hat - actor.coef @ pulled
    updated = pulled + alpha * actor.coef * r
    # push phase: changed values return to their owners
    actor.own_value = updated[0]
    for pos, j in enumerate(nbrs):
        actors[j].own_value = updated[pos + 1]
    if audit is not None:
        audit.record(token.k, s, nbrs.tolist(), [s] + nbrs.tolist())
    token.k += 1
    return alpha


def estimate_network_size(actor, token_k):
    """Inverse visit frequency as seen at the actor's latest activation."""
    if actor.visit_count == 0:
        return None
    return (token_k + 1) / actor.visit_count


def assemble_vector(actors):
    """Global vector, reporting convenience only (not part of the protocol)."""
    return np.array([a.own_value for a in actors])


@dataclass
class SimulationRun:
    actors: list
    token: ActivationToken
    trace_rows: list
    audit: LocalityAudit
    size_estimates: dict


def run_simulation(g, m, chain, budget, trace_stride=100, oracle_x=None,
                   rows_diag=None):
    """Token-passing loop over the surfer's activation sequence.

    Emits the same trace format as the centralized engine; with identical
    graph, seed and schedule the traces are bit-identical.
    """
    actors = init_nodes(g, m)
    token = ActivationToken()
    audit = LocalityAudit()
    trace_rows = []
    last_estimate = {}
    for _ in range(budget):
        s = chain.sample_next()
        alpha = activate(actors, token, s, audit=audit)
        last_estimate[s] = estimate_network_size(actors[s], token.k - 1)
        if token.k % trace_stride == 0:
            x = assemble_vector(actors)
            err = (float(np.abs(x - oracle_x).max())
                   if oracle_x is not None else None)
            res = (ls_objective(x, rows_diag)
                   if rows_diag is not None else None)
            trace_rows.append(format_trace_row(token.k, err, res, 1.0 / alpha, s))
    return SimulationRun(actors=actors, token=token, trace_rows=trace_rows,
                         audit=audit, size_estimates=last_estimate)
