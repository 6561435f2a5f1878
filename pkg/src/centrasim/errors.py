"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Malformed edge-list input (bad line, self-loop, decreasing time)."""


class RepairError(ValueError):
    """A dangling node cannot be repaired under the chosen policy."""


class AssumptionError(ValueError):
    """A connectivity assumption required by the chosen mode is violated."""


class NotOrientedTreeError(ValueError):
    """Distributed betweenness was requested on a graph with an undirected cycle."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
