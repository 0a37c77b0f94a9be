"""Cost model and min-cost shared-computation graph over a window set.

Costs count events processed per period ``R`` (least common multiple of all
ranges) at a steady input rate of ``eta`` events per tick.  A window that
reads the raw stream pays ``n * eta * range`` per period, where ``n`` is its
per-period instance count; a window assembled from another window's partial
results pays only ``n * multiplier`` because each instance consumes that many
upstream rows instead of raw events.  The optimizer keeps, per window, the
single cheapest upstream; the result is a forest.

All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .aggregates import AggFunc, Sharing, sharing_semantics
from .windows import WindowSpec, as_window_set, covering_multiplier, covers, partitions

__all__ = [
    "MAX_PERIOD",
    "VIRTUAL_ROOT",
    "HolisticAggregateError",
    "CostContext",
    "cost_context",
    "recurrence_count",
    "CoverageGraph",
    "build_coverage_graph",
    "augment_with_root",
    "MinCostGraph",
    "min_cost_graph",
]

MAX_PERIOD = 2**63 - 1

#: Unit-tick tumbling window standing in for the raw stream when searching
#: for auxiliary windows above the forest roots.  Never costed or executed.
VIRTUAL_ROOT = WindowSpec(1, 1)


class HolisticAggregateError(ValueError):
    """The aggregate admits no sub-aggregate sharing; use the naive plan."""


def recurrence_count(w: WindowSpec, period: int) -> int:
    """Instances of ``w`` closing within one period: ``1 + (period - range)/slide``."""
    if period < w.range:
        raise ValueError(f"period {period} shorter than range of {w}")
    if (period - w.range) % w.slide != 0:
        raise ValueError(f"period {period} does not align with {w}")
    return 1 + (period - w.range) // w.slide


@dataclass(frozen=True)
class CostContext:
    """Shared cost-model quantities for one window set.

    ``period`` is the lcm of all ranges; ``multiplicity[w] = period / range``
    and ``recurrence[w]`` is the per-period instance count.
    """

    eta: int
    period: int
    multiplicity: dict[WindowSpec, int]
    recurrence: dict[WindowSpec, int]

    def naive_cost(self) -> int:
        """Total cost with every window reading the raw stream."""
        return sum(self.recurrence[w] * self.eta * w.range for w in self.recurrence)


def cost_context(windows, eta: int = 1) -> CostContext:
    ws = as_window_set(windows)
    if eta < 1:
        raise ValueError("eta must be a positive integer")
    period = 1
    for w in ws:
        period = math.lcm(period, w.range)
        if period > MAX_PERIOD:
            raise OverflowError(f"window period exceeds 63-bit range: lcm > {MAX_PERIOD}")
    mult = {w: period // w.range for w in ws}
    rec = {w: recurrence_count(w, period) for w in ws}
    return CostContext(eta=eta, period=period, multiplicity=mult, recurrence=rec)


@dataclass(frozen=True)
class CoverageGraph:
    """Directed graph with an edge (upstream, downstream) whenever the
    downstream window can be assembled from the upstream one under the
    given sharing rule."""

    sharing: Sharing
    nodes: tuple[WindowSpec, ...]
    edges: tuple[tuple[WindowSpec, WindowSpec], ...]

    def upstreams_of(self, w: WindowSpec) -> list[WindowSpec]:
        return [a for a, b in self.edges if b == w]

    def downstreams_of(self, w: WindowSpec) -> list[WindowSpec]:
        return [b for a, b in self.edges if a == w]


def _edge_predicate(sharing: Sharing):
    # edge (a, b) exists iff the downstream b relates to upstream a
    if sharing is Sharing.COVERED_BY:
        return covers
    if sharing is Sharing.PARTITIONED_BY:
        return partitions
    raise HolisticAggregateError("no sharing semantics for this aggregate")


def build_coverage_graph(windows, func: AggFunc) -> CoverageGraph:
    """All pairwise sharing edges for ``windows`` under ``func``'s rule."""
    ws = as_window_set(windows)
    sharing = sharing_semantics(func)
    pred = _edge_predicate(sharing)
    edges = [(a, b) for b in ws for a in ws if a != b and pred(b, a)]
    return CoverageGraph(sharing=sharing, nodes=ws, edges=tuple(edges))


def augment_with_root(graph: CoverageGraph) -> CoverageGraph:
    """Attach the unit-tick virtual root above every window nobody covers.

    If the window set already contains a unit-tick window it is the root
    already and the graph is returned unchanged.
    """
    if VIRTUAL_ROOT in graph.nodes:
        return graph
    covered = {b for _, b in graph.edges}
    new_edges = [(VIRTUAL_ROOT, w) for w in graph.nodes if w not in covered]
    return CoverageGraph(
        sharing=graph.sharing,
        nodes=(VIRTUAL_ROOT,) + graph.nodes,
        edges=tuple(new_edges) + graph.edges,
    )


@dataclass
class MinCostGraph:
    """A forest of windows with each node's chosen upstream and cost.

    ``upstream[w] is None`` means ``w`` reads the raw stream.  ``factors``
    marks auxiliary windows that were inserted by the optimizer and must not
    surface in query results; ``factor_benefit`` records the exact cost
    reduction each one was inserted for.
    """

    sharing: Sharing
    eta: int
    period: int
    nodes: tuple[WindowSpec, ...]
    upstream: dict[WindowSpec, WindowSpec | None]
    node_cost: dict[WindowSpec, int]
    naive_cost: int
    #: every feed option the cost pass chose from, as (upstream, downstream)
    edges: tuple[tuple[WindowSpec, WindowSpec], ...] = ()
    factors: frozenset[WindowSpec] = frozenset()
    factor_benefit: dict[WindowSpec, int] = field(default_factory=dict)

    @property
    def total_cost(self) -> int:
        return sum(self.node_cost.values())

    def children(self, w: WindowSpec | None) -> list[WindowSpec]:
        return [c for c in self.nodes if self.upstream[c] == w]

    def query_windows(self) -> list[WindowSpec]:
        return [w for w in self.nodes if w not in self.factors]


def _cost_pass(nodes, upstream_options, n_of, eta):
    """One revise-and-prune pass: per node keep the cheapest feed.

    ``upstream_options[w]`` lists candidate upstream windows (absence of a
    cheaper option leaves ``w`` on the raw stream).  Ties prefer the upstream
    over raw, then the larger (range, slide); option order breaks exact ties.
    """
    upstream: dict[WindowSpec, WindowSpec | None] = {}
    cost: dict[WindowSpec, int] = {}
    for w in nodes:
        n = n_of(w)
        best_cost = n * eta * w.range
        best_up: WindowSpec | None = None
        for up in upstream_options.get(w, ()):
            c = n * covering_multiplier(w, up)
            if c < best_cost or (
                c == best_cost
                and (best_up is None or (up.range, up.slide) > (best_up.range, best_up.slide))
            ):
                best_cost, best_up = c, up
        upstream[w] = best_up
        cost[w] = best_cost
    return upstream, cost


def min_cost_graph(windows, func: AggFunc, eta: int = 1) -> MinCostGraph:
    """Keep, for every window, the single cheapest upstream (or the raw stream).

    Per-node cost starts at ``n * eta * range`` and is revised over every
    incoming sharing edge to ``n * multiplier``; all non-minimal edges drop
    out, so the result is a forest.
    """
    graph = build_coverage_graph(windows, func)
    ctx = cost_context(graph.nodes, eta)
    options = {w: graph.upstreams_of(w) for w in graph.nodes}
    upstream, cost = _cost_pass(graph.nodes, options, lambda w: ctx.recurrence[w], eta)
    return MinCostGraph(
        sharing=graph.sharing,
        eta=eta,
        period=ctx.period,
        nodes=graph.nodes,
        upstream=upstream,
        node_cost=cost,
        naive_cost=ctx.naive_cost(),
        edges=graph.edges,
    )
