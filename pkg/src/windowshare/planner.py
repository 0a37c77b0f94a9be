"""Executable dataflow plans: construction from a min-cost forest, validation,
and the JSON document format.

A plan is a DAG of one source, window-aggregate operators, multicast fan-outs,
one union and one sink.  Aggregate operators fed by another aggregate consume
its partial results; every query window's rows reach the sink, auxiliary
(factor) windows feed only their downstream aggregates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .aggregates import AggFunc, Sharing, sharing_semantics
from .optimizer import MinCostGraph, cost_context
from .windows import WindowSpec, as_window_set

__all__ = [
    "SOURCE",
    "WINDOW_AGG",
    "MULTICAST",
    "UNION",
    "SINK",
    "PlanValidationError",
    "PlanNode",
    "PlanDag",
    "naive_plan",
    "rewrite",
    "serialize",
    "deserialize",
]

SOURCE = "source"
WINDOW_AGG = "window_agg"
MULTICAST = "multicast"
UNION = "union"
SINK = "sink"

_KINDS = {SOURCE, WINDOW_AGG, MULTICAST, UNION, SINK}


class PlanValidationError(ValueError):
    """A plan document or structure violates the plan invariants."""


@dataclass(frozen=True)
class PlanNode:
    id: int
    kind: str
    window: WindowSpec | None = None
    is_factor: bool = False


@dataclass
class PlanDag:
    func: AggFunc
    sharing: Sharing
    eta: int
    model_cost: int
    nodes: list[PlanNode]
    edges: list[tuple[int, int]]

    def node(self, node_id: int) -> PlanNode:
        return self._by_id[node_id]

    @property
    def _by_id(self) -> dict[int, PlanNode]:
        return {n.id: n for n in self.nodes}

    def inputs_of(self, node_id: int) -> list[int]:
        return [a for a, b in self.edges if b == node_id]

    def outputs_of(self, node_id: int) -> list[int]:
        return [b for a, b in self.edges if a == node_id]

    def window_nodes(self) -> list[PlanNode]:
        return [n for n in self.nodes if n.kind == WINDOW_AGG]

    def validate(self) -> None:
        _validate(self)


class _Builder:
    def __init__(self, func, sharing, eta, model_cost):
        self.plan = PlanDag(func=func, sharing=sharing, eta=eta,
                            model_cost=model_cost, nodes=[], edges=[])

    def add(self, kind, window=None, is_factor=False) -> int:
        node = PlanNode(id=len(self.plan.nodes), kind=kind, window=window, is_factor=is_factor)
        self.plan.nodes.append(node)
        return node.id

    def link(self, a: int, b: int) -> None:
        self.plan.edges.append((a, b))


def naive_plan(windows, func: AggFunc, eta: int = 1) -> PlanDag:
    """One aggregate per window, all reading the raw stream.

    Source -> Multicast -> per-window aggregate -> Union -> Sink; the
    multicast and union collapse away for a single window.
    """
    ws = as_window_set(windows)
    func = AggFunc(func)
    ctx = cost_context(ws, eta)
    b = _Builder(func, sharing_semantics(func), eta, ctx.naive_cost())
    source = b.add(SOURCE)
    if len(ws) == 1:
        agg = b.add(WINDOW_AGG, window=ws[0])
        sink = b.add(SINK)
        b.link(source, agg)
        b.link(agg, sink)
        b.plan.validate()
        return b.plan
    mcast = b.add(MULTICAST)
    b.link(source, mcast)
    aggs = []
    for w in ws:
        agg = b.add(WINDOW_AGG, window=w)
        b.link(mcast, agg)
        aggs.append(agg)
    union = b.add(UNION)
    for agg in aggs:
        b.link(agg, union)
    sink = b.add(SINK)
    b.link(union, sink)
    b.plan.validate()
    return b.plan


def rewrite(graph: MinCostGraph, func: AggFunc) -> PlanDag:
    """Turn a min-cost forest into an executable plan.

    Roots read the source (through a multicast when there are several); every
    node that feeds others gets a multicast over its output, wired to its
    children and, unless the node is a factor, to the union; childless
    non-factor nodes link straight to the union.
    """
    func = AggFunc(func)
    if not graph.nodes:
        raise PlanValidationError("empty graph")
    b = _Builder(func, graph.sharing, graph.eta, graph.total_cost)
    source = b.add(SOURCE)

    agg_id: dict[WindowSpec, int] = {}
    for w in graph.nodes:
        agg_id[w] = b.add(WINDOW_AGG, window=w, is_factor=w in graph.factors)

    roots = [w for w in graph.nodes if graph.upstream[w] is None]
    if not roots:
        raise PlanValidationError("graph has no raw-fed root; not a forest")
    if len(roots) == 1:
        b.link(source, agg_id[roots[0]])
    else:
        mcast = b.add(MULTICAST)
        b.link(source, mcast)
        for w in roots:
            b.link(mcast, agg_id[w])

    # single-window graph degenerates to the naive singleton shape
    if len(graph.nodes) == 1:
        sink = b.add(SINK)
        b.link(agg_id[graph.nodes[0]], sink)
        b.plan.validate()
        return b.plan

    union = b.add(UNION)
    for w in graph.nodes:
        kids = graph.children(w)
        if kids:
            mcast = b.add(MULTICAST)
            b.link(agg_id[w], mcast)
            if w not in graph.factors:
                b.link(mcast, union)
            for kid in kids:
                b.link(mcast, agg_id[kid])
        elif w not in graph.factors:
            b.link(agg_id[w], union)
    sink = b.add(SINK)
    b.link(union, sink)
    b.plan.validate()
    return b.plan


def _validate(plan: PlanDag) -> None:
    by_id = {}
    for n in plan.nodes:
        if n.kind not in _KINDS:
            raise PlanValidationError(f"node {n.id}: unknown kind {n.kind!r}")
        if n.id in by_id:
            raise PlanValidationError(f"duplicate node id {n.id}")
        if n.kind == WINDOW_AGG and n.window is None:
            raise PlanValidationError(f"node {n.id}: window_agg without a window")
        if n.kind != WINDOW_AGG and n.window is not None:
            raise PlanValidationError(f"node {n.id}: only window_agg nodes carry a window")
        by_id[n.id] = n

    sources = [n for n in plan.nodes if n.kind == SOURCE]
    sinks = [n for n in plan.nodes if n.kind == SINK]
    if len(sources) != 1 or len(sinks) != 1:
        raise PlanValidationError("plan needs exactly one source and one sink")

    outs: dict[int, list[int]] = {n.id: [] for n in plan.nodes}
    ins: dict[int, list[int]] = {n.id: [] for n in plan.nodes}
    for a, b in plan.edges:
        if a not in by_id or b not in by_id:
            raise PlanValidationError(f"edge ({a}, {b}) references a missing node")
        outs[a].append(b)
        ins[b].append(a)

    for n in plan.nodes:
        if n.kind == WINDOW_AGG and len(ins[n.id]) != 1:
            raise PlanValidationError(f"node {n.id}: window_agg needs exactly one input")
        if n.kind == SOURCE and ins[n.id]:
            raise PlanValidationError(f"node {n.id}: source cannot have inputs")
        if n.kind == SINK and outs[n.id]:
            raise PlanValidationError(f"node {n.id}: sink cannot have outputs")

    # cycle check via depth-first search
    state: dict[int, int] = {}

    def visit(u: int):
        state[u] = 1
        for v in outs[u]:
            if state.get(v) == 1:
                raise PlanValidationError(f"plan contains a cycle through node {v}")
            if state.get(v, 0) == 0:
                visit(v)
        state[u] = 2

    for n in plan.nodes:
        if state.get(n.id, 0) == 0:
            visit(n.id)

    union_ids = {n.id for n in plan.nodes if n.kind == UNION}
    sink_id = sinks[0].id
    for u in union_ids:
        if outs[u] != [sink_id]:
            raise PlanValidationError(f"node {u}: union must feed the sink only")

    # factor outputs may reach the sink only through downstream aggregates
    for n in plan.nodes:
        if n.kind != WINDOW_AGG:
            continue
        targets = list(outs[n.id])
        via_mcast = [v for t in targets if by_id[t].kind == MULTICAST for v in outs[t]]
        direct = [t for t in targets if by_id[t].kind != MULTICAST] + via_mcast
        feeds_union = any(by_id[t].kind in (UNION, SINK) for t in direct)
        if n.is_factor and feeds_union:
            raise PlanValidationError(f"node {n.id}: factor window routed to the union")
        if not n.is_factor and not feeds_union:
            raise PlanValidationError(f"node {n.id}: query window never reaches the sink")


_SCHEMA_FIELDS = {"func", "semantics", "eta", "model_cost", "nodes", "edges"}


def serialize(plan: PlanDag) -> str:
    """Plan document: stable field names, one JSON object."""
    doc = {
        "func": plan.func.value,
        "semantics": plan.sharing.value,
        "eta": plan.eta,
        "model_cost": plan.model_cost,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                **(
                    {"range": n.window.range, "slide": n.window.slide, "is_factor": n.is_factor}
                    if n.kind == WINDOW_AGG
                    else {}
                ),
            }
            for n in plan.nodes
        ],
        "edges": [[a, b] for a, b in plan.edges],
    }
    return json.dumps(doc, indent=2)


def deserialize(text: str) -> PlanDag:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PlanValidationError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict) or not _SCHEMA_FIELDS.issubset(doc):
        missing = _SCHEMA_FIELDS - set(doc) if isinstance(doc, dict) else _SCHEMA_FIELDS
        raise PlanValidationError(f"plan document missing fields: {sorted(missing)}")
    try:
        func = AggFunc(doc["func"])
        sharing = Sharing(doc["semantics"])
    except ValueError as e:
        raise PlanValidationError(str(e)) from e
    nodes = []
    for raw in doc["nodes"]:
        if not isinstance(raw, dict) or "id" not in raw or "kind" not in raw:
            raise PlanValidationError(f"malformed node entry: {raw!r}")
        window = None
        if raw["kind"] == WINDOW_AGG:
            try:
                window = WindowSpec(raw["range"], raw["slide"])
            except (KeyError, TypeError, ValueError) as e:
                raise PlanValidationError(f"node {raw['id']}: bad window: {e}") from e
        nodes.append(
            PlanNode(
                id=raw["id"],
                kind=raw["kind"],
                window=window,
                is_factor=bool(raw.get("is_factor", False)),
            )
        )
    edges = []
    for raw in doc["edges"]:
        if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
            raise PlanValidationError(f"malformed edge entry: {raw!r}")
        edges.append((int(raw[0]), int(raw[1])))
    plan = PlanDag(
        func=func,
        sharing=sharing,
        eta=int(doc["eta"]),
        model_cost=int(doc["model_cost"]),
        nodes=nodes,
        edges=edges,
    )
    plan.validate()
    return plan
