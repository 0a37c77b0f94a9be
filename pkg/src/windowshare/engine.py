"""Single-core execution of plans over time-ordered event streams.

Each window-aggregate operator materializes one partial-result row per
(instance, key); an instance fires only when it closes by the run horizon.
Operators fed by another aggregate consume exactly the upstream rows whose
intervals are contained in their own instance (the covering set), so query
results match per-window evaluation while the counters bill one unit per
record-to-instance charge: raw events count once per instance they land in,
partial rows once per instance that consumes them.  That makes the summed
window-operator input counters directly comparable to the optimizer's
per-period cost model.

Interval reductions run phase-by-phase: the instances of a window split into
``range/slide`` families of non-overlapping instances, and each family is a
single vectorized segmented reduction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .aggregates import AggFunc
from .planner import MULTICAST, SINK, SOURCE, UNION, WINDOW_AGG, PlanDag
from .streams import EventStream, coerce_stream
from .windows import WindowSpec, as_window_set

__all__ = [
    "EngineError",
    "StreamOrderError",
    "ResultRow",
    "ResultSet",
    "OperatorStats",
    "RunMetrics",
    "run",
    "naive_eval",
    "diff_results",
]


class EngineError(RuntimeError):
    pass


class StreamOrderError(ValueError):
    """Events arrived with decreasing timestamps."""


@dataclass(frozen=True)
class ResultRow:
    window: WindowSpec
    start: int
    end: int
    key: str
    value: float


class ResultSet:
    """Finalized rows, columnar, grouped per window in emission order."""

    def __init__(self, key_table: tuple[str, ...]):
        self.key_table = tuple(key_table)
        self._blocks: list[tuple[WindowSpec, np.ndarray, np.ndarray, np.ndarray]] = []

    def add_block(self, window: WindowSpec, ends, key_codes, values) -> None:
        self._blocks.append(
            (
                window,
                np.asarray(ends, dtype=np.int64),
                np.asarray(key_codes, dtype=np.int64),
                np.asarray(values, dtype=np.float64),
            )
        )

    def __len__(self) -> int:
        return sum(len(ends) for _, ends, _, _ in self._blocks)

    def windows(self) -> list[WindowSpec]:
        return [w for w, _, _, _ in self._blocks]

    def rows(self):
        for w, ends, keys, values in self._blocks:
            for e, k, v in zip(ends, keys, values):
                yield ResultRow(w, int(e) - w.range, int(e), self.key_table[k], float(v))

    def to_dict(self) -> dict[tuple[str, int, int, str], float]:
        """(window label, start, end, key) -> value; one row per instance/key."""
        out = {}
        for r in self.rows():
            out[(r.window.label, r.start, r.end, r.key)] = r.value
        return out


def diff_results(expected: ResultSet, actual: ResultSet, avg_tol: float = 0.0) -> str | None:
    """First difference between two result multisets, or None when equal.

    Values compare exactly unless ``avg_tol`` is positive.
    """
    exp, act = expected.to_dict(), actual.to_dict()
    for key in sorted(exp.keys() | act.keys()):
        if key not in act:
            return f"missing row {key} = {exp[key]!r}"
        if key not in exp:
            return f"extra row {key} = {act[key]!r}"
        ve, va = exp[key], act[key]
        if ve != va and abs(ve - va) > avg_tol:
            return f"row {key}: expected {ve!r}, got {va!r}"
    return None


@dataclass
class OperatorStats:
    kind: str
    input_count: int = 0
    output_count: int = 0


@dataclass
class RunMetrics:
    operators: dict[int, OperatorStats]
    input_events: int
    wall_seconds: float

    @property
    def throughput(self) -> float:
        return self.input_events / self.wall_seconds if self.wall_seconds > 0 else 0.0

    def window_input_total(self) -> int:
        return sum(
            s.input_count for s in self.operators.values() if s.kind == WINDOW_AGG
        )


# ---------------------------------------------------------------------------
# segmented window reduction


class _AggTable:
    """Partial results of one window operator: one row per (instance, key),
    sorted by (instance end, key).  ``final`` marks already-finalized values
    (holistic path)."""

    def __init__(self, window, func, ends, keys, payload, final=False):
        self.window = window
        self.func = func
        self.ends = ends
        self.keys = keys
        self.payload = payload  # dict of parallel arrays
        self.final = final

    def __len__(self):
        return len(self.ends)


def _group_sorted(seg, keys, n_keys):
    """Sort charge rows by (segment, key) and return group boundaries.

    ``seg`` is nondecreasing by construction, so with a single key no sort is
    needed (``order`` is None then).
    """
    if n_keys <= 1:
        starts = np.concatenate(([0], np.flatnonzero(np.diff(seg)) + 1))
        return None, starts
    combo = seg * np.int64(n_keys) + keys
    order = np.argsort(combo, kind="stable")
    combo = combo[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(combo)) + 1))
    return order, starts


def _concat_ranges(lo, hi):
    counts = hi - lo
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), 0
    reps = np.repeat(np.arange(len(lo)), counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(
        np.concatenate(([0], np.cumsum(counts)[:-1])), counts
    )
    sel = lo[reps] + offsets
    return sel, reps, total


def _reduce_phase(func, from_raw, values, counts_in, sums_in, starts):
    """Per-group payload reduction; ``starts`` are group boundaries."""
    if func in (AggFunc.MIN, AggFunc.MAX):
        op = np.minimum if func is AggFunc.MIN else np.maximum
        return {"v": op.reduceat(values, starts)}
    if func is AggFunc.SUM:
        return {"v": np.add.reduceat(values, starts)}
    if func is AggFunc.COUNT:
        if from_raw:
            sizes = np.diff(np.append(starts, len(values)))
            return {"c": sizes.astype(np.int64)}
        return {"c": np.add.reduceat(counts_in, starts)}
    if func is AggFunc.AVG:
        if from_raw:
            sizes = np.diff(np.append(starts, len(values)))
            return {"s": np.add.reduceat(values, starts), "c": sizes.astype(np.int64)}
        return {"s": np.add.reduceat(sums_in, starts), "c": np.add.reduceat(counts_in, starts)}
    if func is AggFunc.MEDIAN:
        bounds = np.append(starts, len(values))
        med = np.empty(len(starts), dtype=np.float64)
        for i in range(len(starts)):
            med[i] = np.median(values[bounds[i] : bounds[i + 1]])
        return {"v": med}
    raise EngineError(f"unsupported aggregate {func}")


def _window_pass(window, func, source, horizon, n_keys):
    """Evaluate one window operator over raw events or an upstream table.

    Returns (_AggTable, charge count).  ``source`` is an EventStream or an
    _AggTable; upstream rows are matched by interval containment, raw events
    by membership.
    """
    from_raw = isinstance(source, EventStream)
    if from_raw:
        pos = source.ts
        keys_in = source.key_codes
        values = source.values
        counts_in = sums_in = None
    else:
        if source.final:
            raise EngineError("cannot consume finalized holistic results")
        pos = source.ends
        keys_in = source.keys
        values = source.payload.get("v")
        counts_in = source.payload.get("c")
        sums_in = source.payload.get("s")
        if func is AggFunc.MEDIAN:
            raise EngineError("holistic aggregate cannot consume partial results")

    r, s = window.range, window.slide
    q = r // s
    all_starts = (
        np.arange(0, horizon - r + 1, s, dtype=np.int64)
        if horizon >= r
        else np.empty(0, dtype=np.int64)
    )

    charges = 0
    part_ends, part_keys = [], []
    part_payload: dict[str, list] = {}
    for o in range(q):
        starts = all_starts[o::q]
        if len(starts) == 0:
            continue
        if from_raw:
            lo = np.searchsorted(pos, starts, side="left")
            hi = np.searchsorted(pos, starts + r, side="left")
        else:
            lo = np.searchsorted(pos, starts + source.window.range, side="left")
            hi = np.searchsorted(pos, starts + r, side="right")
        sel, seg, total = _concat_ranges(lo, hi)
        charges += total
        if total == 0:
            continue
        sel_keys = keys_in[sel]
        order, bounds = _group_sorted(seg, sel_keys, n_keys)
        if order is not None:
            sel = sel[order]
            seg = seg[order]
            sel_keys = sel_keys[order]
        payload = _reduce_phase(
            func,
            from_raw,
            values[sel] if values is not None else np.empty(total),
            counts_in[sel] if counts_in is not None else None,
            sums_in[sel] if sums_in is not None else None,
            bounds,
        )
        part_ends.append(starts[seg[bounds]] + r)
        part_keys.append(sel_keys[bounds])
        for name, arr in payload.items():
            part_payload.setdefault(name, []).append(arr)

    if not part_ends:
        empty = np.empty(0, dtype=np.int64)
        payload_names = {
            AggFunc.COUNT: ("c",),
            AggFunc.AVG: ("s", "c"),
        }.get(func, ("v",))
        table = _AggTable(
            window,
            func,
            empty,
            empty.copy(),
            {n: np.empty(0) for n in payload_names},
            final=func is AggFunc.MEDIAN,
        )
        return table, charges

    ends = np.concatenate(part_ends)
    keys = np.concatenate(part_keys)
    payload = {n: np.concatenate(chunks) for n, chunks in part_payload.items()}
    order = np.lexsort((keys, ends))
    ends = ends[order]
    keys = keys[order]
    payload = {n: arr[order] for n, arr in payload.items()}
    return (
        _AggTable(window, func, ends, keys, payload, final=func is AggFunc.MEDIAN),
        charges,
    )


def _finalize_table(table: _AggTable) -> np.ndarray:
    if table.func is AggFunc.AVG:
        return table.payload["s"] / table.payload["c"]
    if table.func is AggFunc.COUNT:
        return table.payload["c"].astype(np.float64)
    return np.asarray(table.payload["v"], dtype=np.float64)


# ---------------------------------------------------------------------------
# plan interpreter


def _toposort(plan: PlanDag) -> list[int]:
    indeg = {n.id: 0 for n in plan.nodes}
    for _, b in plan.edges:
        indeg[b] += 1
    ready = sorted(i for i, d in indeg.items() if d == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for v in plan.outputs_of(u):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if len(order) != len(plan.nodes):
        raise EngineError("plan is not acyclic")
    return order


def _validate_stream(stream: EventStream, horizon: int) -> None:
    if len(stream) == 0:
        return
    diffs = np.diff(stream.ts)
    bad = np.flatnonzero(diffs < 0)
    if len(bad):
        i = int(bad[0]) + 1
        raise StreamOrderError(
            f"event {i} has ts {int(stream.ts[i])} after ts {int(stream.ts[i - 1])}"
        )
    if int(stream.ts[-1]) >= horizon:
        raise ValueError(f"event ts {int(stream.ts[-1])} is not below horizon {horizon}")


def run(plan: PlanDag, stream, horizon: int) -> tuple[ResultSet, RunMetrics]:
    """Execute ``plan`` over ``stream``; instances close by ``horizon``.

    Returns the finalized result rows (one per query-window instance and key
    present in it) and per-operator counters plus wall time.  Factor windows
    produce no result rows.
    """
    stream = coerce_stream(stream)
    plan.validate()
    t0 = time.perf_counter()
    _validate_stream(stream, horizon)

    stats = {n.id: OperatorStats(kind=n.kind) for n in plan.nodes}
    outputs: dict[int, object] = {}
    n_keys = stream.n_keys
    results = ResultSet(stream.key_table)

    for nid in _toposort(plan):
        node = plan.node(nid)
        if node.kind == SOURCE:
            outputs[nid] = stream
            stats[nid].output_count = len(stream)
            continue
        feeds = [outputs[i] for i in plan.inputs_of(nid)]
        if node.kind == MULTICAST:
            (feed,) = feeds
            size = len(feed)
            stats[nid].input_count = size
            stats[nid].output_count = size * len(plan.outputs_of(nid))
            outputs[nid] = feed
        elif node.kind == WINDOW_AGG:
            (feed,) = feeds
            table, charges = _window_pass(node.window, plan.func, feed, horizon, n_keys)
            stats[nid].input_count = charges
            stats[nid].output_count = len(table)
            outputs[nid] = table
        elif node.kind == UNION:
            total = 0
            for i in plan.inputs_of(nid):
                feed = outputs[i]
                total += len(feed)
                results.add_block(feed.window, feed.ends, feed.keys, _finalize_table(feed))
            stats[nid].input_count = total
            stats[nid].output_count = total
            outputs[nid] = results
        elif node.kind == SINK:
            (feed,) = feeds
            if isinstance(feed, _AggTable):
                results.add_block(feed.window, feed.ends, feed.keys, _finalize_table(feed))
            size = len(results)
            stats[nid].input_count = size
            stats[nid].output_count = size
            outputs[nid] = results
        else:
            raise EngineError(f"unknown plan node kind {node.kind!r}")

    wall = time.perf_counter() - t0
    metrics = RunMetrics(operators=stats, input_events=len(stream), wall_seconds=wall)
    return results, metrics


def naive_eval(windows, func: AggFunc, stream, horizon: int) -> ResultSet:
    """Reference evaluator: every window scanned directly, instance by instance.

    Deliberately takes the simple route (per key, per instance slice lookup)
    so it stays an independent check on plan execution.
    """
    ws = as_window_set(windows)
    func = AggFunc(func)
    stream = coerce_stream(stream)
    _validate_stream(stream, horizon)

    by_key_ts: list[np.ndarray] = []
    by_key_val: list[np.ndarray] = []
    for code in range(stream.n_keys):
        mask = stream.key_codes == code
        by_key_ts.append(stream.ts[mask])
        by_key_val.append(stream.values[mask])

    results = ResultSet(stream.key_table)
    for w in ws:
        ends, keys, values = [], [], []
        start = 0
        while start + w.range <= horizon:
            for code in range(stream.n_keys):
                ts_k, val_k = by_key_ts[code], by_key_val[code]
                lo = np.searchsorted(ts_k, start, side="left")
                hi = np.searchsorted(ts_k, start + w.range, side="left")
                if hi > lo:
                    chunk = val_k[lo:hi]
                    if func is AggFunc.MIN:
                        v = chunk.min()
                    elif func is AggFunc.MAX:
                        v = chunk.max()
                    elif func is AggFunc.SUM:
                        v = chunk.sum()
                    elif func is AggFunc.COUNT:
                        v = float(hi - lo)
                    elif func is AggFunc.AVG:
                        v = chunk.sum() / (hi - lo)
                    elif func is AggFunc.MEDIAN:
                        v = np.median(chunk)
                    else:
                        raise EngineError(f"unsupported aggregate {func}")
                    ends.append(start + w.range)
                    keys.append(code)
                    values.append(float(v))
            start += w.slide
        order = np.lexsort((np.array(keys, dtype=np.int64), np.array(ends, dtype=np.int64))) if ends else []
        ends_a = np.array(ends, dtype=np.int64)[order] if ends else np.empty(0, dtype=np.int64)
        keys_a = np.array(keys, dtype=np.int64)[order] if ends else np.empty(0, dtype=np.int64)
        vals_a = np.array(values, dtype=np.float64)[order] if ends else np.empty(0)
        results.add_block(w, ends_a, keys_a, vals_a)
    return results
