"""Benchmark harness: run naive and optimized plans over generated workloads
and relate the cost model's predicted speedups to what execution shows.

For each window set three plans run on the same fresh constant-rate stream:
the naive plan, the optimized plan, and the optimized plan with factor
windows.  The per-plan record keeps the model cost, the summed window-operator
input counters, wall time and throughput.  The headline ratios compare the
factor plan against the naive one: ``gamma_cost`` from model costs,
``counter_speedup`` from counters, ``gamma_throughput`` from wall-clock
throughput.  A batch report adds the Pearson correlation between predicted
and counter-measured speedups; counters are deterministic, so that number is
free of timing noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .aggregates import AggFunc
from .datagen import GenParams, constant_rate_stream, random_windows, sequential_windows
from .engine import run
from .factors import min_cost_graph_with_factors
from .optimizer import min_cost_graph
from .planner import PlanDag, naive_plan, rewrite
from .windows import WindowSpec

__all__ = ["PlanStats", "SetResult", "BenchReport", "bench_window_set", "run_bench", "pearson_r"]


@dataclass
class PlanStats:
    label: str
    model_cost: int
    window_input_counter: int
    wall_seconds: float
    throughput: float


@dataclass
class SetResult:
    windows: tuple[WindowSpec, ...]
    plans: dict[str, PlanStats]

    @property
    def gamma_cost(self) -> float:
        return self.plans["naive"].model_cost / self.plans["factors"].model_cost

    @property
    def gamma_cost_plain(self) -> float:
        return self.plans["naive"].model_cost / self.plans["optimized"].model_cost

    @property
    def counter_speedup(self) -> float:
        return (
            self.plans["naive"].window_input_counter
            / self.plans["factors"].window_input_counter
        )

    @property
    def counter_speedup_plain(self) -> float:
        return (
            self.plans["naive"].window_input_counter
            / self.plans["optimized"].window_input_counter
        )

    @property
    def gamma_throughput(self) -> float:
        naive = self.plans["naive"].throughput
        return self.plans["factors"].throughput / naive if naive > 0 else 0.0


@dataclass
class BenchReport:
    func: AggFunc
    eta: int
    sets: list[SetResult] = field(default_factory=list)

    @property
    def pearson(self) -> float | None:
        xs = [s.gamma_cost for s in self.sets]
        ys = [s.counter_speedup for s in self.sets]
        return pearson_r(xs, ys)

    def to_dict(self) -> dict:
        return {
            "func": self.func.value,
            "eta": self.eta,
            "pearson_r": self.pearson,
            "sets": [
                {
                    "windows": [{"range": w.range, "slide": w.slide} for w in s.windows],
                    "gamma_cost": s.gamma_cost,
                    "counter_speedup": s.counter_speedup,
                    "gamma_throughput": s.gamma_throughput,
                    "plans": {
                        name: {
                            "model_cost": p.model_cost,
                            "window_input_counter": p.window_input_counter,
                            "wall_seconds": p.wall_seconds,
                            "throughput": p.throughput,
                        }
                        for name, p in s.plans.items()
                    },
                }
                for s in self.sets
            ],
        }

    def table(self) -> str:
        lines = [
            f"{'windows':<34} {'C_naive':>12} {'C_opt':>12} {'C_fw':>12} "
            f"{'gamma_C':>8} {'ctr_spd':>8} {'gamma_T':>8}"
        ]
        for s in self.sets:
            label = ",".join(w.label for w in s.windows)
            if len(label) > 33:
                label = label[:30] + "..."
            lines.append(
                f"{label:<34} {s.plans['naive'].model_cost:>12} "
                f"{s.plans['optimized'].model_cost:>12} {s.plans['factors'].model_cost:>12} "
                f"{s.gamma_cost:>8.3f} {s.counter_speedup:>8.3f} {s.gamma_throughput:>8.3f}"
            )
        r = self.pearson
        lines.append(f"pearson(gamma_C, counter speedup) over {len(self.sets)} sets: "
                     + (f"{r:.4f}" if r is not None else "n/a"))
        return "\n".join(lines)


def pearson_r(xs, ys) -> float | None:
    """Pearson correlation; None when undefined (fewer than two points or a
    zero-variance side)."""
    n = len(xs)
    if n != len(ys) or n < 2:
        return None
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        return None
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def _timed_run(plan: PlanDag, stream, horizon: int, label: str) -> PlanStats:
    results, metrics = run(plan, stream, horizon)
    del results
    return PlanStats(
        label=label,
        model_cost=plan.model_cost,
        window_input_counter=metrics.window_input_total(),
        wall_seconds=metrics.wall_seconds,
        throughput=metrics.throughput,
    )


def bench_window_set(windows, func: AggFunc, eta: int, stream, horizon: int) -> SetResult:
    """All three plans over one stream."""
    plans = {
        "naive": naive_plan(windows, func, eta),
        "optimized": rewrite(min_cost_graph(windows, func, eta), func),
        "factors": rewrite(min_cost_graph_with_factors(windows, func, eta), func),
    }
    stats = {name: _timed_run(p, stream, horizon, name) for name, p in plans.items()}
    return SetResult(windows=tuple(windows), plans=stats)


def run_bench(
    func: AggFunc,
    gen: str,
    params: GenParams,
    n_sets: int,
    eta: int = 1,
    events_per_set: int = 100_000,
    keys: int = 1,
) -> BenchReport:
    """Generate ``n_sets`` window sets and bench each on a fresh stream.

    The horizon is one model period when that keeps the stream within
    ``events_per_set`` events, otherwise the largest whole number of max-range
    multiples that fits (at least one).
    """
    make = {"random": random_windows, "sequential": sequential_windows}[gen]
    report = BenchReport(func=AggFunc(func), eta=eta)
    for i in range(n_sets):
        p = GenParams(
            count=params.count,
            tumbling=params.tumbling,
            seed_slides=params.seed_slides,
            seed_ranges=params.seed_ranges,
            slide_multiplier=params.slide_multiplier,
            range_multiplier=params.range_multiplier,
            seed=params.seed + i,
        )
        ws = make(p)
        graph = min_cost_graph(ws, func, eta)
        max_r = max(w.range for w in ws)
        if graph.period * eta <= events_per_set:
            horizon = graph.period * max(1, events_per_set // (graph.period * eta))
        else:
            horizon = max_r * max(1, events_per_set // (max_r * eta))
        stream = constant_rate_stream(eta, horizon, keys=keys, seed=p.seed + 7919)
        report.sets.append(bench_window_set(ws, func, eta, stream, horizon))
    return report
