"""Acceptance suite: one test and one printed pass/fail line per criterion.

Run `pytest tests/test_acceptance.py -v -s` to see the lines; the whole
module is also part of the default pytest run.
"""

import time

import numpy as np
import pytest

from windowshare import (
    AggFunc,
    GenParams,
    WindowSpec,
    benefit_context,
    benefit_delta,
    constant_rate_stream,
    covering_multiplier,
    covers,
    diff_results,
    min_cost_graph,
    min_cost_graph_with_factors,
    naive_eval,
    naive_plan,
    partitions,
    random_windows,
    rewrite,
    run,
    sequential_windows,
)
from windowshare.optimizer import VIRTUAL_ROOT

from conftest import covers_oracle, divisor_windows, multiplier_oracle, partitions_oracle, ref_total_cost

W = WindowSpec
EXECUTABLE = [AggFunc.MIN, AggFunc.MAX, AggFunc.SUM, AggFunc.COUNT, AggFunc.AVG]


def _report(num: int, ok: bool, detail: str):
    print(f"\nACCEPTANCE {num} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num} failed: {detail}"


def _best_time(fn, repeats=10):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def test_criterion_1_example5_regression():
    ws = (W(10, 10), W(20, 20), W(30, 30), W(40, 40))
    g, elapsed = _best_time(lambda: min_cost_graph(ws, AggFunc.MIN, 1))
    edges = {(v.label, k.label) for k, v in g.upstream.items() if v is not None}
    ok = (
        g.naive_cost == 480
        and g.total_cost == 150
        and edges == {("10x10", "20x20"), ("10x10", "30x30"), ("20x20", "40x40")}
        and elapsed < 1e-3
    )
    _report(1, ok, f"naive 480 / optimized {g.total_cost}, kept edges {sorted(edges)}, "
                   f"{elapsed * 1e6:.0f} us")


def test_criterion_2_example6_regression():
    ws = (W(20, 20), W(30, 30), W(40, 40))
    plain, t_plain = _best_time(lambda: min_cost_graph(ws, AggFunc.MIN, 1))
    fw, t_fw = _best_time(lambda: min_cost_graph_with_factors(ws, AggFunc.MIN, 1))
    ok = (
        plain.total_cost == 246
        and fw.total_cost == 150
        and fw.factors == frozenset({W(10, 10)})
        and max(t_plain, t_fw) < 1e-3
    )
    _report(2, ok, f"without factors {plain.total_cost}, with factors {fw.total_cost} "
                   f"(inserted {sorted(w.label for w in fw.factors)}), "
                   f"{max(t_plain, t_fw) * 1e6:.0f} us")


def test_criterion_3_coverage_theory_oracle():
    t0 = time.perf_counter()
    pool = divisor_windows(48)
    mismatches = 0
    pairs = 0
    for w1 in pool:
        for w2 in pool:
            pairs += 1
            if covers(w1, w2) != covers_oracle(w1, w2):
                mismatches += 1
            if partitions(w1, w2) != partitions_oracle(w1, w2):
                mismatches += 1
            if covers(w1, w2) and covering_multiplier(w1, w2) != multiplier_oracle(w1, w2):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10.0
    _report(3, ok, f"{pairs} ordered pairs (|pool|={len(pool)}, r<=48), "
                   f"{mismatches} oracle mismatches, {elapsed:.1f} s")


def _fuzz_corpus():
    rng = np.random.default_rng(20240817)
    corpus = []
    for i in range(100):
        tumbling = i % 2 == 0
        if i % 4 < 2:
            params = GenParams(
                count=int(rng.integers(2, 7)), tumbling=tumbling,
                seed=int(rng.integers(0, 10**6)),
                slide_multiplier=12, range_multiplier=12,
            )
            corpus.append(random_windows(params))
        else:
            params = GenParams(
                count=int(rng.integers(2, 7)), tumbling=tumbling,
                seed=int(rng.integers(0, 10**6)),
            )
            corpus.append(sequential_windows(params))
    return corpus


def test_criterion_4_plan_equivalence_fuzzing():
    t0 = time.perf_counter()
    corpus = _fuzz_corpus()
    mismatches = []
    runs = 0
    min_events = float("inf")
    for i, ws in enumerate(corpus):
        horizon = 3 * max(w.range for w in ws)
        eta = max(1, -(-10_000 // horizon))
        keys = 1 + i % 3
        stream = constant_rate_stream(eta, horizon, keys=keys, seed=i)
        min_events = min(min_events, len(stream))
        for func in EXECUTABLE:
            tol = 1e-9 if func is AggFunc.AVG else 0.0
            oracle = naive_eval(ws, func, stream, horizon)
            plans = (
                naive_plan(ws, func),
                rewrite(min_cost_graph(ws, func), func),
                rewrite(min_cost_graph_with_factors(ws, func), func),
            )
            for plan in plans:
                runs += 1
                res, _ = run(plan, stream, horizon)
                d = diff_results(oracle, res, avg_tol=tol)
                if d is not None:
                    mismatches.append((ws, func, d))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and len(corpus) >= 100 and min_events >= 10_000 and elapsed < 300
    _report(4, ok, f"{len(corpus)} window sets x {len(EXECUTABLE)} functions, {runs} plan "
                   f"executions, >= {int(min_events)} events each, "
                   f"{len(mismatches)} mismatches, {elapsed:.0f} s")


def test_criterion_5_cost_model_counters():
    t0 = time.perf_counter()
    worst_exact = 0
    # tumbling-only: counters must equal c x model cost exactly
    tumbling_sets = [
        (W(10, 10), W(20, 20), W(30, 30), W(40, 40)),
        sequential_windows(GenParams(count=5, tumbling=True, seed_ranges=(10,), seed=0)),
        random_windows(GenParams(count=4, tumbling=True, seed=5, range_multiplier=12)),
    ]
    for ws in tumbling_sets:
        for func in (AggFunc.MIN, AggFunc.SUM):
            for c in (1, 2, 3):
                g = min_cost_graph_with_factors(ws, func)
                horizon = c * g.period
                stream = constant_rate_stream(1, horizon, keys=1, seed=c)
                for plan in (naive_plan(ws, func), rewrite(g, func)):
                    _, m = run(plan, stream, horizon)
                    worst_exact = max(worst_exact, abs(m.window_input_total() - c * plan.model_cost))
    # hopping: within 5% (horizon-straddling instances)
    worst_rel = 0.0
    for seed in range(6):
        ws = random_windows(GenParams(count=4, tumbling=False, seed=seed, slide_multiplier=12))
        for func in (AggFunc.MIN, AggFunc.SUM):
            g = min_cost_graph_with_factors(ws, func)
            c = 2
            horizon = c * g.period
            stream = constant_rate_stream(1, horizon, keys=1, seed=seed)
            for plan in (naive_plan(ws, func), rewrite(g, func)):
                _, m = run(plan, stream, horizon)
                rel = abs(m.window_input_total() - c * plan.model_cost) / (c * plan.model_cost)
                worst_rel = max(worst_rel, rel)
    elapsed = time.perf_counter() - t0
    ok = worst_exact == 0 and worst_rel <= 0.05 and elapsed < 60
    _report(5, ok, f"tumbling exact (max abs dev {worst_exact}), hopping max rel dev "
                   f"{worst_rel * 100:.2f}% (<= 5%), {elapsed:.0f} s")


def test_criterion_6_benefit_formula_consistency():
    mismatches = 0
    factors_seen = 0
    for ws in _fuzz_corpus():
        for func in (AggFunc.MIN, AggFunc.SUM):
            g = min_cost_graph_with_factors(ws, func)
            for wf in g.factors:
                factors_seen += 1
                nodes_wo = tuple(w for w in g.nodes if w != wf)
                edges_wo = tuple(e for e in g.edges if wf not in e)
                diff = ref_total_cost(nodes_wo, edges_wo, g.period, 1) - ref_total_cost(
                    g.nodes, g.edges, g.period, 1
                )
                target = g.upstream[wf] or VIRTUAL_ROOT
                delta = benefit_delta(benefit_context(target, g.children(wf), wf, g.period))
                if not (diff == g.factor_benefit[wf] == delta):
                    mismatches += 1
    ok = mismatches == 0 and factors_seen > 20
    _report(6, ok, f"{factors_seen} inserted factor windows, {mismatches} benefit mismatches")


def test_criterion_7_desk_scale_throughput():
    t0 = time.perf_counter()
    ws = sequential_windows(GenParams(count=10, tumbling=True, seed_ranges=(10,), seed=0))
    events = 10_000_000
    stream = constant_rate_stream(1, events, keys=1, seed=11)
    plan_naive = naive_plan(ws, AggFunc.MIN)
    plan_fw = rewrite(min_cost_graph_with_factors(ws, AggFunc.MIN), AggFunc.MIN)

    best = {}
    counters = {}
    for label, plan in (("naive", plan_naive), ("factors", plan_fw)):
        for _ in range(2):
            _, m = run(plan, stream, events)
            best[label] = max(best.get(label, 0.0), m.throughput)
            counters[label] = m.window_input_total()
    speedup = best["factors"] / best["naive"]
    gamma_c = plan_naive.model_cost / plan_fw.model_cost
    counter_speedup = counters["naive"] / counters["factors"]
    rel = abs(counter_speedup - gamma_c) / gamma_c
    elapsed = time.perf_counter() - t0
    ok = speedup >= 2.0 and rel <= 0.05 and elapsed < 300
    _report(7, ok, f"10M events: wall speedup {speedup:.2f}x (>= 2x), counter speedup "
                   f"{counter_speedup:.3f} vs gamma_C {gamma_c:.3f} (dev {rel * 100:.2f}%), "
                   f"{elapsed:.0f} s")


def test_criterion_8_cost_throughput_correlation():
    t0 = time.perf_counter()
    from windowshare.bench import pearson_r, run_bench

    sets = []
    for gen, tumbling, seed in (
        ("sequential", True, 0),
        ("sequential", False, 100),
        ("random", True, 200),
        ("random", False, 300),
    ):
        params = GenParams(count=5, tumbling=tumbling, seed=seed,
                           slide_multiplier=12, range_multiplier=12)
        report = run_bench(AggFunc.MIN, gen, params, n_sets=6, events_per_set=60_000)
        sets.extend(report.sets)
    r = pearson_r([s.gamma_cost for s in sets], [s.counter_speedup for s in sets])
    elapsed = time.perf_counter() - t0
    ok = len(sets) >= 20 and r is not None and r >= 0.95 and elapsed < 300
    _report(8, ok, f"pearson r = {r:.4f} over {len(sets)} window sets (>= 0.95), {elapsed:.0f} s")


def test_criterion_9_optimizer_overhead():
    results = []
    for tumbling, label in ((True, "tumbling"), (False, "hopping")):
        ws = sequential_windows(
            GenParams(count=20, tumbling=tumbling, seed_ranges=(10,), seed_slides=(5,), seed=1)
        )
        _, elapsed = _best_time(lambda: min_cost_graph_with_factors(ws, AggFunc.MIN), repeats=5)
        results.append((label, elapsed))
    worst = max(e for _, e in results)
    ok = worst < 0.1
    _report(9, ok, "optimize-with-factors |ws|=20: "
                   + ", ".join(f"{lbl} {e * 1000:.1f} ms" for lbl, e in results)
                   + " (< 100 ms)")
