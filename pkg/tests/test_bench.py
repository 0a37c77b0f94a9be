import pytest

from windowshare import (
    AggFunc,
    GenParams,
    bench_window_set,
    constant_rate_stream,
    pearson_r,
    run_bench,
)


def test_bench_example5_gammas(example5_windows):
    stream = constant_rate_stream(1, 120, keys=1, seed=0)
    result = bench_window_set(example5_windows, AggFunc.MIN, 1, stream, 120)
    assert result.plans["naive"].model_cost == 480
    assert result.plans["factors"].model_cost == 150
    assert result.gamma_cost == pytest.approx(3.2)
    assert result.counter_speedup == pytest.approx(3.2)
    assert result.plans["naive"].throughput > 0


def test_pearson_undefined_cases():
    assert pearson_r([1.0], [1.0]) is None
    assert pearson_r([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) is None  # zero variance
    assert pearson_r([1.0, 2.0], [1.0]) is None


def test_pearson_known_values():
    assert pearson_r([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson_r([1, 2, 3], [6, 4, 2]) == pytest.approx(-1.0)


def test_run_bench_sequential_ordering():
    params = GenParams(count=10, tumbling=True, seed=0)
    report = run_bench(AggFunc.MIN, "sequential", params, n_sets=3, events_per_set=20_000)
    assert len(report.sets) == 3
    for s in report.sets:
        # factor plans strictly beat plain rewrites, which strictly beat naive
        assert s.counter_speedup > s.counter_speedup_plain > 1.0
        assert s.gamma_cost >= s.gamma_cost_plain >= 1.0


def test_run_bench_single_set_pearson_na():
    params = GenParams(count=4, tumbling=True, seed=3)
    report = run_bench(AggFunc.MIN, "random", params, n_sets=1, events_per_set=5_000)
    assert report.pearson is None
    assert "n/a" in report.table()


def test_report_round_trip_fields():
    params = GenParams(count=4, tumbling=True, seed=1)
    report = run_bench(AggFunc.SUM, "sequential", params, n_sets=2, events_per_set=5_000)
    doc = report.to_dict()
    assert doc["func"] == "SUM"
    assert len(doc["sets"]) == 2
    for entry in doc["sets"]:
        assert {"gamma_cost", "counter_speedup", "gamma_throughput", "plans"} <= set(entry)
        assert {"naive", "optimized", "factors"} == set(entry["plans"])
    assert "pearson" in report.table()
