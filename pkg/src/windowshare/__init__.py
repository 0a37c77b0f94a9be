"""Shared-computation planning and execution for aggregates over correlated
tumbling/hopping windows on one event stream.

The pipeline: model pairwise window overlap (`windows`), classify the
aggregate (`aggregates`), pick each window's cheapest feed (`optimizer`),
optionally insert auxiliary factor windows (`factors`), lower the forest to a
dataflow plan (`planner`), and execute it with per-operator counters
(`engine`).  `datagen` and `bench` provide synthetic workloads and the
cost-vs-throughput harness; `cli` exposes all of it as subcommands.
"""

from .aggregates import (
    AggFunc,
    Classification,
    Sharing,
    SubAggregate,
    classification,
    finalize,
    make_sub,
    merge,
    sharing_semantics,
)
from .bench import BenchReport, PlanStats, SetResult, bench_window_set, pearson_r, run_bench
from .datagen import (
    GenParams,
    GenerationError,
    constant_rate_stream,
    random_windows,
    sequential_windows,
)
from .engine import (
    EngineError,
    ResultRow,
    ResultSet,
    RunMetrics,
    StreamOrderError,
    diff_results,
    naive_eval,
    run,
)
from .factors import (
    BenefitContext,
    FactorCandidate,
    FactorComparisonError,
    benefit_context,
    benefit_delta,
    compare_independent,
    find_best_factor_covered,
    find_best_factor_partitioned,
    lambda_value,
    min_cost_graph_with_factors,
    partition_benefit_check,
)
from .optimizer import (
    VIRTUAL_ROOT,
    CostContext,
    CoverageGraph,
    HolisticAggregateError,
    MinCostGraph,
    augment_with_root,
    build_coverage_graph,
    cost_context,
    min_cost_graph,
    recurrence_count,
)
from .planner import (
    PlanDag,
    PlanNode,
    PlanValidationError,
    deserialize,
    naive_plan,
    rewrite,
    serialize,
)
from .streams import Event, EventStream, StreamFormatError, read_events_csv, write_events_csv, write_results_csv
from .windows import (
    Interval,
    NotCoveredError,
    WindowSpec,
    as_window_set,
    covering_multiplier,
    covering_set,
    covers,
    intervals,
    partitions,
)

__version__ = "0.1.0"

__all__ = [
    "AggFunc",
    "BenchReport",
    "BenefitContext",
    "Classification",
    "CostContext",
    "CoverageGraph",
    "EngineError",
    "Event",
    "EventStream",
    "FactorCandidate",
    "FactorComparisonError",
    "GenParams",
    "GenerationError",
    "HolisticAggregateError",
    "Interval",
    "MinCostGraph",
    "NotCoveredError",
    "PlanDag",
    "PlanNode",
    "PlanStats",
    "PlanValidationError",
    "ResultRow",
    "ResultSet",
    "RunMetrics",
    "SetResult",
    "Sharing",
    "StreamFormatError",
    "StreamOrderError",
    "SubAggregate",
    "VIRTUAL_ROOT",
    "WindowSpec",
    "as_window_set",
    "augment_with_root",
    "bench_window_set",
    "benefit_context",
    "benefit_delta",
    "build_coverage_graph",
    "classification",
    "compare_independent",
    "constant_rate_stream",
    "cost_context",
    "covering_multiplier",
    "covering_set",
    "covers",
    "deserialize",
    "diff_results",
    "finalize",
    "find_best_factor_covered",
    "find_best_factor_partitioned",
    "intervals",
    "lambda_value",
    "make_sub",
    "merge",
    "min_cost_graph",
    "min_cost_graph_with_factors",
    "naive_eval",
    "naive_plan",
    "partition_benefit_check",
    "partitions",
    "pearson_r",
    "random_windows",
    "read_events_csv",
    "recurrence_count",
    "rewrite",
    "run",
    "run_bench",
    "sequential_windows",
    "serialize",
    "sharing_semantics",
    "write_events_csv",
    "write_results_csv",
]
