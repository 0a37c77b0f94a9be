"""Command-line surface: optimize, run, verify, generate, bench.

Exit codes: 0 success, 1 validation failure, 2 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .aggregates import AggFunc, Sharing, sharing_semantics
from .bench import run_bench
from .datagen import GenParams, GenerationError, constant_rate_stream, random_windows, sequential_windows
from .engine import EngineError, diff_results, naive_eval, run
from .factors import min_cost_graph_with_factors
from .optimizer import min_cost_graph
from .planner import deserialize, naive_plan, rewrite, serialize
from .streams import read_events_csv, write_events_csv, write_results_csv
from .windows import WindowSpec, as_window_set

AVG_TOL = 1e-9


class CliError(ValueError):
    pass


def _parse_windows(args) -> tuple[WindowSpec, ...]:
    specs = []
    if args.windows:
        try:
            with open(args.windows) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise CliError(f"cannot read windows file {args.windows}: {e}") from e
        if not isinstance(doc, list):
            raise CliError("windows file must be a JSON list of {range, slide} objects")
        for i, entry in enumerate(doc):
            try:
                specs.append(WindowSpec(int(entry["range"]), int(entry["slide"])))
            except (KeyError, TypeError, ValueError) as e:
                raise CliError(f"windows file entry {i}: {e}") from e
    for text in args.window or []:
        try:
            r, _, s = text.partition(":")
            specs.append(WindowSpec(int(r), int(s or r)))
        except ValueError as e:
            raise CliError(f"bad --window {text!r} (expected r:s): {e}") from e
    if not specs:
        raise CliError("no windows given; use --windows FILE or --window r:s")
    try:
        return as_window_set(specs)
    except ValueError as e:
        raise CliError(str(e)) from e


def _window_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--windows", help="JSON file: [{\"range\": r, \"slide\": s}, ...]")
    p.add_argument("--window", action="append", metavar="R:S",
                   help="inline window, repeatable (R:S, or R for tumbling)")


def cmd_optimize(args) -> int:
    ws = _parse_windows(args)
    func = AggFunc(args.func)
    if sharing_semantics(func) is Sharing.NONE:
        print(f"warning: {func.value} admits no shared computation; emitting the naive plan",
              file=sys.stderr)
        plan = naive_plan(ws, func, args.eta)
        naive_cost = opt_cost = plan.model_cost
    else:
        if args.factors:
            graph = min_cost_graph_with_factors(ws, func, args.eta)
        else:
            graph = min_cost_graph(ws, func, args.eta)
        plan = rewrite(graph, func)
        naive_cost, opt_cost = graph.naive_cost, graph.total_cost
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(serialize(plan) + "\n")
    else:
        print(serialize(plan))
    reduction = 100.0 * (naive_cost - opt_cost) / naive_cost
    print(f"naive cost {naive_cost}  optimized cost {opt_cost}  reduction {reduction:.1f}%",
          file=sys.stderr)
    return 0


def cmd_run(args) -> int:
    with open(args.plan) as fh:
        plan = deserialize(fh.read())
    stream = read_events_csv(args.events)
    horizon = args.horizon if args.horizon is not None else (
        int(stream.ts[-1]) + 1 if len(stream) else 0
    )
    results, metrics = run(plan, stream, horizon)
    if args.out:
        write_results_csv(args.out, results)
    report = {
        "input_events": metrics.input_events,
        "result_rows": len(results),
        "wall_seconds": metrics.wall_seconds,
        "throughput": metrics.throughput,
        "window_input_total": metrics.window_input_total(),
        "operators": {
            str(nid): {"kind": s.kind, "input": s.input_count, "output": s.output_count}
            for nid, s in sorted(metrics.operators.items())
        },
    }
    print(json.dumps(report, indent=2))
    return 0


def cmd_verify(args) -> int:
    ws = _parse_windows(args)
    func = AggFunc(args.func)
    horizon = args.horizon if args.horizon is not None else 3 * max(w.range for w in ws)
    stream = constant_rate_stream(args.rate, horizon, keys=args.keys, seed=args.seed)
    oracle = naive_eval(ws, func, stream, horizon)

    candidates: list[tuple[str, object]] = []
    if args.plan:
        with open(args.plan) as fh:
            candidates.append((args.plan, deserialize(fh.read())))
    elif sharing_semantics(func) is Sharing.NONE:
        candidates.append(("naive", naive_plan(ws, func, args.eta)))
    else:
        candidates.append(("optimized", rewrite(min_cost_graph(ws, func, args.eta), func)))
        candidates.append(
            ("optimized+factors", rewrite(min_cost_graph_with_factors(ws, func, args.eta), func))
        )

    tol = AVG_TOL if func is AggFunc.AVG else 0.0
    for label, plan in candidates:
        results, _ = run(plan, stream, horizon)
        diff = diff_results(oracle, results, avg_tol=tol)
        if diff is not None:
            print(f"FAIL [{label}]: {diff}")
            return 2
        print(f"PASS [{label}]: {len(results)} rows match the per-window evaluation")
    return 0


def cmd_generate(args) -> int:
    wrote = False
    if args.out:
        params = GenParams(
            count=args.count,
            tumbling=not args.hopping,
            seed=args.seed,
            slide_multiplier=args.multiplier,
            range_multiplier=args.multiplier,
        )
        gen = random_windows if args.gen == "random" else sequential_windows
        ws = gen(params)
        with open(args.out, "w") as fh:
            json.dump([{"range": w.range, "slide": w.slide} for w in ws], fh, indent=2)
            fh.write("\n")
        print(f"wrote {len(ws)} windows to {args.out}", file=sys.stderr)
        wrote = True
    if args.events_out:
        if args.horizon is None:
            raise CliError("--events-out needs --horizon")
        stream = constant_rate_stream(args.rate, args.horizon, keys=args.keys, seed=args.seed)
        write_events_csv(args.events_out, stream)
        print(f"wrote {len(stream)} events to {args.events_out}", file=sys.stderr)
        wrote = True
    if not wrote:
        raise CliError("nothing to generate; pass --out and/or --events-out")
    return 0


def cmd_bench(args) -> int:
    params = GenParams(
        count=args.count,
        tumbling=not args.hopping,
        seed=args.seed,
        slide_multiplier=args.multiplier,
        range_multiplier=args.multiplier,
    )
    report = run_bench(
        AggFunc(args.func),
        args.gen,
        params,
        n_sets=args.sets,
        eta=args.eta,
        events_per_set=args.events,
        keys=args.keys,
    )
    print(report.table())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="windowshare",
        description="Shared-computation planning and execution for multi-window aggregates",
    )
    sub = top.add_subparsers(dest="command", required=True)
    funcs = [f.value for f in AggFunc]

    p = sub.add_parser("optimize", help="rewrite a window set into a min-cost plan")
    _window_args(p)
    p.add_argument("--func", choices=funcs, required=True)
    p.add_argument("--eta", type=int, default=1, help="events per tick in the cost model")
    p.add_argument("--factors", action="store_true", help="allow auxiliary factor windows")
    p.add_argument("--out", help="plan JSON path (default: stdout)")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("run", help="execute a plan over an event CSV")
    p.add_argument("--plan", required=True)
    p.add_argument("--events", required=True)
    p.add_argument("--horizon", type=int, default=None,
                   help="tick horizon; default: last event ts + 1")
    p.add_argument("--out", help="result CSV path")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("verify", help="check optimized plans against per-window evaluation")
    _window_args(p)
    p.add_argument("--func", choices=funcs, required=True)
    p.add_argument("--eta", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=None, help="default: 3 * max range")
    p.add_argument("--keys", type=int, default=2)
    p.add_argument("--rate", type=int, default=1, help="events per tick")
    p.add_argument("--plan", help="verify this plan file instead of freshly optimized ones")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("generate", help="generate window sets and/or event streams")
    p.add_argument("--gen", choices=["random", "sequential"], default="random")
    p.add_argument("--count", type=int, default=5, help="window set size")
    p.add_argument("--hopping", action="store_true", help="hopping windows (default tumbling)")
    p.add_argument("--multiplier", type=int, default=50, help="seed multiplier bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="windows JSON path")
    p.add_argument("--events-out", help="event CSV path")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--rate", type=int, default=1)
    p.add_argument("--keys", type=int, default=1)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("bench", help="bench naive vs optimized plans on generated sets")
    p.add_argument("--gen", choices=["random", "sequential"], default="sequential")
    p.add_argument("--count", type=int, default=5, help="windows per set")
    p.add_argument("--sets", type=int, default=10)
    p.add_argument("--hopping", action="store_true")
    p.add_argument("--multiplier", type=int, default=50)
    p.add_argument("--func", choices=funcs, default="MIN")
    p.add_argument("--eta", type=int, default=1)
    p.add_argument("--events", type=int, default=100_000, help="events per stream (approx)")
    p.add_argument("--keys", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report JSON path")
    p.set_defaults(handler=cmd_bench)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (CliError, ValueError, OverflowError, OSError, GenerationError, EngineError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
