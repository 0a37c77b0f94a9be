"""Factor windows: auxiliary windows the query never asked for.

Drop the 10-tick window from the previous demo and the remaining windows
{20, 30, 40} share much less: the optimizer only manages 360 -> 246.  But a
10-tick tumbling window *inserted by the optimizer* restores the full
hierarchy: it reads the raw stream once and feeds everything else, for a
total of 150.  Its results are never exposed: it exists only as an internal
operator.
"""

from windowshare import (
    VIRTUAL_ROOT,
    AggFunc,
    WindowSpec,
    benefit_context,
    benefit_delta,
    min_cost_graph,
    min_cost_graph_with_factors,
    rewrite,
)

windows = [WindowSpec(20, 20), WindowSpec(30, 30), WindowSpec(40, 40)]

plain = min_cost_graph(windows, AggFunc.MIN)
print(f"naive {plain.naive_cost}, shared-only {plain.total_cost}")

# The candidate search lives above the forest roots (W20 and W30 read raw):
# try a few tumbling candidates by hand and see their exact benefits.
for r in (2, 5, 10):
    cand = WindowSpec(r, r)
    delta = benefit_delta(benefit_context(VIRTUAL_ROOT, [WindowSpec(20, 20), WindowSpec(30, 30)],
                                          cand, plain.period))
    print(f"  inserting {cand}: benefit {delta} events/period")

fw = min_cost_graph_with_factors(windows, AggFunc.MIN)
print(f"with factor windows: total {fw.total_cost}, inserted "
      f"{sorted(w.label for w in fw.factors)} (benefit {fw.factor_benefit})")
print()

plan = rewrite(fw, AggFunc.MIN)
hidden = [n for n in plan.window_nodes() if n.is_factor]
visible = [n for n in plan.window_nodes() if not n.is_factor]
print(f"plan has {len(visible)} user-visible window operators "
      f"({', '.join(n.window.label for n in visible)})")
print(f"and {len(hidden)} hidden factor operator(s) "
      f"({', '.join(n.window.label for n in hidden)}) feeding them")
