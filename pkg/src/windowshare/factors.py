"""Auxiliary "factor" windows: windows not in the query that cut total cost.

A factor window sits between a target window and the windows currently fed
by it, absorbing the target's output once and fanning cheaper partial results
out to the group.  Candidate generation is driven by divisibility of slides
and ranges; each candidate's exact benefit (cost without it minus cost with
it, per period) decides insertion.  The expansion sweep visits every node of
the min-cost forest once, top down from a virtual unit-tick root standing in
for the raw stream, and inserts at most one factor per node.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

from .aggregates import AggFunc, Sharing
from .optimizer import (
    VIRTUAL_ROOT,
    CostContext,
    MinCostGraph,
    _cost_pass,
    build_coverage_graph,
    cost_context,
    min_cost_graph,
    recurrence_count,
)
from .windows import WindowSpec, covering_multiplier, covers, partitions

__all__ = [
    "FactorComparisonError",
    "FactorCandidate",
    "BenefitContext",
    "benefit_context",
    "benefit_delta",
    "lambda_value",
    "partition_benefit_check",
    "compare_independent",
    "find_best_factor_covered",
    "find_best_factor_partitioned",
    "min_cost_graph_with_factors",
]


class FactorComparisonError(ValueError):
    """The closed-form candidate comparison is outside its valid domain."""


@dataclass(frozen=True)
class FactorCandidate:
    """An auxiliary window plus its exact per-period benefit."""

    window: WindowSpec
    delta: int


@dataclass(frozen=True)
class BenefitContext:
    """Inputs of the benefit formula: a target window, the downstream windows
    it currently feeds, one candidate factor window, and the shared period."""

    target: WindowSpec
    downstreams: tuple[WindowSpec, ...]
    candidate: WindowSpec
    period: int

    @cached_property
    def candidate_recurrence(self) -> int:
        return recurrence_count(self.candidate, self.period)

    def downstream_recurrence(self, d: WindowSpec) -> int:
        return recurrence_count(d, self.period)


def benefit_context(
    target: WindowSpec, downstreams, candidate: WindowSpec, period: int
) -> BenefitContext:
    ds = tuple(downstreams)
    if not ds:
        raise ValueError("benefit analysis needs at least one downstream window")
    if not covers(candidate, target):
        raise ValueError(f"candidate {candidate} is not covered by target {target}")
    for d in ds:
        if not covers(d, candidate):
            raise ValueError(f"downstream {d} is not covered by candidate {candidate}")
    return BenefitContext(target=target, downstreams=ds, candidate=candidate, period=period)


def benefit_delta(ctx: BenefitContext) -> Fraction:
    """Per-period cost reduction from inserting the candidate (rational, exact).

    n_f * ( sum_j (n_j/n_f) * (k_f - r_j/s_f + r_j/s_W - k_W) - (1 + r_f/s_W - k_W) )

    where k_x = range/slide of the respective window.  Positive means the
    candidate pays for itself: the downstream windows get cheaper feeds by
    more than the candidate's own cost of reading the target.
    """
    w, wf = ctx.target, ctx.candidate
    k_w = Fraction(w.range, w.slide)
    k_f = Fraction(wf.range, wf.slide)
    n_f = ctx.candidate_recurrence
    acc = Fraction(0)
    for d in ctx.downstreams:
        n_j = ctx.downstream_recurrence(d)
        acc += Fraction(n_j, n_f) * (
            k_f - Fraction(d.range, wf.slide) + Fraction(d.range, w.slide) - k_w
        )
    acc -= 1 + Fraction(wf.range, w.slide) - k_w
    return n_f * acc


def _net_benefit(
    target: WindowSpec,
    downstreams,
    candidate: WindowSpec,
    ctx: CostContext,
    virtual: bool,
) -> int:
    """Exact integer benefit, charging raw-stream feeds at eta events per tick.

    Feeds through the virtual root are raw-stream reads, so they cost
    ``eta * range`` per instance instead of a covering multiplier.  At
    eta == 1 this equals :func:`benefit_delta`.
    """
    n_f = recurrence_count(candidate, ctx.period)
    cand_feed = ctx.eta * candidate.range if virtual else covering_multiplier(candidate, target)
    delta = -n_f * cand_feed
    for d in downstreams:
        old_feed = ctx.eta * d.range if virtual else covering_multiplier(d, target)
        delta += ctx.recurrence[d] * (old_feed - covering_multiplier(d, candidate))
    return delta


def lambda_value(downstreams, ctx: CostContext) -> Fraction:
    """Sum over downstream windows of recurrence/multiplicity (>= 1 each)."""
    total = Fraction(0)
    for d in downstreams:
        total += Fraction(ctx.recurrence[d], ctx.multiplicity[d])
    return total


def partition_benefit_check(
    wf: WindowSpec, w: WindowSpec, downstreams, lam: Fraction, ctx: CostContext
) -> bool:
    """Decide whether tumbling factor ``wf`` under tumbling target ``w`` helps.

    With two or more downstream windows it always does.  With a single
    tumbling downstream it never does (the factor consumes the same partials
    the downstream could consume directly).  With a single hopping downstream
    the overlap between its instances makes the factor pay off when
    ``r_f / r_W >= lam / (lam - 1)``; the threshold simplifies to
    ``1 + m1 / ((m1 - 1) * (k1 - 1))`` and is unreachable when the downstream
    occurs once per period (lam == 1).
    """
    if not wf.tumbling or not w.tumbling:
        raise ValueError("the partitioned-feed benefit test applies to tumbling windows only")
    ds = tuple(downstreams)
    if len(ds) >= 2:
        return True
    (d,) = ds
    k1 = d.range // d.slide
    if k1 == 1:
        return False
    m1 = ctx.multiplicity[d]
    if k1 >= 3 and m1 >= 3:
        return True
    if lam <= 1:
        return False
    return Fraction(wf.range, w.range) >= lam / (lam - 1)


def compare_independent(
    wf: WindowSpec, wf2: WindowSpec, lam: Fraction, r_w: int
) -> int:
    """Order two independent tumbling candidates by their overall cost.

    Returns -1 when ``wf`` gives strictly lower cost, 1 when ``wf2`` does,
    0 on a tie.  ``wf`` is weakly preferred iff
    ``r_f / r'_f >= (lam - r_f/r_W) / (lam - r'_f/r_W)``.  When a denominator
    is not positive the closed form is outside its domain and a
    :class:`FactorComparisonError` is raised for the caller to fall back on
    direct benefit comparison.
    """
    if not wf.tumbling or not wf2.tumbling:
        raise ValueError("candidate comparison applies to tumbling windows only")
    if wf == wf2:
        return 0
    if covers(wf, wf2) or covers(wf2, wf):
        raise ValueError(f"{wf} and {wf2} are dependent candidates")
    q = Fraction(wf.range, r_w)
    q2 = Fraction(wf2.range, r_w)
    if lam - q <= 0 or lam - q2 <= 0:
        raise FactorComparisonError(
            f"comparison domain violated: lam={lam} vs {q}, {q2}"
        )
    first_ok = Fraction(wf.range, wf2.range) >= (lam - q) / (lam - q2)
    second_ok = Fraction(wf2.range, wf.range) >= (lam - q2) / (lam - q)
    if first_ok and second_ok:
        return 0
    return -1 if first_ok else 1


def _divisors(n: int) -> list[int]:
    out = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def _is_virtual(w: WindowSpec, ctx: CostContext) -> bool:
    return w == VIRTUAL_ROOT and w not in ctx.recurrence


def _better_candidate(best: FactorCandidate | None, cand: FactorCandidate) -> FactorCandidate:
    # strictly larger benefit wins; ties go to the coarser window for
    # deterministic plans (fewer instances, fewer crossing edges)
    if best is None or cand.delta > best.delta:
        return cand
    if cand.delta == best.delta and (cand.window.range, cand.window.slide) > (
        best.window.range,
        best.window.slide,
    ):
        return cand
    return best


def find_best_factor_covered(
    w: WindowSpec, downstreams, ctx: CostContext, exclude=frozenset()
) -> FactorCandidate | None:
    """Best auxiliary window between ``w`` and ``downstreams`` (overlap-tolerant feeds).

    Eligible slides divide the gcd of the downstream slides and are multiples
    of ``w``'s slide; eligible ranges are multiples of the slide strictly
    below the smallest downstream range.  Every candidate must be covered by
    ``w`` and cover every downstream.  Returns the candidate with the largest
    strictly positive benefit, or None.
    """
    ds = tuple(downstreams)
    if not ds:
        return None
    virtual = _is_virtual(w, ctx)
    taken = set(ctx.recurrence) | {VIRTUAL_ROOT} | set(exclude)
    s_d = gcd(*(d.slide for d in ds)) if len(ds) > 1 else ds[0].slide
    r_min = min(d.range for d in ds)
    best: FactorCandidate | None = None
    for s_f in _divisors(s_d):
        if s_f % w.slide != 0:
            continue
        for r_f in range(s_f, r_min, s_f):
            wf = WindowSpec(r_f, s_f)
            if wf in taken:
                continue
            if not covers(wf, w):
                continue
            if not all(covers(d, wf) for d in ds):
                continue
            delta = _net_benefit(w, ds, wf, ctx, virtual)
            if delta > 0:
                best = _better_candidate(best, FactorCandidate(wf, delta))
    return best


def find_best_factor_partitioned(
    w: WindowSpec, downstreams, ctx: CostContext, exclude=frozenset()
) -> FactorCandidate | None:
    """Best tumbling auxiliary window under disjoint-feed sharing.

    Candidate ranges are the divisors of the gcd of the downstream ranges
    that are multiples of the target's range (none exist when the gcd is the
    target's range itself).  Candidates must actually partition every
    downstream, pass the benefit test, and survive dependent-candidate
    pruning: whenever one candidate covers another, the finer one is dropped,
    since feeding the coarser through it would be the no-benefit
    single-tumbling-downstream case.  The survivors are compared pairwise by
    the closed form, falling back to exact benefits outside its domain.
    """
    ds = tuple(downstreams)
    if not ds:
        return None
    if not w.tumbling:
        raise ValueError("partitioned-feed factor search needs a tumbling target")
    virtual = _is_virtual(w, ctx)
    taken = set(ctx.recurrence) | {VIRTUAL_ROOT} | set(exclude)
    lam = lambda_value(ds, ctx)
    r_d = gcd(*(d.range for d in ds)) if len(ds) > 1 else ds[0].range
    if r_d == w.range:
        return None
    candidates = []
    for r_f in _divisors(r_d):
        if r_f % w.range != 0:
            continue
        wf = WindowSpec(r_f, r_f)
        if wf in taken:
            continue
        if not all(partitions(d, wf) and d != wf for d in ds):
            continue
        if partition_benefit_check(wf, w, ds, lam, ctx):
            candidates.append(wf)
    # drop any candidate that covers another candidate (keep the coarsest)
    independent = [
        wf
        for wf in candidates
        if not any(other != wf and covers(other, wf) for other in candidates)
    ]
    best: WindowSpec | None = None
    for wf in independent:
        if best is None:
            best = wf
            continue
        try:
            order = compare_independent(wf, best, lam, w.range)
        except FactorComparisonError:
            order = -1 if _net_benefit(w, ds, wf, ctx, virtual) > _net_benefit(
                w, ds, best, ctx, virtual
            ) else 1
        if order < 0 or (order == 0 and (wf.range, wf.slide) > (best.range, best.slide)):
            best = wf
    if best is None:
        return None
    delta = _net_benefit(w, ds, best, ctx, virtual)
    if delta <= 0:
        return None
    return FactorCandidate(best, delta)


def min_cost_graph_with_factors(windows, func: AggFunc, eta: int = 1) -> MinCostGraph:
    """Min-cost forest with auxiliary windows inserted where they pay off.

    Sweeps the min-cost forest once, top down: the virtual unit-tick root
    first (its downstream set is the raw-fed roots), then every query window
    in input order, each with the windows it currently feeds.  Each inserted
    factor reads its target and feeds the target's former children; a final
    cost pass over the expanded graph re-picks every node's cheapest feed,
    and factors that end up feeding nothing are dropped.  Total cost is never
    above the factor-free optimum.
    """
    base = min_cost_graph(windows, func, eta)
    ctx = cost_context(base.nodes, eta)
    finder = (
        find_best_factor_covered
        if base.sharing is Sharing.COVERED_BY
        else find_best_factor_partitioned
    )

    inserted: list[tuple[WindowSpec, FactorCandidate, tuple[WindowSpec, ...]]] = []
    extra: set[WindowSpec] = set()
    sweep: list[WindowSpec | None] = [None] + list(base.nodes)
    for t in sweep:
        kids = tuple(base.children(t))
        if not kids:
            continue
        target = VIRTUAL_ROOT if t is None else t
        cand = finder(target, kids, ctx, exclude=frozenset(extra))
        if cand is not None:
            inserted.append((target, cand, kids))
            extra.add(cand.window)

    # final revise-and-prune pass over query edges plus the inserted links
    full_edges = build_coverage_graph(base.nodes, func).edges
    options: dict[WindowSpec, list[WindowSpec]] = {
        w: [a for a, b in full_edges if b == w] for w in base.nodes
    }
    factor_nodes: list[WindowSpec] = []
    for target, cand, kids in inserted:
        wf = cand.window
        factor_nodes.append(wf)
        virtual = _is_virtual(target, ctx)
        options[wf] = [] if virtual else [target]
        for kid in kids:
            options[kid].append(wf)

    all_nodes = tuple(base.nodes) + tuple(factor_nodes)

    def n_of(w):
        return ctx.recurrence[w] if w in ctx.recurrence else recurrence_count(w, ctx.period)

    upstream, cost = _cost_pass(all_nodes, options, n_of, eta)

    # a factor no one reads only adds cost; drop it
    factors = set(factor_nodes)
    while True:
        consumed = {up for up in upstream.values() if up is not None}
        dead = [wf for wf in factors if wf not in consumed]
        if not dead:
            break
        for wf in dead:
            factors.discard(wf)
            del upstream[wf]
            del cost[wf]
    kept_nodes = tuple(w for w in all_nodes if w in upstream)
    kept_edges = tuple(
        (up, down)
        for down in kept_nodes
        for up in options[down]
        if up in upstream
    )

    return MinCostGraph(
        sharing=base.sharing,
        eta=eta,
        period=ctx.period,
        nodes=kept_nodes,
        upstream=upstream,
        node_cost=cost,
        naive_cost=base.naive_cost,
        edges=kept_edges,
        factors=frozenset(factors),
        factor_benefit={cand.window: cand.delta for _, cand, _ in inserted if cand.window in factors},
    )
