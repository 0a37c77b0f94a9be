"""Shared brute-force oracles, kept deliberately independent of the library's
arithmetic shortcuts: they materialize instances and check definitions
directly."""

import math

import pytest

from windowshare import WindowSpec


def instance_starts(w: WindowSpec, horizon: int) -> list[int]:
    return [a for a in range(0, max(horizon - w.range, -1) + 1, w.slide)]


def oracle_horizon(w1: WindowSpec, w2: WindowSpec) -> int:
    """Enough instances of w1 to see every alignment against w2's grid.

    The relation of instance m (start m*s1) to w2's grid depends only on
    m*s1 mod s2, which cycles with period lcm(s1, s2)/s1; two extra instances
    guard the boundaries.
    """
    cycle = math.lcm(w1.slide, w2.slide) // w1.slide
    return (cycle + 2) * w1.slide + w1.range


def contained_instances(start: int, end: int, w2: WindowSpec) -> list[tuple[int, int]]:
    """All instances [u, v) of w2 with start <= u and v <= end."""
    out = []
    u = 0
    while u + w2.range <= end:
        if u >= start:
            out.append((u, u + w2.range))
        u += w2.slide
    return out


def covers_oracle(w1: WindowSpec, w2: WindowSpec) -> bool:
    """Definition check: every instance [a, b) of w1 must have w2 instances
    [a, x) and [y, b) with x < b and y > a."""
    if w1 == w2:
        return True
    if w1.range <= w2.range:
        return False
    horizon = oracle_horizon(w1, w2)
    starts2 = set(instance_starts(w2, horizon + w2.range))
    for a in instance_starts(w1, horizon):
        b = a + w1.range
        head = a in starts2 and a + w2.range < b
        tail = (b - w2.range) in starts2 and b - w2.range > a
        if not (head and tail):
            return False
    return True


def partitions_oracle(w1: WindowSpec, w2: WindowSpec) -> bool:
    """Coverage plus per-instance disjoint tiling by the contained w2 instances."""
    if w1 == w2:
        return True
    if not covers_oracle(w1, w2):
        return False
    for a in instance_starts(w1, oracle_horizon(w1, w2)):
        b = a + w1.range
        pieces = contained_instances(a, b, w2)
        covered = 0
        prev_end = a
        for u, v in pieces:
            if u != prev_end:
                return False  # gap or overlap
            covered += v - u
            prev_end = v
        if prev_end != b or covered != w1.range:
            return False
    return True


def multiplier_oracle(w1: WindowSpec, w2: WindowSpec) -> int:
    """Cardinality of the contained-instance set of the first instance (the
    definition makes it instance-independent; the caller may check others)."""
    return len(contained_instances(0, w1.range, w2))


def divisor_windows(max_range: int) -> list[WindowSpec]:
    """Every window with range <= max_range and slide dividing the range."""
    out = []
    for r in range(1, max_range + 1):
        for s in range(1, r + 1):
            if r % s == 0:
                out.append(WindowSpec(r, s))
    return out


def ref_total_cost(nodes, edges, period: int, eta: int) -> int:
    """Independent min-cost total: per node, cheapest of the raw stream and
    any in-edge, costs written out from the definitions."""
    total = 0
    for w in nodes:
        n = 1 + (period - w.range) // w.slide
        best = n * eta * w.range
        for up, down in edges:
            if down == w:
                m = 1 + (w.range - up.range) // up.slide
                best = min(best, n * m)
        total += best
    return total


@pytest.fixture
def example5_windows():
    return (WindowSpec(10, 10), WindowSpec(20, 20), WindowSpec(30, 30), WindowSpec(40, 40))


@pytest.fixture
def example6_windows():
    return (WindowSpec(20, 20), WindowSpec(30, 30), WindowSpec(40, 40))
