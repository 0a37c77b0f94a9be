"""How windows overlap: coverage, partitioning, and the covering multiplier.

A window W(range, slide) fires the intervals [m*slide, m*slide + range).
When every interval of a long window can be assembled from intervals of a
short window that share its endpoints, the long window is "covered" and can
be computed from the short window's partial results instead of raw events.
"""

from windowshare import (
    Interval,
    WindowSpec,
    covering_multiplier,
    covering_set,
    covers,
    intervals,
    partitions,
)

w_long = WindowSpec(10, 2)
w_short = WindowSpec(8, 2)

print(f"{w_long} fires {intervals(w_long, 14)} ...")
print(f"{w_short} fires {intervals(w_short, 14)} ...")
print()

print(f"covers({w_long}, {w_short}) = {covers(w_long, w_short)}")
print(f"  every {w_long} interval is a union of {covering_multiplier(w_long, w_short)} "
      f"{w_short} intervals:")
for iv in intervals(w_long, 14):
    print(f"  {iv} = union of {covering_set(iv, w_short)}")
print()

# Coverage is enough for MIN/MAX, but SUM needs the pieces to be disjoint:
# that is partitioning, and it requires the feeding window to be tumbling.
print(f"partitions({w_long}, {w_short}) = {partitions(w_long, w_short)}  "
      f"(pieces overlap: {w_short} is hopping)")
w40, w20 = WindowSpec(40, 40), WindowSpec(20, 20)
print(f"partitions({w40}, {w20}) = {partitions(w40, w20)}  "
      f"-> {w40} = union of {covering_set(Interval(0, 40), w20)}")
print()

# Coverage forms a partial order: chains of windows can feed one another.
chain = [WindowSpec(10, 10), WindowSpec(20, 20), WindowSpec(40, 40)]
for a in chain:
    for b in chain:
        if a != b and covers(b, a):
            print(f"{b} can be computed from {a} "
                  f"({covering_multiplier(b, a)} partial results per interval)")
