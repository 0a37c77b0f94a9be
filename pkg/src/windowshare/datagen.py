"""Workload generators: window sets and constant-rate synthetic streams.

Window sets come in two flavors.  The random generator draws each window
independently: tumbling windows take a seed range r0 and a uniform multiple
r in {2*r0, ..., k*r0}; hopping windows take a seed slide s0, a uniform
multiple s, and fix range = 2*slide.  The sequential generator walks the
multiples 2, 3, ... in order instead, which mimics dashboards asking for the
same aggregate at regularly stepped horizons and yields much more overlap.

Everything is a pure function of its parameters: the PCG64 generator seeded
from ``GenParams.seed`` makes window sets and streams reproducible across
platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .streams import EventStream
from .windows import WindowSpec

__all__ = ["GenParams", "GenerationError", "random_windows", "sequential_windows",
           "constant_rate_stream", "VALUE_GRID"]

#: Stream values are drawn uniformly from [0, 100) on this grid so that
#: float64 sums of any association order are exact (no rounding at any
#: partial sum); plan equivalence checks can then demand bit equality.
VALUE_GRID = 2.0**-20

_RETRIES_PER_WINDOW = 1000


class GenerationError(RuntimeError):
    """The requested window set cannot be drawn (space too small)."""


@dataclass(frozen=True)
class GenParams:
    """Knobs for the window-set generators.

    ``seed_slides`` feed hopping sets, ``seed_ranges`` tumbling ones;
    ``slide_multiplier`` / ``range_multiplier`` bound the drawn multiples
    (inclusive); ``count`` is the set size.
    """

    count: int
    tumbling: bool = True
    seed_slides: tuple[int, ...] = (5, 10, 20)
    seed_ranges: tuple[int, ...] = (2, 5, 10)
    slide_multiplier: int = 50
    range_multiplier: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.slide_multiplier < 2 or self.range_multiplier < 2:
            raise ValueError("multipliers must be at least 2")
        if not self.seed_slides or not self.seed_ranges:
            raise ValueError("seed lists must be non-empty")
        if any(x < 1 for x in self.seed_slides + self.seed_ranges):
            raise ValueError("seeds must be positive ticks")


def random_windows(params: GenParams) -> tuple[WindowSpec, ...]:
    """Draw ``count`` distinct windows; duplicates are redrawn (bounded retries)."""
    rng = np.random.default_rng(params.seed)
    out: list[WindowSpec] = []
    chosen: set[WindowSpec] = set()
    for _ in range(params.count):
        for _attempt in range(_RETRIES_PER_WINDOW):
            if params.tumbling:
                r0 = int(rng.choice(params.seed_ranges))
                r = r0 * int(rng.integers(2, params.range_multiplier + 1))
                w = WindowSpec(r, r)
            else:
                s0 = int(rng.choice(params.seed_slides))
                s = s0 * int(rng.integers(2, params.slide_multiplier + 1))
                w = WindowSpec(2 * s, s)
            if w not in chosen:
                break
        else:
            raise GenerationError(
                f"could not draw {params.count} distinct windows "
                f"(stuck after {_RETRIES_PER_WINDOW} retries)"
            )
        chosen.add(w)
        out.append(w)
    return tuple(out)


def sequential_windows(params: GenParams) -> tuple[WindowSpec, ...]:
    """Windows at the stepped multiples 2*x0, 3*x0, ... of one drawn seed."""
    rng = np.random.default_rng(params.seed)
    if params.tumbling:
        if params.count + 1 > params.range_multiplier:
            raise ValueError("count exceeds the sequential multiplier budget")
        r0 = int(rng.choice(params.seed_ranges))
        return tuple(WindowSpec(j * r0, j * r0) for j in range(2, params.count + 2))
    if params.count + 1 > params.slide_multiplier:
        raise ValueError("count exceeds the sequential multiplier budget")
    s0 = int(rng.choice(params.seed_slides))
    return tuple(WindowSpec(2 * j * s0, j * s0) for j in range(2, params.count + 2))


def constant_rate_stream(eta: int, horizon: int, keys: int = 1, seed: int = 0) -> EventStream:
    """Exactly ``eta`` events per tick for ts in [0, horizon), keys round-robin."""
    if eta < 1:
        raise ValueError("eta must be at least 1")
    if keys < 1:
        raise ValueError("keys must be at least 1")
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    n = eta * horizon
    rng = np.random.default_rng(seed)
    ts = np.repeat(np.arange(horizon, dtype=np.int64), eta)
    key_codes = np.arange(n, dtype=np.int64) % keys
    values = rng.integers(0, int(100 / VALUE_GRID), size=n).astype(np.float64) * VALUE_GRID
    key_table = tuple(f"k{i}" for i in range(keys))
    return EventStream(ts, key_codes, values, key_table)
