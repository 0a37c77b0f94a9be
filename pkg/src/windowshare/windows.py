"""Windows on the integer tick axis: coverage, partitioning, interval math.

A window fires a half-open interval ``[m*slide, m*slide + range)`` for every
integer ``m >= 0``.  Two windows over the same stream overlap in structured
ways; the predicates here decide when one window's instances can be assembled
from another's, which is what makes sub-aggregate sharing legal downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "WindowSpec",
    "Interval",
    "NotCoveredError",
    "covers",
    "partitions",
    "covering_multiplier",
    "intervals",
    "covering_set",
    "as_window_set",
]


class NotCoveredError(ValueError):
    """An operation required a coverage relation that does not hold."""


@dataclass(frozen=True, order=True)
class WindowSpec:
    """A periodic window: ``range`` ticks long, firing every ``slide`` ticks.

    Both parameters are positive integer tick counts with ``slide <= range``
    and ``range % slide == 0``, so every instance spans a whole number of
    hops.  ``slide == range`` is a tumbling window, ``slide < range`` a
    hopping one.  All windows are aligned at tick 0.
    """

    range: int
    slide: int

    def __post_init__(self):
        if self.slide <= 0 or self.range <= 0:
            raise ValueError(f"window range/slide must be positive: {self.range}, {self.slide}")
        if self.slide > self.range:
            raise ValueError(f"slide {self.slide} exceeds range {self.range}")
        if self.range % self.slide != 0:
            raise ValueError(f"range {self.range} is not a multiple of slide {self.slide}")

    @property
    def tumbling(self) -> bool:
        return self.slide == self.range

    @property
    def label(self) -> str:
        """Stable window identifier, e.g. ``40x40`` for a 40-tick tumbling window."""
        return f"{self.range}x{self.slide}"

    def __repr__(self) -> str:
        return f"W({self.range},{self.slide})"


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open tick interval ``[start, end)``."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"bad interval [{self.start}, {self.end})")

    def __repr__(self) -> str:
        return f"[{self.start},{self.end})"


def covers(w1: WindowSpec, w2: WindowSpec) -> bool:
    """True when every instance of ``w1`` is a union of ``w2`` instances
    sharing its endpoints.

    Holds exactly when ``w1 == w2``, or ``w1`` is the longer window with
    ``slide1 % slide2 == 0`` and ``(range1 - range2) % slide2 == 0``.  The
    covering instances of a hopping ``w2`` may overlap each other.
    """
    if w1 == w2:
        return True
    return (
        w1.range > w2.range
        and w1.slide % w2.slide == 0
        and (w1.range - w2.range) % w2.slide == 0
    )


def partitions(w1: WindowSpec, w2: WindowSpec) -> bool:
    """True when ``covers(w1, w2)`` holds with pairwise-disjoint covering sets.

    Requires ``w2`` to be tumbling (otherwise consecutive covering instances
    overlap), plus ``slide1`` and ``range1`` both multiples of ``slide2``.
    """
    if w1 == w2:
        return True
    return (
        w1.range > w2.range
        and w2.tumbling
        and w1.slide % w2.slide == 0
        and w1.range % w2.slide == 0
    )


def covering_multiplier(w1: WindowSpec, w2: WindowSpec) -> int:
    """Number of ``w2`` instances needed to assemble one ``w1`` instance.

    Equals ``1 + (range1 - range2) / slide2``; the same count applies to
    every instance of ``w1``.  Requires ``covers(w1, w2)``.
    """
    if not covers(w1, w2):
        raise NotCoveredError(f"{w1} is not covered by {w2}")
    return 1 + (w1.range - w2.range) // w2.slide


def intervals(w: WindowSpec, horizon: int) -> list[Interval]:
    """All instances of ``w`` that close by ``horizon``, in start order."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    out = []
    start = 0
    while start + w.range <= horizon:
        out.append(Interval(start, start + w.range))
        start += w.slide
    return out


def covering_set(iv: Interval, w2: WindowSpec) -> list[Interval]:
    """The ``w2`` instances contained in ``iv`` whose union is exactly ``iv``.

    Raises :class:`NotCoveredError` when the contained instances do not tile
    ``iv`` end to end, i.e. when the window owning ``iv`` is not covered by
    ``w2``.
    """
    s, r = w2.slide, w2.range
    m_lo = -(-iv.start // s)  # ceil
    m_hi = (iv.end - r) // s
    out = [Interval(m * s, m * s + r) for m in range(m_lo, m_hi + 1)]
    if not out or out[0].start != iv.start or out[-1].end != iv.end:
        raise NotCoveredError(f"{iv} has no covering set in {w2}")
    for prev, cur in zip(out, out[1:]):
        if cur.start > prev.end:
            raise NotCoveredError(f"{iv} has a gap at {prev.end} in {w2} instances")
    return out


def as_window_set(windows) -> tuple[WindowSpec, ...]:
    """Validate a window collection: non-empty, no duplicate (range, slide)."""
    ws = tuple(windows)
    if not ws:
        raise ValueError("window set is empty")
    seen = set()
    for w in ws:
        if not isinstance(w, WindowSpec):
            raise TypeError(f"not a WindowSpec: {w!r}")
        if w in seen:
            raise ValueError(f"duplicate window {w}")
        seen.add(w)
    return ws
