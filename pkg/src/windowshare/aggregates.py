"""Aggregate functions, their sharing classification, and sub-aggregate algebra.

MIN/MAX/SUM/COUNT combine sub-results with a single function and AVG with a
(sum, count) pair, so all five can be rebuilt from per-piece partial results.
MIN and MAX additionally tolerate overlapping pieces, which is what lets them
reuse partials from hopping windows; SUM/COUNT/AVG need disjoint pieces.
MEDIAN has no bounded partial form and is always evaluated from raw values.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "AggFunc",
    "Classification",
    "Sharing",
    "classification",
    "sharing_semantics",
    "SubAggregate",
    "make_sub",
    "merge",
    "finalize",
]


class AggFunc(str, Enum):
    MIN = "MIN"
    MAX = "MAX"
    SUM = "SUM"
    COUNT = "COUNT"
    AVG = "AVG"
    MEDIAN = "MEDIAN"


class Classification(Enum):
    DISTRIBUTIVE = "distributive"
    ALGEBRAIC = "algebraic"
    HOLISTIC = "holistic"


class Sharing(str, Enum):
    """How partial results of one window may feed another window."""

    COVERED_BY = "covered_by"        # pieces may overlap (MIN/MAX)
    PARTITIONED_BY = "partitioned_by"  # pieces must be disjoint (SUM/COUNT/AVG)
    NONE = "none"                    # no sharing; evaluate each window from raw events


_CLASS = {
    AggFunc.MIN: Classification.DISTRIBUTIVE,
    AggFunc.MAX: Classification.DISTRIBUTIVE,
    AggFunc.SUM: Classification.DISTRIBUTIVE,
    AggFunc.COUNT: Classification.DISTRIBUTIVE,
    AggFunc.AVG: Classification.ALGEBRAIC,
    AggFunc.MEDIAN: Classification.HOLISTIC,
}

_SHARING = {
    AggFunc.MIN: Sharing.COVERED_BY,
    AggFunc.MAX: Sharing.COVERED_BY,
    AggFunc.SUM: Sharing.PARTITIONED_BY,
    AggFunc.COUNT: Sharing.PARTITIONED_BY,
    AggFunc.AVG: Sharing.PARTITIONED_BY,
    AggFunc.MEDIAN: Sharing.NONE,
}


def classification(func: AggFunc) -> Classification:
    return _CLASS[AggFunc(func)]


def sharing_semantics(func: AggFunc) -> Sharing:
    return _SHARING[AggFunc(func)]


@dataclass(frozen=True)
class SubAggregate:
    """Partial result of one aggregate over one slice of events.

    Payload by function: scalar for MIN/MAX/SUM, integer for COUNT, and a
    (sum, count) pair for AVG.
    """

    func: AggFunc
    data: float | int | tuple[float, int]


def make_sub(func: AggFunc, value: float) -> SubAggregate:
    """Sub-aggregate of a single raw value."""
    func = AggFunc(func)
    if func is AggFunc.COUNT:
        return SubAggregate(func, 1)
    if func is AggFunc.AVG:
        return SubAggregate(func, (float(value), 1))
    if func is AggFunc.MEDIAN:
        raise ValueError("MEDIAN has no bounded sub-aggregate; aggregate raw values instead")
    return SubAggregate(func, float(value))


def merge(func: AggFunc, a: SubAggregate, b: SubAggregate) -> SubAggregate:
    func = AggFunc(func)
    if a.func is not func or b.func is not func:
        raise ValueError(f"cannot merge {a.func} / {b.func} sub-aggregates as {func}")
    if func is AggFunc.MIN:
        return SubAggregate(func, min(a.data, b.data))
    if func is AggFunc.MAX:
        return SubAggregate(func, max(a.data, b.data))
    if func in (AggFunc.SUM, AggFunc.COUNT):
        return SubAggregate(func, a.data + b.data)
    if func is AggFunc.AVG:
        return SubAggregate(func, (a.data[0] + b.data[0], a.data[1] + b.data[1]))
    raise ValueError(f"{func} sub-aggregates cannot be merged")


def finalize(func: AggFunc, sub: SubAggregate) -> float:
    func = AggFunc(func)
    if sub.func is not func:
        raise ValueError(f"cannot finalize {sub.func} sub-aggregate as {func}")
    if func is AggFunc.AVG:
        total, count = sub.data
        if count < 1:
            raise ValueError("AVG sub-aggregate with zero count")
        return total / count
    return sub.data
