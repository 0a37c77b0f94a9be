"""Event streams (columnar) and the CSV formats for events and results.

Event CSV:  header ``ts,key,value``; ts is an unsigned integer tick, key a
string without commas, value a decimal float.
Result CSV: header ``window_id,start,end,key,value`` where ``window_id`` is
the window label ``<range>x<slide>`` so results from different plans over the
same query line up.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Event",
    "EventStream",
    "StreamFormatError",
    "read_events_csv",
    "write_events_csv",
    "write_results_csv",
]


class StreamFormatError(ValueError):
    """Malformed event/result CSV; message carries the line number."""


@dataclass(frozen=True)
class Event:
    ts: int
    key: str
    value: float


class EventStream:
    """Time-ordered events as parallel arrays, with keys dictionary-encoded."""

    def __init__(self, ts: np.ndarray, key_codes: np.ndarray, values: np.ndarray,
                 key_table: tuple[str, ...]):
        self.ts = np.asarray(ts, dtype=np.int64)
        self.key_codes = np.asarray(key_codes, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        self.key_table = tuple(key_table)
        if not (len(self.ts) == len(self.key_codes) == len(self.values)):
            raise ValueError("ts/key/value arrays must have equal length")

    def __len__(self) -> int:
        return len(self.ts)

    @property
    def n_keys(self) -> int:
        return len(self.key_table)

    @classmethod
    def from_events(cls, events) -> "EventStream":
        events = list(events)
        table: dict[str, int] = {}
        codes = np.empty(len(events), dtype=np.int64)
        ts = np.empty(len(events), dtype=np.int64)
        values = np.empty(len(events), dtype=np.float64)
        for i, e in enumerate(events):
            ts[i] = e.ts
            values[i] = e.value
            codes[i] = table.setdefault(e.key, len(table))
        return cls(ts, codes, values, tuple(table))

    def events(self):
        for t, k, v in zip(self.ts, self.key_codes, self.values):
            yield Event(int(t), self.key_table[k], float(v))


def coerce_stream(stream) -> EventStream:
    if isinstance(stream, EventStream):
        return stream
    return EventStream.from_events(stream)


def read_events_csv(path) -> EventStream:
    ts, keys, values = [], [], []
    table: dict[str, int] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["ts", "key", "value"]:
            raise StreamFormatError(f"{path}:1: expected header ts,key,value, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise StreamFormatError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                t = int(row[0])
                v = float(row[2])
            except ValueError as e:
                raise StreamFormatError(f"{path}:{lineno}: {e}") from e
            if t < 0:
                raise StreamFormatError(f"{path}:{lineno}: negative timestamp {t}")
            ts.append(t)
            keys.append(table.setdefault(row[1], len(table)))
            values.append(v)
    return EventStream(
        np.array(ts, dtype=np.int64),
        np.array(keys, dtype=np.int64),
        np.array(values, dtype=np.float64),
        tuple(table),
    )


def write_events_csv(path, stream: EventStream) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ts", "key", "value"])
        for t, k, v in zip(stream.ts, stream.key_codes, stream.values):
            writer.writerow([int(t), stream.key_table[k], repr(float(v))])


def write_results_csv(path, results) -> None:
    """``results`` is a ResultSet (see engine module) or an iterable of rows."""
    rows = results.rows() if hasattr(results, "rows") else results
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["window_id", "start", "end", "key", "value"])
        for r in rows:
            writer.writerow([r.window.label, r.start, r.end, r.key, repr(float(r.value))])
