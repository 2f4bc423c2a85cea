"""Sampled univariate functions: validation, IO, genericity, critical points.

A :class:`TimeSeries` holds strictly increasing timestamps and finite sample
values, interpreted as a piecewise-linear function.  Everything downstream
(bars, merge trees, automata runs) assumes a *generic* series: all local
extreme values pairwise distinct.  Plateaus (equal consecutive samples) are
collapsed to their leftmost sample before extrema are extracted, which
preserves sublevel-set topology.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstantSeriesError, NonGenericError, ParseError, ValidationError

__all__ = [
    "TimeSeries",
    "CriticalPoint",
    "CriticalSequence",
    "load_csv",
    "save_csv",
    "load_json",
    "save_json",
    "make_generic",
    "critical_points",
    "augment",
    "is_augmented",
]

# Relative offset used by augment(); floor keeps degenerate ranges usable.
AUGMENT_RELATIVE_OFFSET = 0.01
AUGMENT_MIN_OFFSET = 1e-9


@dataclass(frozen=True)
class TimeSeries:
    """Ordered samples of a piecewise-linear function.

    Invariants (checked on construction): times strictly increasing, same
    length as values, everything finite.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or values.ndim != 1:
            raise ValidationError("times and values must be one-dimensional")
        if len(times) != len(values):
            raise ValidationError(
                f"length mismatch: {len(times)} times vs {len(values)} values"
            )
        if len(times) == 0:
            raise ValidationError("empty series")
        if not (np.isfinite(times).all() and np.isfinite(values).all()):
            raise ValidationError("times and values must be finite")
        if len(times) > 1 and not (np.diff(times) > 0).all():
            raise ValidationError("times must be strictly increasing")
        times.setflags(write=False)
        values.setflags(write=False)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_values(cls, values: Sequence[float], t0: float = 0.0, dt: float = 1.0) -> "TimeSeries":
        """Series on an integer-spaced grid, convenient for synthetic inputs."""
        values = np.asarray(values, dtype=np.float64)
        return cls(t0 + dt * np.arange(len(values)), values)

    def collapse_plateaus(self) -> tuple[np.ndarray, np.ndarray]:
        """Values with consecutive duplicates removed, plus the kept indices
        (leftmost sample of each plateau)."""
        keep = np.ones(len(self.values), dtype=bool)
        keep[1:] = np.diff(self.values) != 0
        idx = np.flatnonzero(keep)
        return self.values[idx], idx


@dataclass(frozen=True)
class CriticalPoint:
    index: int
    time: float
    value: float
    kind: str  # "min" | "max"


@dataclass(frozen=True)
class CriticalSequence:
    """Interior local extrema plus the two boundary entries, in time order.

    Kinds strictly alternate; values at consecutive entries differ.
    """

    points: tuple[CriticalPoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def interior(self) -> tuple[CriticalPoint, ...]:
        return self.points[1:-1]

    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])


def _extrema(series: TimeSeries) -> tuple[list[CriticalPoint], np.ndarray, np.ndarray]:
    """Critical points (boundaries included) of the plateau-collapsed series.

    No genericity check; shared by `critical_points` and `make_generic`.
    Raises on constant input.
    """
    vals, idx = series.collapse_plateaus()
    if len(vals) < 2:
        raise ConstantSeriesError("constant series has no critical structure")
    signs = np.sign(np.diff(vals))  # nonzero after collapse
    pts = [
        CriticalPoint(
            int(idx[0]), float(series.times[idx[0]]), float(vals[0]),
            "min" if signs[0] > 0 else "max",
        )
    ]
    turns = np.flatnonzero(signs[1:] != signs[:-1]) + 1
    for j in turns:
        kind = "max" if signs[j - 1] > 0 else "min"
        pts.append(CriticalPoint(int(idx[j]), float(series.times[idx[j]]), float(vals[j]), kind))
    pts.append(
        CriticalPoint(
            int(idx[-1]), float(series.times[idx[-1]]), float(vals[-1]),
            "max" if signs[-1] > 0 else "min",
        )
    )
    return pts, vals, idx


def critical_points(series: TimeSeries) -> CriticalSequence:
    """Alternating extrema of a generic series, boundaries included.

    Plateaus are collapsed to their leftmost index.  Raises
    :class:`NonGenericError` when extreme values tie and
    :class:`ConstantSeriesError` on constant input.
    """
    pts, _, _ = _extrema(series)
    vals = [p.value for p in pts]
    if len(set(vals)) != len(vals):
        raise NonGenericError("tied extreme values; run make_generic first")
    return CriticalSequence(tuple(pts))


def make_generic(series: TimeSeries, epsilon: float) -> TimeSeries:
    """Perturb tied extreme values so all become pairwise distinct.

    Deterministic tie-break: within a group of equal extreme values the
    entry with the smallest index keeps its value, each later entry is
    lowered by one more multiple of ``epsilon``.  Identity on series that
    are already generic.

    ``epsilon`` must be smaller than half the minimum nonzero gap between
    distinct sample values, and small enough that no perturbed group
    crosses that half-gap; otherwise the relative order of distinct values
    could change and a :class:`ValidationError` is raised.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    pts, _, _ = _extrema(series)
    values = [p.value for p in pts]
    if len(set(values)) == len(values):
        return series

    distinct = np.unique(series.values)
    gaps = np.diff(distinct)
    min_gap = float(gaps.min()) if len(gaps) else np.inf
    if epsilon >= min_gap / 2:
        raise ValidationError(
            f"epsilon {epsilon!r} too large: must be below half the minimum "
            f"value gap {min_gap!r}"
        )

    groups: dict[float, list[CriticalPoint]] = {}
    for p in pts:
        groups.setdefault(p.value, []).append(p)
    new_values = series.values.copy()
    for tied in groups.values():
        if len(tied) < 2:
            continue
        if (len(tied) - 1) * epsilon >= min_gap / 2:
            raise ValidationError(
                f"epsilon {epsilon!r} too large for a tie group of size "
                f"{len(tied)}: perturbation would reorder distinct values"
            )
        for k, p in enumerate(sorted(tied, key=lambda q: q.index)):
            if k == 0:
                continue
            # lower the whole plateau run of this extremum
            i = p.index
            while i < len(new_values) and series.values[i] == p.value:
                new_values[i] = p.value - k * epsilon
                i += 1
    return TimeSeries(series.times, new_values)


def augment(series: TimeSeries) -> TimeSeries:
    """Prepend a value strictly below and append one strictly above all
    samples, so the series runs from its global minimum to its global
    maximum.  Offset is 1% of the value range with an absolute floor.

    Not idempotent: augmenting twice widens the range again.
    """
    values = series.values
    lo, hi = float(values.min()), float(values.max())
    offset = max(AUGMENT_RELATIVE_OFFSET * (hi - lo), AUGMENT_MIN_OFFSET)
    times = series.times
    dt_first = float(times[1] - times[0]) if len(times) > 1 else 1.0
    dt_last = float(times[-1] - times[-2]) if len(times) > 1 else 1.0
    new_times = np.concatenate(([times[0] - dt_first], times, [times[-1] + dt_last]))
    new_values = np.concatenate(([lo - offset], values, [hi + offset]))
    return TimeSeries(new_times, new_values)


def is_augmented(series: TimeSeries) -> bool:
    """True when the first sample is the strict global minimum and the last
    the strict global maximum."""
    v = series.values
    if len(v) < 2:
        return False
    return bool(v[0] < v[1:].min() and v[-1] > v[:-1].max())


# ---------------------------------------------------------------------------
# IO: CSV with two columns time,value (header optional) and the JSON schema
# {"times": [...], "values": [...]}.  Decimal output uses 17 significant
# digits so round trips are bit exact.
# ---------------------------------------------------------------------------

def _parse_rows(rows: Iterable[Sequence[str]], time_column: int, value_column: int) -> TimeSeries:
    times: list[float] = []
    values: list[float] = []
    first = True
    for lineno, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        needed = max(time_column, value_column) + 1
        if len(row) < needed:
            raise ParseError(f"row {lineno}: expected at least {needed} columns, got {len(row)}")
        try:
            t = float(row[time_column])
            v = float(row[value_column])
        except ValueError:
            if first:
                first = False  # header row
                continue
            raise ParseError(f"row {lineno}: non-numeric entry {row!r}") from None
        if np.isnan(t) or np.isnan(v):
            raise ParseError(f"row {lineno}: NaN is not a valid sample")
        first = False
        times.append(t)
        values.append(v)
    if len(times) < 2:
        raise ParseError("need at least 2 data rows")
    try:
        return TimeSeries(np.array(times), np.array(values))
    except ValidationError as exc:
        raise ValidationError(f"invalid series: {exc}") from exc


def load_csv(path, time_column: int = 0, value_column: int = 1) -> TimeSeries:
    """Read a `time,value` CSV (UTF-8, '.' decimal separator, header optional)."""
    with open(path, newline="", encoding="utf-8") as fh:
        return _parse_rows(csv.reader(fh), time_column, value_column)


def loads_csv(text: str, time_column: int = 0, value_column: int = 1) -> TimeSeries:
    return _parse_rows(csv.reader(io.StringIO(text)), time_column, value_column)


def save_csv(series: TimeSeries, path, header: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(dumps_csv(series, header=header))


def dumps_csv(series: TimeSeries, header: bool = True) -> str:
    out = ["time,value"] if header else []
    out.extend(
        "%.17g,%.17g" % (t, v) for t, v in zip(series.times, series.values)
    )
    return "\n".join(out) + "\n"


def load_json(path) -> TimeSeries:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return series_from_json_dict(doc)


def series_from_json_dict(doc) -> TimeSeries:
    if not isinstance(doc, dict) or "times" not in doc or "values" not in doc:
        raise ParseError('series JSON must be {"times": [...], "values": [...]}')
    return TimeSeries(np.asarray(doc["times"], dtype=float), np.asarray(doc["values"], dtype=float))


def series_to_json_dict(series: TimeSeries) -> dict:
    return {"times": series.times.tolist(), "values": series.values.tolist()}


def save_json(series: TimeSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(series_to_json_dict(series), fh)
        fh.write("\n")
