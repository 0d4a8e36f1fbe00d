"""State-level allocation-versus-need statistics.

Input is one record per state (states.csv)::

    state,bead_allocation,unconnected_households,acp_enrolled_households,total_households

"Unconnected households" is taken as given; whether it counts households
without available service or without a subscription depends on the data
source and is not resolved here.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import TextIO

import numpy as np

from .errors import (
    InsufficientDataError,
    InvalidRecordError,
    NoUnconnectedHouseholdsError,
    ParseError,
    SchemaError,
)

STATE_COLUMNS = (
    "state",
    "bead_allocation",
    "unconnected_households",
    "acp_enrolled_households",
    "total_households",
)


@dataclass(frozen=True)
class StateRecord:
    state: str
    bead_allocation: float
    unconnected_households: float
    acp_enrolled_households: float
    total_households: float

    def __post_init__(self):
        if not self.state:
            raise InvalidRecordError("state code must be non-empty")
        for name in STATE_COLUMNS[1:]:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidRecordError(f"{self.state}: {name} must be finite and >= 0")
        if self.acp_enrolled_households > self.total_households:
            raise InvalidRecordError(
                f"{self.state}: enrolled households exceed total households"
            )


def per_household_allocation(r: StateRecord) -> float:
    """BEAD dollars per unconnected household."""
    if r.unconnected_households <= 0:
        raise NoUnconnectedHouseholdsError(f"{r.state} has no unconnected households")
    return r.bead_allocation / r.unconnected_households


def enrollment_rate(r: StateRecord) -> float:
    """ACP enrolment as a percentage of all households."""
    if r.total_households <= 0:
        raise InvalidRecordError(f"{r.state} has no households")
    return 100.0 * r.acp_enrolled_households / r.total_households


class Metric(str, Enum):
    BEAD_ALLOCATION = "bead_allocation"
    ALLOCATION_PER_UNCONNECTED = "allocation_per_unconnected_household"
    ACP_ENROLLED = "acp_enrolled_households"
    ENROLLMENT_RATE = "enrollment_rate"
    UNCONNECTED = "unconnected_households"


def metric_value(r: StateRecord, metric: Metric | str) -> float:
    """Raises NoUnconnectedHouseholdsError / InvalidRecordError when undefined."""
    metric = Metric(metric)
    if metric is Metric.ALLOCATION_PER_UNCONNECTED:
        return per_household_allocation(r)
    if metric is Metric.ENROLLMENT_RATE:
        return enrollment_rate(r)
    return float(getattr(r, metric.value))


@dataclass(frozen=True)
class Ranking:
    metric: Metric
    ranked: tuple[tuple[str, float], ...]  # descending by value
    excluded: tuple[str, ...]  # states where the metric is undefined


def rank_states(records: Sequence[StateRecord], metric: Metric | str) -> Ranking:
    """Order states by ``metric``, largest first; ties keep input order."""
    metric = Metric(metric)
    defined, excluded = [], []
    for r in records:
        try:
            defined.append((r.state, metric_value(r, metric)))
        except (NoUnconnectedHouseholdsError, InvalidRecordError):
            excluded.append(r.state)
    defined.sort(key=lambda item: -item[1])
    return Ranking(metric, tuple(defined), tuple(excluded))


def average_ranks(values) -> np.ndarray:
    """1-based ranks, ties sharing the mean of the positions they span."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and sorted_vals[stop] == sorted_vals[start]:
            stop += 1
        ranks[order[start:stop]] = (start + stop + 1) / 2.0
        start = stop
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation (Pearson correlation of average ranks)."""
    rx, ry = average_ranks(x), average_ranks(y)
    if len(rx) != len(ry):
        raise InsufficientDataError("metric columns differ in length")
    dx, dy = rx - rx.mean(), ry - ry.mean()
    denom = np.sqrt((dx @ dx) * (dy @ dy))
    if denom == 0:
        raise InsufficientDataError("a metric is constant across states; correlation undefined")
    return float(np.clip((dx @ dy) / denom, -1.0, 1.0))


def rank_correlation(
    records: Sequence[StateRecord], x_metric: Metric | str, y_metric: Metric | str
) -> float:
    """Spearman correlation over states where both metrics are defined."""
    xs, ys = [], []
    for r in records:
        try:
            x, y = metric_value(r, x_metric), metric_value(r, y_metric)
        except (NoUnconnectedHouseholdsError, InvalidRecordError):
            continue
        xs.append(x)
        ys.append(y)
    if len(xs) < 3:
        raise InsufficientDataError(
            f"need at least 3 states with both metrics defined, got {len(xs)}"
        )
    return spearman(xs, ys)


def load_states(source: TextIO) -> list[StateRecord]:
    rows = [r for r in csv.reader(source) if r and any(c.strip() for c in r)]
    # Leading '#' lines document the data source.
    rows = [r for r in rows if not r[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError("states: file is empty")
    header = [c.strip() for c in rows[0]]
    missing = [c for c in STATE_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"states: missing column(s) {missing}")
    col = {name: header.index(name) for name in STATE_COLUMNS}
    records = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"states row {i}: expected {len(header)} cells, got {len(row)}")
        values = {}
        for name in STATE_COLUMNS[1:]:
            cell = row[col[name]].strip()
            try:
                values[name] = float(cell)
            except ValueError:
                raise ParseError(f"states row {i}, {name}: cannot parse {cell!r}") from None
        records.append(StateRecord(row[col["state"]].strip(), **values))
    return records
