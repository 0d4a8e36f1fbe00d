"""Inter-industry transaction tables: data model, CSV ingestion, validation.

Two CSV files describe one table::

    flows.csv    sector,<code_1>,...,<code_n>
                 <code_i>,z_i1,...,z_in
    vectors.csv  sector,final_demand,value_added,total_output[,name]

Sector order must agree between the two files.
"""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .errors import (
    EmptyGroupError,
    InvalidTableError,
    ParseError,
    SchemaError,
    SectorMismatchError,
    UnknownSectorError,
)
from .linalg import as_matrix, as_vector

logger = logging.getLogger(__name__)

DEFAULT_UNIT = "USD_millions"
DEFAULT_REL_TOL = 1e-6
VECTOR_COLUMNS = ("sector", "final_demand", "value_added", "total_output")
MAPPING_COLUMNS = ("source_code", "target_code", "target_name")

# Dollars per table currency unit.
UNIT_SCALES = {
    "USD": 1.0,
    "USD_thousands": 1e3,
    "USD_millions": 1e6,
    "USD_billions": 1e9,
}


def unit_scale(unit: str) -> float:
    try:
        return UNIT_SCALES[unit]
    except KeyError:
        raise SchemaError(
            f"unknown currency unit {unit!r}; expected one of {sorted(UNIT_SCALES)}"
        ) from None


@dataclass(frozen=True)
class Sector:
    code: str
    name: str = ""

    def __post_init__(self):
        if not self.code:
            raise InvalidTableError("sector code must be non-empty")
        if not self.name:
            object.__setattr__(self, "name", self.code)


@dataclass(frozen=True, eq=False)
class IoTable:
    """Balanced snapshot of an economy for one year.

    ``z[i, j]`` is the flow from sector i to sector j; ``f``, ``v`` and
    ``x`` are final demand, value added and total output. Balances are not
    checked here, see :func:`validate`.
    """

    sectors: tuple[Sector, ...]
    z: np.ndarray
    f: np.ndarray
    v: np.ndarray
    x: np.ndarray
    currency_unit: str = DEFAULT_UNIT
    year: int | None = None
    clamped_flows: int = 0

    def __post_init__(self):
        sectors = tuple(
            s if isinstance(s, Sector) else Sector(str(s)) for s in self.sectors
        )
        object.__setattr__(self, "sectors", sectors)
        n = len(sectors)
        codes = [s.code for s in sectors]
        if len(set(codes)) != n:
            dupes = sorted({c for c in codes if codes.count(c) > 1})
            raise InvalidTableError(f"duplicate sector codes: {dupes}")
        z = as_matrix(self.z, "z")
        if z.shape != (n, n):
            raise InvalidTableError(f"z has shape {z.shape}, expected {(n, n)}")
        vectors = {}
        for name in ("f", "v", "x"):
            vec = as_vector(getattr(self, name), name)
            if vec.shape != (n,):
                raise InvalidTableError(f"{name} has length {vec.size}, expected {n}")
            vectors[name] = vec
        if np.any(z < 0):
            i, j = np.argwhere(z < 0)[0]
            raise InvalidTableError(
                f"negative flow z[{codes[i]},{codes[j]}] = {z[i, j]}"
                " (load with clamp_negative=True to zero such entries)"
            )
        if np.any(vectors["v"] < 0):
            i = int(np.argmax(vectors["v"] < 0))
            raise InvalidTableError(f"negative value added for sector {codes[i]}")
        if np.any(vectors["x"] <= 0):
            i = int(np.argmax(vectors["x"] <= 0))
            raise InvalidTableError(f"sector {codes[i]} has non-positive total output")
        object.__setattr__(self, "z", z)
        for name, vec in vectors.items():
            object.__setattr__(self, name, vec)
        unit_scale(self.currency_unit)

    @property
    def n(self) -> int:
        return len(self.sectors)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(s.code for s in self.sectors)

    def index(self, code: str) -> int:
        for i, s in enumerate(self.sectors):
            if s.code == code:
                return i
        raise UnknownSectorError(f"unknown sector {code!r}")


@dataclass(frozen=True)
class Imbalance:
    sector: str
    kind: str  # "row" or "column"
    magnitude: float  # signed: accounted minus stated output


@dataclass(frozen=True)
class ValidationReport:
    rel_tol: float
    findings: tuple[Imbalance, ...] = field(default_factory=tuple)

    @property
    def is_balanced(self) -> bool:
        return not self.findings

    def to_dict(self) -> dict:
        return {
            "balanced": self.is_balanced,
            "rel_tol": self.rel_tol,
            "findings": [
                {"sector": f.sector, "kind": f.kind, "magnitude": f.magnitude}
                for f in self.findings
            ],
        }


def validate(t: IoTable, rel_tol: float = DEFAULT_REL_TOL) -> ValidationReport:
    """Check the row identity x = Z·1 + f and column identity x' = 1'Z + v'."""
    row_gap = t.z.sum(axis=1) + t.f - t.x
    col_gap = t.z.sum(axis=0) + t.v - t.x
    limit = rel_tol * t.x
    findings = []
    for i, code in enumerate(t.codes):
        if abs(row_gap[i]) > limit[i]:
            findings.append(Imbalance(code, "row", float(row_gap[i])))
        if abs(col_gap[i]) > limit[i]:
            findings.append(Imbalance(code, "column", float(col_gap[i])))
    return ValidationReport(rel_tol, tuple(findings))


def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{where}: cannot parse {text!r} as a number") from None
    if not np.isfinite(value):
        raise ParseError(f"{where}: non-finite value {text!r}")
    return value


def _rows(source: TextIO, label: str) -> tuple[list[str], list[list[str]]]:
    rows = [r for r in csv.reader(source) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError(f"{label}: file is empty")
    header = [c.strip() for c in rows[0]]
    return header, [[c.strip() for c in r] for r in rows[1:]]


def read_matrix_csv(source: TextIO, label: str = "matrix") -> tuple[list[str], np.ndarray]:
    """Read a square sector-by-sector matrix in the flows.csv layout."""
    header, body = _rows(source, label)
    if header[0] != "sector":
        raise SchemaError(f"{label}: first header cell must be 'sector', got {header[0]!r}")
    codes = header[1:]
    if not codes:
        raise SchemaError(f"{label}: header lists no sectors")
    if len(body) != len(codes):
        raise SectorMismatchError(
            f"{label}: header lists {len(codes)} sectors but there are {len(body)} rows"
        )
    values = np.empty((len(codes), len(codes)))
    for i, row in enumerate(body, start=2):
        if len(row) != len(codes) + 1:
            raise ParseError(f"{label} row {i}: expected {len(codes) + 1} cells, got {len(row)}")
        if row[0] != codes[i - 2]:
            raise SectorMismatchError(
                f"{label} row {i}: sector {row[0]!r} does not match column order {codes[i - 2]!r}"
            )
        for j, cell in enumerate(row[1:]):
            values[i - 2, j] = _parse_float(cell, f"{label} row {i}, column {codes[j]!r}")
    return codes, values


def read_matrix_blocks(source: TextIO) -> dict[str, tuple[list[str], np.ndarray]]:
    """Read the ``coefficients`` stdout layout: matrices headed by ``# <name>`` lines."""
    blocks: dict[str, list[str]] = {}
    current = None
    for line in source:
        if line.startswith("#"):
            current = line[1:].strip()
            blocks[current] = []
        elif current is None:
            if line.strip():
                raise ParseError("matrix blocks: data before the first '# <name>' line")
        else:
            blocks[current].append(line)
    return {
        name: read_matrix_csv(io.StringIO("".join(lines)), name)
        for name, lines in blocks.items()
    }


def write_matrix_csv(out: TextIO, codes: Sequence[str], m: np.ndarray) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["sector", *codes])
    for code, row in zip(codes, m):
        writer.writerow([code, *(repr(float(v)) for v in row)])


def load_table(
    flows_source: TextIO,
    vectors_source: TextIO,
    *,
    unit: str = DEFAULT_UNIT,
    year: int | None = None,
    clamp_negative: bool = False,
) -> IoTable:
    """Build an :class:`IoTable` from flows.csv and vectors.csv streams.

    Balances are not checked. With ``clamp_negative`` negative flows are set
    to zero and counted in ``IoTable.clamped_flows``.
    """
    codes, z = read_matrix_csv(flows_source, "flows")

    header, body = _rows(vectors_source, "vectors")
    missing = [c for c in VECTOR_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"vectors: missing column(s) {missing}")
    col = {name: header.index(name) for name in VECTOR_COLUMNS}
    vec_codes, names = [], []
    f, v, x = [], [], []
    for i, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ParseError(f"vectors row {i}: expected {len(header)} cells, got {len(row)}")
        vec_codes.append(row[col["sector"]])
        names.append(row[header.index("name")] if "name" in header else "")
        f.append(_parse_float(row[col["final_demand"]], f"vectors row {i}, final_demand"))
        v.append(_parse_float(row[col["value_added"]], f"vectors row {i}, value_added"))
        x.append(_parse_float(row[col["total_output"]], f"vectors row {i}, total_output"))
    if vec_codes != codes:
        if set(vec_codes) != set(codes):
            raise SectorMismatchError(
                f"sector sets differ: flows has {len(codes)} ({codes}),"
                f" vectors has {len(vec_codes)} ({vec_codes})"
            )
        raise SectorMismatchError("sector order differs between flows and vectors")

    clamped = 0
    if clamp_negative:
        negative = z < 0
        clamped = int(negative.sum())
        if clamped:
            logger.warning("clamped %d negative flow(s) to zero", clamped)
            z = np.where(negative, 0.0, z)
    return IoTable(
        sectors=tuple(Sector(c, n) for c, n in zip(codes, names)),
        z=z,
        f=np.array(f),
        v=np.array(v),
        x=np.array(x),
        currency_unit=unit,
        year=year,
        clamped_flows=clamped,
    )


def write_table(t: IoTable, flows_out: TextIO, vectors_out: TextIO) -> None:
    """Serialise ``t`` with full float precision (round-trips through load_table)."""
    write_matrix_csv(flows_out, t.codes, t.z)
    named = any(s.name != s.code for s in t.sectors)
    writer = csv.writer(vectors_out, lineterminator="\n")
    writer.writerow([*VECTOR_COLUMNS, "name"] if named else VECTOR_COLUMNS)
    for i, s in enumerate(t.sectors):
        row = [s.code, repr(float(t.f[i])), repr(float(t.v[i])), repr(float(t.x[i]))]
        writer.writerow([*row, s.name] if named else row)


def table_to_csv_strings(t: IoTable) -> tuple[str, str]:
    flows, vectors = io.StringIO(), io.StringIO()
    write_table(t, flows, vectors)
    return flows.getvalue(), vectors.getvalue()


def load_mapping(source: TextIO) -> dict[str, Sector]:
    """Read an aggregation mapping CSV ``source_code,target_code,target_name``."""
    header, body = _rows(source, "mapping")
    missing = [c for c in MAPPING_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"mapping: missing column(s) {missing}")
    col = {name: header.index(name) for name in MAPPING_COLUMNS}
    mapping: dict[str, Sector] = {}
    for i, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ParseError(f"mapping row {i}: expected {len(header)} cells, got {len(row)}")
        src = row[col["source_code"]]
        if src in mapping:
            raise ParseError(f"mapping row {i}: source {src!r} mapped twice")
        mapping[src] = Sector(row[col["target_code"]], row[col["target_name"]])
    return mapping


def aggregate_sectors(
    t: IoTable,
    mapping: Mapping[str, Sector | str],
    targets: Iterable[Sector | str] | None = None,
) -> IoTable:
    """Sum sectors into groups.

    Groups are the distinct targets in ``mapping`` (or ``targets`` when
    given), in first-appearance order. Every table sector must be mapped;
    a group that receives no table sector raises :class:`EmptyGroupError`.
    Entries in ``mapping`` for codes absent from the table are ignored.
    """
    def as_sector(s):
        return s if isinstance(s, Sector) else Sector(str(s))

    unmapped = [c for c in t.codes if c not in mapping]
    if unmapped:
        raise UnknownSectorError(f"sectors without a mapping target: {unmapped}")
    group_order: dict[str, Sector] = {}
    for s in map(as_sector, targets if targets is not None else mapping.values()):
        group_order.setdefault(s.code, s)
    groups = list(group_order)

    member = np.zeros((len(groups), t.n))
    for j, code in enumerate(t.codes):
        target = as_sector(mapping[code]).code
        if target not in group_order:
            raise UnknownSectorError(f"sector {code!r} maps to undeclared group {target!r}")
        member[groups.index(target), j] = 1.0
    empty = [g for g, row in zip(groups, member) if not row.any()]
    if empty:
        raise EmptyGroupError(f"aggregation groups with no member sectors: {empty}")

    return IoTable(
        sectors=tuple(group_order.values()),
        z=member @ t.z @ member.T,
        f=member @ t.f,
        v=member @ t.v,
        x=member @ t.x,
        currency_unit=t.currency_unit,
        year=t.year,
        clamped_flows=t.clamped_flows,
    )
