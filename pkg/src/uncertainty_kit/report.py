"""Report rows and their CSV / JSON serialization.

Floats are written with 17 significant digits so values round-trip exactly.
Column order is fixed by the row type.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, NamedTuple, Sequence, TextIO

import numpy as np

FORMATS = ("csv", "json")


class ReportRow(NamedTuple):
    relation_id: str
    dim: int
    seed: int
    lhs: float
    rhs: float
    slack: float
    saturated: bool
    wall_time_micros: int


REPORT_COLUMNS = ReportRow._fields


def _plain(value):
    """Convert numpy scalars to builtins; reject non-finite floats."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in report")
        return value
    return value


def format_cell(value) -> str:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render(rows: Iterable[NamedTuple], columns: Sequence[str], fmt: str = "csv") -> str:
    """Serialize rows (named tuples with the given fields) to text."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    rows = list(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(getattr(row, c)) for c in columns])
        return buf.getvalue()
    doc = {"columns": list(columns), "rows": [{c: _plain(getattr(row, c)) for c in columns} for row in rows]}
    return json.dumps(doc, indent=1) + "\n"


def write_report(rows, columns, fmt: str, out: str | TextIO) -> None:
    """Write to a path, or to an open text stream."""
    text = render(rows, columns, fmt)
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
