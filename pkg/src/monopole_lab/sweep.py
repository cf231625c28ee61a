"""Tabular results and deterministic CSV/JSON export.

The data section (columns + rows) is byte-reproducible for identical
configurations; volatile fields such as wall-clock time live in metadata
only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__version__ = "0.1.0"


def _fmt(x: float) -> str:
    """Format a float with 17 significant digits (exact round-trip)."""
    return format(float(x), ".17g")


@dataclass
class SweepResult:
    """Named columns, numeric rows, and a free-form metadata record."""

    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        self.rows = [tuple(float(x) for x in row) for row in self.rows]
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length does not match column count")

    def to_csv(self) -> bytes:
        lines = [",".join(self.columns)]
        lines += [",".join(_fmt(x) for x in row) for row in self.rows]
        return ("\n".join(lines) + "\n").encode()

    def to_json(self) -> bytes:
        # rows are assembled by hand so every number is printed at 17
        # significant digits regardless of json's float repr
        meta = json.dumps(self.metadata, sort_keys=True)
        cols = json.dumps(list(self.columns))
        rows = ",".join(
            "[" + ",".join(_fmt(x) for x in row) + "]" for row in self.rows)
        return (f'{{"metadata":{meta},"columns":{cols},"rows":[{rows}]}}\n'
                ).encode()

    @staticmethod
    def from_json(data: bytes) -> "SweepResult":
        obj = json.loads(data)
        return SweepResult(columns=tuple(obj["columns"]), rows=obj["rows"],
                           metadata=obj["metadata"])


def export(result: SweepResult, fmt: str) -> bytes:
    if fmt == "csv":
        return result.to_csv()
    if fmt == "json":
        return result.to_json()
    raise ValueError(f"unsupported format {fmt!r}; use 'csv' or 'json'")
