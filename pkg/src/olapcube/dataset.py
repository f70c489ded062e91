"""CSV ingestion and export, plus access to the bundled sample files."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from os import PathLike
from pathlib import Path
from typing import TextIO

from .cube import DetailStore, FactTable, Schema, load_fact_table
from .errors import DomainError, IngestionError

__all__ = [
    "CsvDataset",
    "read_csv",
    "load_csv_facts",
    "load_csv_detail",
    "write_facts_csv",
    "write_rows_csv",
    "sample_path",
]

PathArg = str | PathLike[str]


@dataclass(frozen=True)
class CsvDataset:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def schema(self, measure: str | None = None) -> Schema:
        """Dimensions are every column but the measure (default: last column)."""
        if measure is None:
            measure = self.header[-1]
        if measure not in self.header:
            raise DomainError(f"measure column {measure!r} not in header {list(self.header)}")
        return Schema(tuple(c for c in self.header if c != measure), measure)

    def records(self) -> list[dict[str, str]]:
        return [dict(zip(self.header, row)) for row in self.rows]


def read_csv(source: PathArg | TextIO) -> CsvDataset:
    if isinstance(source, (str, PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    try:
        header = tuple(next(reader))
    except StopIteration:
        raise DomainError("CSV input has no header line") from None
    rows = []
    for i, row in enumerate(reader):
        if not row:
            continue
        if len(row) != len(header):
            raise IngestionError(i, f"expected {len(header)} fields, got {len(row)}")
        rows.append(tuple(row))
    return CsvDataset(header, tuple(rows))


def load_csv_facts(source: PathArg | TextIO, measure: str | None = None) -> FactTable:
    data = read_csv(source)
    return load_fact_table(data.records(), data.schema(measure))


def load_csv_detail(source: PathArg | TextIO) -> DetailStore:
    data = read_csv(source)
    return DetailStore(data.header, data.rows)


def write_rows_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_facts_csv(facts: FactTable) -> str:
    """Cells in key order, header = dimensions then measure."""
    return write_rows_csv(
        (*facts.schema.dimensions, facts.schema.measure),
        ((*key, value) for key, value in facts.sorted_items()),
    )


def sample_path(name: str) -> Path:
    """Path of a bundled sample: ``tabel1.csv``, ``tabel2.csv`` or ``drilldown.link``."""
    return Path(str(resources.files("olapcube") / "data" / name))
