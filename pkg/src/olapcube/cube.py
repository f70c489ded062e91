"""Fact-table data model: schema, pre-aggregating ingestion and cell lookup."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from .errors import DomainError, IngestionError, check_u64

Key = tuple[str, ...]

_INTEGER = re.compile(r"[+-]?[0-9]+")


@dataclass(frozen=True)
class Schema:
    """Ordered dimension names plus the name of the additive measure."""

    dimensions: tuple[str, ...]
    measure: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        if not self.dimensions:
            raise DomainError("schema needs at least one dimension")
        if any(not d for d in self.dimensions) or not self.measure:
            raise DomainError("dimension and measure names must be non-empty")
        if len(set(self.dimensions)) != len(self.dimensions):
            raise DomainError(f"duplicate dimension names in {self.dimensions!r}")
        if self.measure in self.dimensions:
            raise DomainError(f"measure {self.measure!r} is also a dimension")

    @property
    def n(self) -> int:
        return len(self.dimensions)

    def index(self, dim: str) -> int:
        try:
            return self.dimensions.index(dim)
        except ValueError:
            raise DomainError(f"unknown dimension {dim!r}; schema has {list(self.dimensions)}") from None


@dataclass(frozen=True)
class FactTable:
    """The cube: one aggregated, non-negative measure per distinct full key.

    ``cells`` is read-only.  Build instances with :func:`load_fact_table` or
    :meth:`from_cells`.
    """

    schema: Schema
    cells: Mapping[Key, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", MappingProxyType(dict(self.cells)))

    @classmethod
    def from_cells(cls, schema: Schema, cells: Mapping[Key, int]) -> FactTable:
        for key, value in cells.items():
            if len(key) != schema.n:
                raise DomainError(f"key {key!r} has {len(key)} components, schema has {schema.n}")
            if value < 0:
                raise DomainError(f"negative measure {value} at {key!r}")
            check_u64(value, "measure")
        return cls(schema, cells)

    @property
    def total(self) -> int:
        return check_u64(sum(self.cells.values()), "total measure")

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactTable):
            return NotImplemented
        return self.schema == other.schema and dict(self.cells) == dict(other.cells)

    def sorted_items(self) -> list[tuple[Key, int]]:
        return sorted(self.cells.items())

    def to_rows(self) -> list[dict[str, Any]]:
        """Cells as records, in key order; the inverse of :func:`load_fact_table`."""
        dims = self.schema.dimensions
        return [{**dict(zip(dims, key)), self.schema.measure: value} for key, value in self.sorted_items()]


@dataclass(frozen=True)
class DetailStore:
    """Base records a drill-down resolves to (one string per column)."""

    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        if len(set(self.columns)) != len(self.columns):
            raise DomainError(f"duplicate detail column in {self.columns!r}")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise IngestionError(i, f"expected {len(self.columns)} values, got {len(row)}")


def _parse_measure(raw: Any, row_index: int) -> int:
    if isinstance(raw, int) and not isinstance(raw, bool):
        value = raw
    elif isinstance(raw, str) and _INTEGER.fullmatch(raw.strip()):
        value = int(raw.strip())
    else:
        raise IngestionError(row_index, f"measure {raw!r} is not an integer")
    if value < 0:
        raise IngestionError(row_index, f"measure {value} is negative")
    return check_u64(value, f"measure in row {row_index}")


def load_fact_table(rows: Iterable[Mapping[str, Any]], schema: Schema) -> FactTable:
    """Aggregate raw records into a :class:`FactTable`, summing duplicate keys."""
    cells: dict[Key, int] = {}
    for i, record in enumerate(rows):
        try:
            key = tuple(str(record[d]) for d in schema.dimensions)
            raw = record[schema.measure]
        except KeyError as exc:
            raise IngestionError(i, f"missing column {exc.args[0]!r}") from None
        value = _parse_measure(raw, i)
        cells[key] = check_u64(cells.get(key, 0) + value, f"measure sum for {key!r}")
    return FactTable(schema, cells)


def cell_value(facts: FactTable, key: Sequence[str]) -> int | None:
    """Aggregated measure at ``key``, or ``None`` when the cell is absent."""
    key = tuple(key)
    if len(key) != facts.schema.n:
        raise DomainError(f"key {key!r} has {len(key)} components, schema has {facts.schema.n}")
    return facts.cells.get(key)
