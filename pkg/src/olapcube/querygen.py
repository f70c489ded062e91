"""Canonical GROUP BY SQL text for report views.

Every statement has the shape::

    SELECT <h>, <pivots...>, SUM(<measure>) AS jumlah FROM <table>
    [WHERE ...] GROUP BY <h>, <pivots...>;

with the select list and the group-by list always identical and in the same
order.  Nothing here talks to a database.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .combinatorics import ViewSpec, enumerate_all_views
from .cube import Schema
from .errors import DomainError
from .ops import DiceFilter

__all__ = ["SqlQuery", "generate_sql", "batch_generate", "quote_literal", "AGGREGATE_ALIAS"]

AGGREGATE_ALIAS = "jumlah"
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class SqlQuery:
    text: str
    select_columns: tuple[str, ...]
    group_by_columns: tuple[str, ...]
    where_clauses: tuple[tuple[str, str, tuple[str, ...]], ...] = ()

    def __str__(self) -> str:
        return self.text


def _ident(name: str, what: str) -> str:
    if not _IDENT.fullmatch(name):
        raise DomainError(f"invalid SQL identifier for {what}: {name!r}")
    return name


def quote_literal(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def generate_sql(
    view: ViewSpec,
    table_name: str,
    measure: str,
    flt: DiceFilter | None = None,
    dimension_order: Sequence[str] | None = None,
) -> SqlQuery:
    """SQL for one view, optionally restricted by a filter.

    WHERE conjuncts follow ``dimension_order`` (normally the schema's
    dimension order); filter dimensions it does not mention come last in
    filter order.  Multi-value clauses list their values sorted.
    """
    columns = tuple(_ident(c, "column") for c in view.dimensions)
    _ident(table_name, "table")
    _ident(measure, "measure")

    where: list[tuple[str, str, tuple[str, ...]]] = []
    if flt is not None:
        rank = {d: i for i, d in enumerate(dimension_order or ())}
        dims = sorted(flt.clauses, key=lambda d: rank.get(d, len(rank)))
        for dim in dims:
            values = tuple(sorted(flt.clauses[dim]))
            where.append((_ident(dim, "filter column"), "=" if len(values) == 1 else "IN", values))

    column_list = ", ".join(columns)
    text = f"SELECT {column_list}, SUM({measure}) AS {AGGREGATE_ALIAS} FROM {table_name}"
    if where:
        conjuncts = []
        for dim, op, values in where:
            if op == "=":
                conjuncts.append(f"{dim} = {quote_literal(values[0])}")
            else:
                conjuncts.append(f"{dim} IN ({', '.join(map(quote_literal, values))})")
        text += " WHERE " + " AND ".join(conjuncts)
    text += f" GROUP BY {column_list};"
    return SqlQuery(text, columns, columns, tuple(where))


def batch_generate(schema: Schema, table_name: str) -> list[SqlQuery]:
    """One query per enumerated view, arity 1 through n."""
    return [
        generate_sql(view, table_name, schema.measure, dimension_order=schema.dimensions)
        for view in enumerate_all_views(schema.dimensions)
    ]
