"""Slice, dice, roll-up and drill-down over a :class:`~olapcube.cube.FactTable`.

Drill-down resolves a (partial) cell key to base records through a
:class:`DetailLink`: a list of equalities between string extractions on a
detail column and on a dimension value, in the style of

    left(nim,2) = right(ang,2)
    substr(nim,3,2) = ps
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .cube import DetailStore, FactTable, Key, Schema
from .errors import DomainError, ParseError, check_u64

__all__ = [
    "DiceFilter",
    "Extraction",
    "DetailLink",
    "slice_cube",
    "dice",
    "rollup",
    "drilldown",
    "parse_link",
    "synthesize_detail_store",
]


@dataclass(frozen=True)
class DiceFilter:
    """Per-dimension sets of allowed values; clauses are AND-ed."""

    clauses: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        clauses = {dim: frozenset(values) for dim, values in dict(self.clauses).items()}
        for dim, values in clauses.items():
            if not values:
                raise DomainError(f"filter clause for {dim!r} allows no values")
        object.__setattr__(self, "clauses", MappingProxyType(clauses))

    @classmethod
    def of(cls, **clauses: Iterable[str] | str) -> DiceFilter:
        return cls({d: {v} if isinstance(v, str) else set(v) for d, v in clauses.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiceFilter):
            return NotImplemented
        return dict(self.clauses) == dict(other.clauses)

    def __hash__(self) -> int:
        return hash(frozenset(self.clauses.items()))

    def validate(self, schema: Schema) -> None:
        for dim in self.clauses:
            schema.index(dim)


def slice_cube(facts: FactTable, dim: str, value: str) -> FactTable:
    """Cells whose ``dim`` component equals ``value``; the schema is unchanged."""
    i = facts.schema.index(dim)
    return FactTable(facts.schema, {k: v for k, v in facts.cells.items() if k[i] == value})


def dice(facts: FactTable, flt: DiceFilter) -> FactTable:
    flt.validate(facts.schema)
    tests = [(facts.schema.index(d), allowed) for d, allowed in flt.clauses.items()]
    return FactTable(
        facts.schema,
        {k: v for k, v in facts.cells.items() if all(k[i] in allowed for i, allowed in tests)},
    )


def rollup(facts: FactTable, keep: Sequence[str]) -> FactTable:
    """Sum away every dimension not in ``keep``; result dimensions follow ``keep`` order."""
    keep = tuple(keep)
    if not keep:
        raise DomainError("roll-up must keep at least one dimension")
    idx = [facts.schema.index(d) for d in keep]
    schema = Schema(keep, facts.schema.measure)
    cells: dict[Key, int] = {}
    for key, value in facts.cells.items():
        sub = tuple(key[i] for i in idx)
        cells[sub] = check_u64(cells.get(sub, 0) + value, "rolled-up measure")
    return FactTable(schema, cells)


# -- drill-down -------------------------------------------------------------


@dataclass(frozen=True)
class Extraction:
    """``column`` optionally narrowed by left/right/substr (1-based start)."""

    column: str
    func: str = "whole"
    args: tuple[int, ...] = ()

    _ARITY = {"whole": 0, "left": 1, "right": 1, "substr": 2}

    def __post_init__(self) -> None:
        if self.func not in self._ARITY:
            raise DomainError(f"unknown extraction {self.func!r}")
        if len(self.args) != self._ARITY[self.func]:
            raise DomainError(f"{self.func} takes {self._ARITY[self.func]} integer argument(s)")
        if any(a < 1 for a in self.args):
            raise DomainError(f"{self.func} arguments must be >= 1, got {self.args}")

    def apply(self, s: str) -> str | None:
        """Extracted text, or ``None`` when ``s`` is too short."""
        if self.func == "whole":
            return s
        if self.func in ("left", "right"):
            (k,) = self.args
            if k > len(s):
                return None
            return s[:k] if self.func == "left" else s[len(s) - k:]
        start, length = self.args
        if start - 1 + length > len(s):
            return None
        return s[start - 1:start - 1 + length]

    def __str__(self) -> str:
        if self.func == "whole":
            return self.column
        return f"{self.func}({self.column},{','.join(map(str, self.args))})"


@dataclass(frozen=True)
class DetailLink:
    """Bindings ``(detail expression, dimension expression)``."""

    bindings: tuple[tuple[Extraction, Extraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bindings", tuple((d, m) for d, m in self.bindings))
        dims = [m.column for _, m in self.bindings]
        if len(set(dims)) != len(dims):
            raise DomainError("a dimension is bound more than once in the detail link")

    def binding_for(self, dim: str) -> tuple[Extraction, Extraction]:
        for detail, dimension in self.bindings:
            if dimension.column == dim:
                return detail, dimension
        raise DomainError(f"dimension {dim!r} is not bound in the detail link")

    def __str__(self) -> str:
        return "".join(f"{d} = {m}\n" for d, m in self.bindings)


def drilldown(
    facts: FactTable,
    cell_key: Mapping[str, str],
    store: DetailStore,
    link: DetailLink,
) -> list[tuple[str, ...]]:
    """Detail rows that join to the cell named by ``cell_key``.

    ``cell_key`` maps some or all schema dimensions to values.  A row matches
    when every bound extraction on it equals the matching extraction on the
    key value; an extraction that runs past the end of its string never
    matches.
    """
    predicates = []
    for dim, value in cell_key.items():
        facts.schema.index(dim)
        detail, dimension = link.binding_for(dim)
        if detail.column not in store.columns:
            raise DomainError(f"detail column {detail.column!r} not in store {list(store.columns)}")
        target = dimension.apply(value)
        if target is None:
            return []
        predicates.append((store.columns.index(detail.column), detail, target))
    return [
        row for row in store.rows
        if all(detail.apply(row[i]) == target for i, detail, target in predicates)
    ]


_EXPR = re.compile(
    r"\s*(?P<func>left|right|substr)\s*\(\s*(?P<col>[A-Za-z_]\w*)\s*"
    r"((?:,\s*[0-9]+\s*){1,2})\)\s*$"
    r"|\s*(?P<bare>[A-Za-z_]\w*)\s*$",
    re.IGNORECASE,
)


def _parse_extraction(text: str, line: int, offset: int) -> Extraction:
    m = _EXPR.match(text)
    column = offset + len(text) - len(text.lstrip()) + 1
    if m is None:
        raise ParseError(f"line {line}: bad expression {text.strip()!r}", column, text)
    if m.group("bare"):
        return Extraction(m.group("bare"))
    args = tuple(int(a) for a in re.findall(r"[0-9]+", m.group(3)))
    try:
        return Extraction(m.group("col"), m.group("func").lower(), args)
    except DomainError as exc:
        raise ParseError(f"line {line}: {exc}", column, text) from None


def parse_link(text: str) -> DetailLink:
    """Parse one ``<detail-expr> = <dim-expr>`` binding per line.

    Blank lines and ``#`` comments are skipped.
    """
    bindings = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if body.count("=") != 1:
            raise ParseError(f"line {lineno}: expected exactly one '='", 1, line)
        lhs, rhs = body.split("=")
        bindings.append((
            _parse_extraction(lhs, lineno, 0),
            _parse_extraction(rhs, lineno, len(lhs) + 1),
        ))
    try:
        return DetailLink(tuple(bindings))
    except DomainError as exc:
        raise ParseError(str(exc), 1, text) from None


def _place(buf: dict[int, str], start: int, text: str, column: str) -> None:
    for offset, ch in enumerate(text):
        if buf.setdefault(start + offset, ch) != ch:
            raise DomainError(f"conflicting link constraints on detail column {column!r}")


def synthesize_detail_store(
    facts: FactTable,
    link: DetailLink,
    extra_columns: Sequence[str] = ("nama",),
) -> DetailStore:
    """A detail store holding exactly ``measure`` matching rows per cell.

    Each linked detail column is assembled character by character so that
    its extraction reproduces the cell's dimension extraction.  A column
    bound only through left/substr gets a serial appended after its
    constrained prefix, numbered per prefix so generated IDs stay distinct.
    """
    by_column: dict[str, list[tuple[Extraction, Extraction]]] = {}
    for detail, dimension in link.bindings:
        facts.schema.index(dimension.column)
        by_column.setdefault(detail.column, []).append((detail, dimension))
    columns = tuple(by_column) + tuple(c for c in extra_columns if c not in by_column)

    cells = facts.sorted_items()
    plans = []
    prefix_totals: dict[tuple[str, str], int] = {}
    for key, measure in cells:
        values = dict(zip(facts.schema.dimensions, key))
        plan = {c: _assemble(c, b, values) for c, b in by_column.items()}
        for column, (text, open_end) in plan.items():
            if open_end:
                prefix_totals[column, text] = prefix_totals.get((column, text), 0) + measure
        plans.append((plan, measure))
    width = max([2, *(len(str(t)) for t in prefix_totals.values())])

    serials: dict[tuple[str, str], int] = {}
    rows = []
    for plan, measure in plans:
        for _ in range(measure):
            row = []
            for column in columns:
                if column not in plan:
                    row.append(f"{column}-{len(rows) + 1:06d}")
                    continue
                text, open_end = plan[column]
                if open_end:
                    serials[column, text] = serials.get((column, text), 0) + 1
                    text += f"{serials[column, text]:0{width}d}"
                row.append(text)
            rows.append(tuple(row))
    return DetailStore(columns, tuple(rows))


def _place(buf: dict[int, str], start: int, text: str, column: str) -> None:
    for offset, ch in enumerate(text):
        if buf.setdefault(start + offset, ch) != ch:
            raise DomainError(f"conflicting link constraints on detail column {column!r}")


def _assemble(
    column: str,
    bindings: list[tuple[Extraction, Extraction]],
    values: Mapping[str, str],
) -> tuple[str, bool]:
    """Shortest text satisfying every binding, and whether a serial may follow."""
    targets = []
    for detail, dimension in bindings:
        target = dimension.apply(values[dimension.column])
        if target is None:
            raise DomainError(f"value {values[dimension.column]!r} too short for {dimension}")
        targets.append((detail, target))

    whole = [t for d, t in targets if d.func == "whole"]
    tails = [t for d, t in targets if d.func == "right"]
    head: dict[int, str] = {}
    for detail, target in targets:
        if detail.func == "left":
            _place(head, 0, target, column)
        elif detail.func == "substr":
            _place(head, detail.args[0] - 1, target, column)
    end = max(head, default=-1) + 1

    if whole:
        result, open_end = whole[0], False
    elif tails:
        # right() pins the end of the string, so no serial can follow
        longest = max(map(len, tails))
        for length in range(max(end, longest), end + longest + 1):
            buf = dict(head)
            try:
                for tail in tails:
                    _place(buf, length - len(tail), tail, column)
            except DomainError:
                continue
            break
        else:
            raise DomainError(f"conflicting right() constraints on detail column {column!r}")
        result, open_end = "".join(buf.get(i, "0") for i in range(length)), False
    else:
        result, open_end = "".join(head.get(i, "0") for i in range(end)), True
    for detail, target in targets:
        if detail.apply(result) != target:
            raise DomainError(f"cannot build {column!r} so that {detail} = {target!r}")
    return result, open_end
