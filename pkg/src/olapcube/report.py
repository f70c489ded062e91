"""Pivot reports: materialize a view, compare views, render table/CSV/SVG."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from os import PathLike
from xml.sax.saxutils import escape, quoteattr

from .combinatorics import ViewSpec
from .cube import FactTable
from .errors import DomainError
from .ops import rollup

__all__ = [
    "Series",
    "PivotReport",
    "materialize_view",
    "views_equivalent",
    "render_table",
    "render_csv",
    "render_chart",
]

TOTAL_LABEL = "Jumlah"


@dataclass(frozen=True)
class Series:
    """One legend entry: a pivot-value combination and its cells along the axis."""

    label: str
    values: tuple[str, ...]
    cells: tuple[int | None, ...]

    @property
    def total(self) -> int:
        return sum(c for c in self.cells if c is not None)


@dataclass(frozen=True)
class PivotReport:
    view: ViewSpec
    measure: str
    axis_values: tuple[str, ...]
    series: tuple[Series, ...]
    grand_total: int

    def cell_map(self) -> dict[tuple[str, frozenset[tuple[str, str]]], int]:
        """Present cells keyed by axis value and the (dimension, value) pivot set."""
        out = {}
        for s in self.series:
            pivot = frozenset(zip(self.view.pivots, s.values))
            for axis, cell in zip(self.axis_values, s.cells):
                if cell is not None:
                    out[(axis, pivot)] = cell
        return out

    def row_total(self, i: int) -> int:
        return sum(s.cells[i] or 0 for s in self.series)


def materialize_view(facts: FactTable, view: ViewSpec) -> PivotReport:
    """Roll ``facts`` up onto the view's dimensions and pivot the result.

    Axis values and legend labels are sorted ascending.  A view without
    pivots yields a single series labelled with the measure name.
    """
    for dim in view.dimensions:
        facts.schema.index(dim)
    if view.arity > facts.schema.n:
        raise DomainError(f"view arity {view.arity} exceeds {facts.schema.n} dimensions")
    cube = rollup(facts, view.dimensions)
    measure = facts.schema.measure

    axis = sorted({key[0] for key in cube.cells})
    combos = {key[1:] for key in cube.cells}
    pos = {a: i for i, a in enumerate(axis)}
    grid: dict[tuple[str, ...], list[int | None]] = {c: [None] * len(axis) for c in combos}
    for key, value in cube.cells.items():
        grid[key[1:]][pos[key[0]]] = value

    series = []
    for combo, cells in grid.items():
        label = " ".join(combo) if view.pivots else measure
        series.append(Series(label, combo, tuple(cells)))
    series.sort(key=lambda s: s.label)
    labels = [s.label for s in series]
    if len(set(labels)) != len(labels):
        raise DomainError("pivot values collide when joined into legend labels")
    return PivotReport(view, measure, tuple(axis), tuple(series), cube.total)


def views_equivalent(a: PivotReport, b: PivotReport) -> bool:
    """True when two reports show the same numbers, whatever their pivot order."""
    return (
        a.view.identity() == b.view.identity()
        and a.cell_map() == b.cell_map()
    )


def _grid(report: PivotReport) -> list[list[str]]:
    rows = [[report.view.horizontal, *(s.label for s in report.series), TOTAL_LABEL]]
    for i, axis in enumerate(report.axis_values):
        cells = [str(s.cells[i] or 0) for s in report.series]
        rows.append([axis, *cells, str(report.row_total(i))])
    rows.append([TOTAL_LABEL, *(str(s.total) for s in report.series), str(report.grand_total)])
    return rows


def render_table(report: PivotReport) -> str:
    """Fixed-width text table with row and column totals.

    Absent cells print as ``0``; the last row is the ``Jumlah`` line ending
    in the grand total.
    """
    rows = _grid(report)
    widths = [max(len(r[j]) for r in rows) for j in range(len(rows[0]))]
    lines = []
    for row in rows:
        parts = [row[0].ljust(widths[0])]
        parts += [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(report: PivotReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(_grid(report))
    return buf.getvalue()


# -- SVG line chart ---------------------------------------------------------

WIDTH, HEIGHT = 720, 400
LEFT, RIGHT, TOP, BOTTOM = 60, 180, 40, 50
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _nice_ceiling(x: int) -> int:
    if x <= 0:
        return 1
    base = 10 ** int(math.floor(math.log10(x)))
    for step in (1, 2, 5, 10):
        if step * base >= x:
            return step * base
    return 10 * base


def _canonical_order(report: PivotReport) -> list[Series]:
    # independent of pivot display order, so swapped views draw identically
    order = sorted(range(len(report.view.pivots)), key=lambda i: report.view.pivots[i])
    return sorted(report.series, key=lambda s: tuple(s.values[i] for i in order))


def render_chart(report: PivotReport, path: str | PathLike[str] | None = None) -> str:
    """One polyline per series over evenly spaced axis ticks, as SVG 1.1.

    Series are drawn and listed in an order that ignores pivot display
    order, so reports differing only in pivot order differ only in legend
    text.  The document is also written to ``path`` when given.
    """
    if not report.axis_values:
        raise DomainError("cannot chart a report with an empty horizontal axis")
    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM
    n_axis = len(report.axis_values)
    peak = max((c or 0 for s in report.series for c in s.cells), default=0)
    y_max = _nice_ceiling(peak)

    def x(i: int) -> float:
        return LEFT + (i + 0.5) * plot_w / n_axis

    def y(v: int) -> float:
        return TOP + plot_h - v * plot_h / y_max

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(report.measure)} by {escape(report.view.horizontal)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        '<g class="axes" stroke="black" stroke-width="1">',
        f'<line x1="{LEFT}" y1="{TOP + plot_h}" x2="{LEFT + plot_w}" y2="{TOP + plot_h}"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + plot_h}"/>',
        "</g>",
        '<g class="y-ticks" text-anchor="end">',
    ]
    for k in range(6):
        v = y_max * k / 5
        label = f"{v:g}"
        out.append(f'<line x1="{LEFT - 4}" y1="{y(v):.2f}" x2="{LEFT}" y2="{y(v):.2f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 6}" y="{y(v) + 4:.2f}">{label}</text>')
    out.append("</g>")
    out.append('<g class="x-ticks" text-anchor="middle">')
    for i, axis in enumerate(report.axis_values):
        out.append(f'<line x1="{x(i):.2f}" y1="{TOP + plot_h}" x2="{x(i):.2f}" y2="{TOP + plot_h + 4}" stroke="black"/>')
        out.append(f'<text x="{x(i):.2f}" y="{TOP + plot_h + 18}">{escape(axis)}</text>')
    out.append("</g>")
    out.append(
        f'<text class="axis-title" x="{LEFT + plot_w / 2:.2f}" y="{HEIGHT - 10}" '
        f'text-anchor="middle">{escape(report.view.horizontal)}</text>'
    )

    ordered = _canonical_order(report)
    out.append('<g class="series" fill="none" stroke-width="2">')
    for j, s in enumerate(ordered):
        points = " ".join(f"{x(i):.2f},{y(c or 0):.2f}" for i, c in enumerate(s.cells))
        out.append(f'<polyline stroke="{PALETTE[j % len(PALETTE)]}" points="{points}"/>')
    out.append("</g>")

    lx = LEFT + plot_w + 20
    out.append('<g class="legend">')
    out.append(
        f'<rect x="{lx - 8}" y="{TOP - 8}" width="{RIGHT - 24}" height="{20 * len(ordered) + 8}" '
        'fill="none" stroke="#999999"/>'
    )
    for j, s in enumerate(ordered):
        ly = TOP + 20 * j + 6
        color = PALETTE[j % len(PALETTE)]
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke={quoteattr(color)} stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    doc = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
    return doc
