"""``olapcube`` command line.

Exit status: 0 success, 1 usage or syntax error, 2 data or domain error,
3 arithmetic overflow.  Every error is a single line on stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .combinatorics import census, enumerate_all_views, enumerate_views, view_count
from .cube import FactTable, Schema
from .dataset import load_csv_detail, load_csv_facts, read_csv, write_facts_csv, write_rows_csv
from .dsl import parse_filter_expr, parse_key_expr, parse_view_expr
from .errors import ArithmeticOverflow, DomainError, OlapError, ParseError
from .ops import DiceFilter, dice, drilldown, parse_link, rollup, slice_cube, synthesize_detail_store
from .querygen import batch_generate, generate_sql
from .report import materialize_view, render_chart, render_csv, render_table

DEFAULT_SQL_MEASURE = "jum"


class UsageError(OlapError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _csv_list(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",")]
    if not all(items):
        raise argparse.ArgumentTypeError(f"empty name in list {text!r}")
    return items


def _build_parser() -> _Parser:
    parser = _Parser(prog="olapcube", description="Embedded OLAP cube engine.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="COMMAND")

    def data_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="fact table CSV")
        p.add_argument("--measure", help="measure column (default: last column)")

    p = sub.add_parser("count", help="count report views")
    p.add_argument("--dims", type=int, required=True, metavar="N")
    p.add_argument("--arity", type=int, metavar="R")

    p = sub.add_parser("enumerate", help="list report views")
    p.add_argument("--dims", type=_csv_list, required=True, metavar="A,B,...")
    p.add_argument("--arity", type=int, metavar="R", help="default: every arity")

    for verb in ("slice", "dice"):
        p = sub.add_parser(verb, help=f"{verb} the cube, writing fact CSV")
        data_args(p)
        p.add_argument("--filter", required=True, metavar="EXPR")
        p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("rollup", help="aggregate onto a subset of dimensions")
    data_args(p)
    p.add_argument("--keep", type=_csv_list, required=True, metavar="A,B,...")
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("view", help="materialize one report view")
    data_args(p)
    p.add_argument("--view", required=True, metavar="EXPR")
    p.add_argument("--filter", metavar="EXPR")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("chart", help="render one report view as an SVG line chart")
    data_args(p)
    p.add_argument("--view", required=True, metavar="EXPR")
    p.add_argument("--filter", metavar="EXPR")
    p.add_argument("--out", required=True, metavar="FILE.svg")

    p = sub.add_parser("sql", help="emit GROUP BY SQL for a view or for every view")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--view", metavar="EXPR")
    target.add_argument("--all", action="store_true", help="one statement per enumerated view")
    p.add_argument("--filter", metavar="EXPR")
    p.add_argument("--table", required=True, metavar="NAME")
    p.add_argument("--input", help="fact table CSV supplying the schema")
    p.add_argument("--dims", type=_csv_list, metavar="A,B,...", help="schema dimensions without --input")
    p.add_argument("--measure", help=f"measure column (default: last CSV column, else {DEFAULT_SQL_MEASURE})")
    p.add_argument("--out-dir", metavar="DIR", help="write one .sql file per view instead of stdout")

    p = sub.add_parser("drilldown", help="detail records behind a cell")
    data_args(p)
    p.add_argument("--detail", required=True, metavar="FILE", help="detail record CSV")
    p.add_argument("--link", required=True, metavar="FILE", help="detail link bindings")
    p.add_argument("--key", required=True, metavar="EXPR", help="e.g. ang=2000;jenj=5")
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("synth-detail", help="generate a detail CSV with `measure` rows per cell")
    data_args(p)
    p.add_argument("--link", required=True, metavar="FILE")
    p.add_argument("--output", metavar="FILE")
    return parser


def _emit(text: str, output: str | None, stdout: TextIO) -> None:
    if output is None:
        stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8", newline="\n")


def _filtered(facts: FactTable, expr: str | None) -> FactTable:
    if expr is None:
        return facts
    return dice(facts, parse_filter_expr(expr))


def _check_view_dims(view, schema: Schema) -> None:
    for dim in view.dimensions:
        schema.index(dim)


def _format_filter(flt: DiceFilter, order: Sequence[str]) -> str:
    dims = sorted(flt.clauses, key=lambda d: order.index(d) if d in order else len(order))
    return ";".join(f"{d}={','.join(sorted(flt.clauses[d]))}" for d in dims)


def _cmd_count(args, out: TextIO) -> None:
    if args.arity is not None:
        out.write(f"{args.arity}:{view_count(args.dims, args.arity)}\n")
        return
    c = census(args.dims)
    parts = [f"{r}:{k}" for r, k in c.per_arity.items()]
    out.write(" ".join(parts) + f" total:{c.total}\n")


def _cmd_enumerate(args, out: TextIO) -> None:
    views = enumerate_all_views(args.dims) if args.arity is None else enumerate_views(args.dims, args.arity)
    out.writelines(f"{v}\n" for v in views)


def _cmd_slice(args, out: TextIO) -> None:
    flt = parse_filter_expr(args.filter)
    if args.verb == "slice":
        if len(flt.clauses) != 1 or len(next(iter(flt.clauses.values()))) != 1:
            raise UsageError("slice takes exactly one dimension=value; use dice for more")
    facts = load_csv_facts(args.input, args.measure)
    if args.verb == "slice":
        ((dim, values),) = flt.clauses.items()
        result = slice_cube(facts, dim, next(iter(values)))
    else:
        result = dice(facts, flt)
    _emit(write_facts_csv(result), args.output, out)


def _cmd_rollup(args, out: TextIO) -> None:
    facts = load_csv_facts(args.input, args.measure)
    _emit(write_facts_csv(rollup(facts, args.keep)), args.output, out)


def _cmd_view(args, out: TextIO) -> None:
    view = parse_view_expr(args.view)
    flt = parse_filter_expr(args.filter) if args.filter else None
    facts = load_csv_facts(args.input, args.measure)
    _check_view_dims(view, facts.schema)
    report = materialize_view(dice(facts, flt) if flt else facts, view)
    if args.format == "csv":
        text = render_csv(report)
    else:
        head = f"view: {view}\n"
        if flt:
            head += f"filter: {_format_filter(flt, facts.schema.dimensions)}\n"
        text = head + "\n" + render_table(report)
    _emit(text, args.output, out)


def _cmd_chart(args, out: TextIO) -> None:
    view = parse_view_expr(args.view)
    flt = parse_filter_expr(args.filter) if args.filter else None
    facts = load_csv_facts(args.input, args.measure)
    _check_view_dims(view, facts.schema)
    render_chart(materialize_view(dice(facts, flt) if flt else facts, view), args.out)


def _sql_schema(args) -> Schema | None:
    if args.input:
        data = read_csv(args.input)
        return data.schema(args.measure)
    if args.dims:
        return Schema(tuple(args.dims), args.measure or DEFAULT_SQL_MEASURE)
    return None


def _cmd_sql(args, out: TextIO) -> None:
    view = parse_view_expr(args.view) if args.view else None
    flt = parse_filter_expr(args.filter) if args.filter else None
    schema = _sql_schema(args)
    if args.all:
        if schema is None:
            raise UsageError("sql --all needs --input or --dims")
        if flt is not None:
            raise UsageError("sql --all does not take --filter")
        views = enumerate_all_views(schema.dimensions)
        queries = batch_generate(schema, args.table)
    else:
        measure = schema.measure if schema else (args.measure or DEFAULT_SQL_MEASURE)
        order = schema.dimensions if schema else ()
        if schema is not None:
            _check_view_dims(view, schema)
            if flt is not None:
                flt.validate(schema)
        views = [view]
        queries = [generate_sql(view, args.table, measure, flt, order)]
    if args.out_dir:
        target = Path(args.out_dir)
        target.mkdir(parents=True, exist_ok=True)
        for i, (v, q) in enumerate(zip(views, queries), start=1):
            name = str(v).replace("|", "__").replace(",", "_")
            (target / f"{i:03d}_{name}.sql").write_text(q.text + "\n", encoding="utf-8")
    else:
        out.writelines(q.text + "\n" for q in queries)


def _cmd_drilldown(args, out: TextIO) -> None:
    key = parse_key_expr(args.key)
    link = parse_link(Path(args.link).read_text(encoding="utf-8"))
    facts = load_csv_facts(args.input, args.measure)
    store = load_csv_detail(args.detail)
    rows = drilldown(facts, key, store, link)
    _emit(write_rows_csv(store.columns, rows), args.output, out)


def _cmd_synth_detail(args, out: TextIO) -> None:
    link = parse_link(Path(args.link).read_text(encoding="utf-8"))
    facts = load_csv_facts(args.input, args.measure)
    store = synthesize_detail_store(facts, link)
    _emit(write_rows_csv(store.columns, store.rows), args.output, out)


COMMANDS = {
    "count": _cmd_count,
    "enumerate": _cmd_enumerate,
    "slice": _cmd_slice,
    "dice": _cmd_slice,
    "rollup": _cmd_rollup,
    "view": _cmd_view,
    "chart": _cmd_chart,
    "sql": _cmd_sql,
    "drilldown": _cmd_drilldown,
    "synth-detail": _cmd_synth_detail,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        COMMANDS[args.verb](args, stdout)
    except (UsageError, ParseError) as exc:
        stderr.write(f"olapcube: usage error: {exc}\n")
        return 1
    except ArithmeticOverflow as exc:
        stderr.write(f"olapcube: overflow: {exc}\n")
        return 3
    except (DomainError, OSError) as exc:
        stderr.write(f"olapcube: error: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
