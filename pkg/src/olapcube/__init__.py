"""Embedded multidimensional cube engine.

Load a fact table, slice/dice/roll it up, drill down to detail records,
enumerate every distinct report view and render each one as a pivot table,
an SVG line chart or GROUP BY SQL text.
"""
__version__ = "0.1.0"

from .combinatorics import (
    ViewCensus,
    ViewSpec,
    binomial,
    census,
    enumerate_all_views,
    enumerate_views,
    factorial,
    total_view_count,
    view_count,
)
from .cube import DetailStore, FactTable, Schema, cell_value, load_fact_table
from .dataset import CsvDataset, load_csv_detail, load_csv_facts, read_csv, sample_path
from .dsl import parse_filter_expr, parse_key_expr, parse_view_expr
from .errors import ArithmeticOverflow, DomainError, IngestionError, OlapError, ParseError
from .ops import (
    DetailLink,
    DiceFilter,
    Extraction,
    dice,
    drilldown,
    parse_link,
    rollup,
    slice_cube,
    synthesize_detail_store,
)
from .querygen import SqlQuery, batch_generate, generate_sql
from .report import PivotReport, Series, materialize_view, render_chart, render_csv, render_table, views_equivalent
