import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, strategies as st

from olapcube import (
    DomainError,
    FactTable,
    Schema,
    ViewSpec,
    enumerate_views,
    load_fact_table,
    materialize_view,
    render_chart,
    render_csv,
    render_table,
    slice_cube,
    view_count,
    views_equivalent,
)
from conftest import cubes

SVG = "{http://www.w3.org/2000/svg}"

TABEL2_TABLE = """\
Angkatan  3 P  3 W  5 P  5 W  Jumlah
2000       12   13   21   22      68
2001       15   14   44   33     106
2002       16   17   55   66     154
Jumlah     43   44  120  121     328
"""


@pytest.fixture
def t2_report(tabel2):
    return materialize_view(tabel2, ViewSpec("Angkatan", ("Jenjang", "Jenis")))


class TestMaterialize:
    def test_slice_2000_by_gender(self, tabel1):
        r = materialize_view(slice_cube(tabel1, "ang", "2000"), ViewSpec("jenkel", ("jenj",)))
        assert r.axis_values == ("p", "w")
        assert [(s.label, s.cells) for s in r.series] == [("3", (12, 13)), ("5", (21, 22))]
        assert r.grand_total == 68

    def test_tabel2(self, t2_report):
        assert [s.label for s in t2_report.series] == ["3 P", "3 W", "5 P", "5 W"]
        assert t2_report.axis_values == ("2000", "2001", "2002")
        assert t2_report.series[2].cells == (21, 44, 55)
        assert t2_report.grand_total == 328

    def test_single_dimension_view(self, tabel2):
        r = materialize_view(tabel2, ViewSpec("Angkatan"))
        assert [(s.label, s.cells) for s in r.series] == [("Jumlah", (68, 106, 154))]

    def test_empty_cube(self):
        r = materialize_view(FactTable(Schema(("a",), "m")), ViewSpec("a"))
        assert r.axis_values == () and r.series == () and r.grand_total == 0

    def test_absent_cells_stay_absent(self):
        facts = load_fact_table([{"a": "x", "b": "1", "m": 3}, {"a": "y", "b": "2", "m": 4}], Schema(("a", "b"), "m"))
        r = materialize_view(facts, ViewSpec("a", ("b",)))
        assert [s.cells for s in r.series] == [(3, None), (None, 4)]

    def test_unknown_dimension(self, tabel2):
        with pytest.raises(DomainError):
            materialize_view(tabel2, ViewSpec("Angkatan", ("nope",)))

    def test_label_collision(self):
        rows = [{"a": "x", "b": "p q", "c": "r", "m": 1}, {"a": "x", "b": "p", "c": "q r", "m": 1}]
        with pytest.raises(DomainError, match="collide"):
            materialize_view(load_fact_table(rows, Schema(("a", "b", "c"), "m")), ViewSpec("a", ("b", "c")))


class TestEquivalence:
    def test_tables_2_and_3(self, tabel2, t2_report):
        t3 = materialize_view(tabel2, ViewSpec("Angkatan", ("Jenis", "Jenjang")))
        assert [s.label for s in t3.series] == ["P 3", "P 5", "W 3", "W 5"]
        assert views_equivalent(t2_report, t3)

    def test_self(self, t2_report):
        assert views_equivalent(t2_report, t2_report)

    def test_different_horizontal(self, tabel2, t2_report):
        other = materialize_view(tabel2, ViewSpec("Jenis", ("Angkatan", "Jenjang")))
        assert not views_equivalent(t2_report, other)

    def test_different_values(self, tabel2, t2_report):
        smaller = materialize_view(slice_cube(tabel2, "Jenis", "P"), ViewSpec("Angkatan", ("Jenjang", "Jenis")))
        assert not views_equivalent(t2_report, smaller)

    @given(cubes(), st.data())
    def test_pivot_order_invariance(self, facts, data):
        dims = facts.schema.dimensions
        r = data.draw(st.integers(1, len(dims)))
        chosen = data.draw(st.permutations(dims))[:r]
        shuffled = data.draw(st.permutations(chosen[1:]))
        a = materialize_view(facts, ViewSpec(chosen[0], tuple(chosen[1:])))
        b = materialize_view(facts, ViewSpec(chosen[0], tuple(shuffled)))
        assert views_equivalent(a, b)
        assert a.grand_total == b.grand_total == facts.total
        if a.axis_values:
            assert _strip_legend(render_chart(a)) == _strip_legend(render_chart(b))

    def test_view_shapes_match_count(self, tabel1):
        dims = tabel1.schema.dimensions
        for r in range(1, 5):
            shapes = {materialize_view(tabel1, v).view.identity() for v in enumerate_views(dims, r)}
            assert len(shapes) == view_count(4, r)


class TestRenderTable:
    def test_tabel2_golden(self, t2_report):
        assert render_table(t2_report) == TABEL2_TABLE
        assert render_table(t2_report).splitlines()[-1].split() == ["Jumlah", "43", "44", "120", "121", "328"]

    def test_empty(self):
        r = materialize_view(FactTable(Schema(("a",), "m")), ViewSpec("a"))
        assert render_table(r) == "a       Jumlah\nJumlah       0\n"

    def test_absent_renders_zero(self):
        facts = load_fact_table([{"a": "x", "b": "1", "m": 3}, {"a": "y", "b": "2", "m": 4}], Schema(("a", "b"), "m"))
        lines = render_table(materialize_view(facts, ViewSpec("a", ("b",)))).splitlines()
        assert lines[1].split() == ["x", "3", "0", "3"]
        assert lines[2].split() == ["y", "0", "4", "4"]

    @given(cubes(max_dims=3, max_rows=20), cubes(max_dims=3, max_rows=20))
    def test_injective(self, f1, f2):
        a = materialize_view(f1, ViewSpec("d0"))
        b = materialize_view(f2, ViewSpec("d0"))
        # absent cells are shown as 0, so compare rendered values
        same = (a.axis_values, [(s.label, [c or 0 for c in s.cells]) for s in a.series]) == (
            b.axis_values, [(s.label, [c or 0 for c in s.cells]) for s in b.series])
        assert (render_table(a) == render_table(b)) == same

    def test_csv(self, t2_report):
        lines = render_csv(t2_report).splitlines()
        assert lines[0] == "Angkatan,3 P,3 W,5 P,5 W,Jumlah"
        assert lines[-1] == "Jumlah,43,44,120,121,328"


def _strip_legend(svg: str) -> str:
    return re.sub(r'(<g class="legend">.*?</g>)', lambda m: re.sub(r">[^<]*</text>", "></text>", m.group(1)), svg, flags=re.S)


def _polylines(svg: str):
    root = ET.fromstring(svg.encode())
    return [p.get("points") for p in root.iter(f"{SVG}polyline")]


def _legend(svg: str):
    root = ET.fromstring(svg.encode())
    g = next(g for g in root.iter(f"{SVG}g") if g.get("class") == "legend")
    return [t.text for t in g.iter(f"{SVG}text")]


class TestRenderChart:
    def test_tabel2_structure(self, t2_report):
        svg = render_chart(t2_report)
        assert len(_polylines(svg)) == 4
        assert sorted(_legend(svg)) == ["3 P", "3 W", "5 P", "5 W"]
        assert ET.fromstring(svg.encode()).get("version") == "1.1"

    def test_points_follow_values(self, t2_report):
        # y max rounds 66 up to 100; plot area spans 310 px from y=40
        svg = render_chart(t2_report)
        order = _legend(svg)
        pts = _polylines(svg)[order.index("5 W")].split()
        ys = [float(p.split(",")[1]) for p in pts]
        assert ys == pytest.approx([40 + 310 - v * 310 / 100 for v in (22, 33, 66)])
        xs = [float(p.split(",")[0]) for p in pts]
        assert xs[1] - xs[0] == pytest.approx(xs[2] - xs[1])

    def test_one_series(self, tabel2):
        svg = render_chart(materialize_view(tabel2, ViewSpec("Angkatan")))
        assert len(_polylines(svg)) == 1

    def test_swapped_pivots_differ_only_in_legend(self, tabel2, t2_report):
        t3 = materialize_view(tabel2, ViewSpec("Angkatan", ("Jenis", "Jenjang")))
        a, b = render_chart(t2_report), render_chart(t3)
        assert a != b
        assert _polylines(a) == _polylines(b)
        assert _strip_legend(a) == _strip_legend(b)
        assert "5 P" in _legend(a) and "P 5" in _legend(b)

    def test_absent_plotted_as_zero(self):
        facts = load_fact_table([{"a": "x", "b": "1", "m": 3}, {"a": "y", "b": "2", "m": 4}], Schema(("a", "b"), "m"))
        svg = render_chart(materialize_view(facts, ViewSpec("a", ("b",))))
        first = _polylines(svg)[0].split()
        assert float(first[1].split(",")[1]) == pytest.approx(350.0)

    def test_empty_axis(self):
        with pytest.raises(DomainError):
            render_chart(materialize_view(FactTable(Schema(("a",), "m")), ViewSpec("a")))

    def test_deterministic_and_written(self, t2_report, tmp_path):
        out = tmp_path / "c.svg"
        svg = render_chart(t2_report, out)
        assert out.read_text(encoding="utf-8") == svg == render_chart(t2_report)

    def test_escapes_markup(self):
        facts = load_fact_table([{"a": "<x&y>", "m": 1}], Schema(("a",), "m"))
        svg = render_chart(materialize_view(facts, ViewSpec("a")))
        ET.fromstring(svg.encode())
        assert "&lt;x&amp;y&gt;" in svg
