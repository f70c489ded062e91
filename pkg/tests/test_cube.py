import pytest
from hypothesis import given

from olapcube import (
    ArithmeticOverflow,
    DetailStore,
    DomainError,
    FactTable,
    IngestionError,
    Schema,
    cell_value,
    load_fact_table,
)
from conftest import raw_cubes

TABEL1_TOTAL = 11 + 22 + 12 + 13 + 10 + 33 + 44 + 14 + 15 + 55 + 66 + 16 + 17


class TestSchema:
    def test_valid(self):
        s = Schema(("a", "b"), "m")
        assert s.n == 2
        assert s.index("b") == 1

    @pytest.mark.parametrize("dims, measure", [((), "m"), (("a", "a"), "m"), (("a",), "a"), (("",), "m"), (("a",), "")])
    def test_invalid(self, dims, measure):
        with pytest.raises(DomainError):
            Schema(dims, measure)

    def test_unknown_dimension(self):
        with pytest.raises(DomainError, match="unknown dimension"):
            Schema(("a",), "m").index("b")


class TestLoad:
    def test_tabel1(self, tabel1):
        assert len(tabel1) == 13
        assert tabel1.total == TABEL1_TOTAL == 328
        assert tabel1.schema == Schema(("ang", "jenj", "ps", "jenkel"), "jumlah")

    def test_duplicates_are_summed(self):
        schema = Schema(("k",), "m")
        facts = load_fact_table([{"k": "x", "m": 5}, {"k": "x", "m": "7"}], schema)
        assert dict(facts.cells) == {("x",): 12}

    def test_empty(self):
        facts = load_fact_table([], Schema(("k",), "m"))
        assert len(facts) == 0
        assert facts.total == 0

    def test_missing_column_names_row(self):
        with pytest.raises(IngestionError, match="row 1") as exc:
            load_fact_table([{"k": "x", "m": 1}, {"m": 1}], Schema(("k",), "m"))
        assert exc.value.row_index == 1

    @pytest.mark.parametrize("bad", ["1.5", "abc", "", -3, "-3", 2.0, True, None])
    def test_bad_measure(self, bad):
        with pytest.raises(IngestionError, match="row 0"):
            load_fact_table([{"k": "x", "m": bad}], Schema(("k",), "m"))

    def test_overflow(self):
        rows = [{"k": "x", "m": 2**63}, {"k": "x", "m": 2**63}]
        with pytest.raises(ArithmeticOverflow):
            load_fact_table(rows, Schema(("k",), "m"))
        with pytest.raises(ArithmeticOverflow):
            load_fact_table([{"k": "x", "m": 2**64}], Schema(("k",), "m"))

    def test_cells_read_only(self, tabel1):
        with pytest.raises(TypeError):
            tabel1.cells[("x",)] = 1

    @given(raw_cubes())
    def test_conservation_and_idempotence(self, cube):
        schema, rows = cube
        facts = load_fact_table(rows, schema)
        assert facts.total == sum(r["m"] for r in rows)
        assert len(facts) <= len(rows)
        assert load_fact_table(facts.to_rows(), schema) == facts


class TestCellValue:
    def test_lookup(self, tabel1):
        assert cell_value(tabel1, ("2000", "5", "11", "p")) == 11
        assert cell_value(tabel1, ("2000", "5", "22", "p")) == 10
        assert cell_value(tabel1, ("1999", "5", "11", "p")) is None

    def test_wrong_arity(self, tabel1):
        with pytest.raises(DomainError):
            cell_value(tabel1, ("2000", "5"))

    def test_from_cells_validates(self):
        with pytest.raises(DomainError):
            FactTable.from_cells(Schema(("a",), "m"), {("x", "y"): 1})
        with pytest.raises(DomainError):
            FactTable.from_cells(Schema(("a",), "m"), {("x",): -1})


def test_detail_store_arity():
    with pytest.raises(IngestionError):
        DetailStore(("a", "b"), [("1",)])
    with pytest.raises(DomainError):
        DetailStore(("a", "a"), [])
