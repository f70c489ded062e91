import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from olapcube import load_csv_facts, load_fact_table, Schema, sample_path  # noqa: E402


@pytest.fixture
def tabel1():
    return load_csv_facts(sample_path("tabel1.csv"))


@pytest.fixture
def tabel2():
    return load_csv_facts(sample_path("tabel2.csv"))


@st.composite
def raw_cubes(draw, max_dims=5, max_rows=100):
    """(schema, raw rows) with small value alphabets so keys collide often."""
    n = draw(st.integers(1, max_dims))
    dims = tuple(f"d{i}" for i in range(n))
    values = {d: st.sampled_from([f"{d}{c}" for c in "abc"]) for d in dims}
    row = st.fixed_dictionaries({**values, "m": st.integers(0, 10**6)})
    rows = draw(st.lists(row, max_size=max_rows))
    return Schema(dims, "m"), rows


@st.composite
def cubes(draw, max_dims=5, max_rows=100):
    schema, rows = draw(raw_cubes(max_dims, max_rows))
    return load_fact_table(rows, schema)


# -- acceptance summary: one pass/fail line per criterion ---------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and "::test_criterion_" in report.nodeid:
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            name = report.nodeid.split("::")[-1]
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[2])):
        verdict = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
