# tests/test_suites.py
import pytest

from bmpoisson.errors import UsageError
from bmpoisson.suites import SuiteOptions, run_suites, suite_names

SMALL = SuiteOptions(seed=7, samples=25, triples=10, grid="-1:1:5")


@pytest.mark.parametrize("name", ["poly", "schouten", "jacobi", "casimir", "lie", "glue"])
def test_suite_passes(name):
    report = run_suites(name, SMALL)
    failures = [(c.name, c.detail) for s in report.suites for c in s.failures()]
    assert report.ok, failures
    assert [s.name for s in report.suites] == [name]


def test_lie_suite_checks_every_model():
    report = run_suites("lie", SMALL)
    assert len(report.suites[0].checks) == 2 * 7


def test_report_encodings():
    report = run_suites("jacobi", SMALL)
    text = report.to_text()
    assert text.startswith("seed: 7\n")
    assert text.endswith("\nOK")
    data = report.to_json()
    assert data["seed"] == 7 and data["ok"] is True
    assert data["suites"][0]["name"] == "jacobi"
    rows = report.to_rows()
    assert rows[0] == ["suite", "check", "passed", "detail"]
    assert all(row[0] == "jacobi" and row[2] is True for row in rows[1:])


def test_suite_names_and_unknown_suite():
    names = suite_names()
    assert names[0] == "all"
    assert {"poly", "schouten", "jacobi", "casimir", "lie", "symplectic", "cohomology", "glue"} <= set(names)
    with pytest.raises(UsageError, match="unknown suite"):
        run_suites("nope", SMALL)
