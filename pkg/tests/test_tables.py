# tests/test_tables.py
import pytest

from bmpoisson.claims import CohomologyClaim, DiscrepancyReport, Verdict, claims_for, multivector_of
from bmpoisson.errors import UsageError
from bmpoisson.models import MODEL_CODES
from bmpoisson.tables import build_table, lie_list, table2, table3, table4, table5, table6, table7, table8


def _verdict(report: DiscrepancyReport, location: str) -> Verdict:
    (entry,) = [e for e in report.entries if e.location == location]
    return entry.verdict


@pytest.fixture(scope="module")
def t7():
    return table7()


@pytest.fixture(scope="module")
def t8():
    return table8()


def test_casimir_and_differential_tables_match():
    for report in (table2(), table3()):
        assert report.counts()["matches"] == 2 * len(MODEL_CODES)
        assert not report.by_verdict(Verdict.MISMATCH)
    assert table2().rows[0] == ["c0-i0", "1*x1^2 + 1*x2^2 + 1*x3^2", "1*t"]


def test_bivector_table():
    report = table4()
    assert _verdict(report, "table 4 / s0-i2") is Verdict.AMBIGUOUS
    for code in MODEL_CODES:
        if code != "s0-i2":
            assert _verdict(report, f"table 4 / {code}") is Verdict.PROPORTIONAL
    (c0,) = report.find("table 4 / c0-i0")
    assert c0.note == "derived = (2) * printed"


def test_frame_table_flags_the_untangent_v_rows():
    report = table5()
    assert _verdict(report, "table 5 / s0-i1 / v") is Verdict.MISMATCH
    assert _verdict(report, "table 5 / s0-i2 / v") is Verdict.MISMATCH
    assert _verdict(report, "table 5 / c0-i0 / u") is Verdict.MATCHES
    assert _verdict(report, "table 5 / c0-i0 / v") is Verdict.MATCHES
    assert _verdict(report, "table 5 / s0-i1 / u") is Verdict.MATCHES


def test_lie_list():
    report = lie_list()
    assert _verdict(report, "lie list (1)") is Verdict.MATCHES
    assert _verdict(report, "lie list (2)") is Verdict.MATCHES
    (item3,) = report.find("lie list (3)")
    assert item3.verdict is Verdict.MISMATCH
    assert item3.note == "brackets agree with form(s) [4]"
    assert _verdict(report, "lie list / c0-i0") is Verdict.MATCHES
    assert _verdict(report, "lie list / c1-i0") is Verdict.MATCHES
    assert _verdict(report, "lie list / s0-i2") is Verdict.MISMATCH
    (s1,) = report.find("lie list / s1-i1")
    assert s1.verdict is Verdict.AMBIGUOUS
    assert s1.computed == "e11"


def test_table6_so3_rows():
    report = table6()
    assert _verdict(report, "table 6 / c0-i0 / H^0") is Verdict.MATCHES
    assert _verdict(report, "table 6 / s0-i1 / H^0") is Verdict.MATCHES
    assert _verdict(report, "table 6 / c0-i0 / Lie algebra") is Verdict.MATCHES
    (cell,) = report.find("table 6 / c0-i0 / H^k (k>=1)")
    assert cell.verdict is Verdict.MISMATCH
    assert "h3=1 at d=0" in cell.computed
    rows = [r for r in report.rows if r[0] == "c0-i0"]
    assert rows
    assert all(isinstance(r[1], str) and r[1] != "so3" for r in rows)


def test_table7_linear_degree(t7):
    for k in (0, 1, 2, 3):
        assert _verdict(t7, f"table 7 / s0-i2 / H^{k}") is Verdict.MATCHES
    assert _verdict(t7, "table 7 / c1-i0 / H^1") is Verdict.MATCHES
    assert _verdict(t7, "table 7 / c1-i0 / H^2") is Verdict.MISMATCH
    assert _verdict(t7, "table 7 / c1-i0 / H^3") is Verdict.MATCHES
    assert _verdict(t7, "table 7 / c1-i0 / H^0") is Verdict.AMBIGUOUS
    assert _verdict(t7, "table 7 / s1-i1 / H^0") is Verdict.MATCHES
    assert t7.rows[0][0] == "s0-i2"
    assert t7.rows[0][2:] == [1, 0, 0, 0, 0]


def test_table8_quadratic_degree(t8):
    assert _verdict(t8, "table 8 / c1-i0 / H^1") is Verdict.MISMATCH
    assert _verdict(t8, "table 8 / s0-i2 / H^3") is Verdict.MISMATCH
    assert _verdict(t8, "table 8 / s0-i2 / H^0") is Verdict.MATCHES


def test_claims_are_well_formed():
    assert {c.table for c in claims_for("c1-i0")} == {7, 8}
    assert {c.table for c in claims_for("c0-i0")} == {6}
    claim = CohomologyClaim(7, "c1-i0", 1, (1,), 1, ({(1,): "x1", (2,): "x2"},))
    assert claim.location == "table 7 / c1-i0 / H^1"
    with pytest.raises(ValueError, match="mix grades"):
        multivector_of({(1,): "x1", (1, 2): "x2"})


def test_build_table_dispatch():
    assert build_table(2).title == "Casimirs"
    assert build_table(" LIE ").title == "Lie algebras"
    assert build_table("all").title == "Discrepancy report"
    with pytest.raises(UsageError, match="unknown table"):
        build_table("9")
