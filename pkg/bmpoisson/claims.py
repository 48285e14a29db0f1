"""
Transcribed statements to check, and the discrepancy report they feed.

Polynomials use the package grammar; multivectors are written as
``{index tuple: coefficient}`` mappings. Nothing here computes: the table
builders and the cohomology report compare these claims with computed values.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .multivector import MultiVector
from .poly import parse_polynomial
from .typing_defs import DiscrepancyJSON

TermMap = Mapping[tuple[int, ...], str]


class Verdict(str, enum.Enum):
    MATCHES = "matches"
    PROPORTIONAL = "proportional"
    MISMATCH = "mismatch"
    AMBIGUOUS = "ambiguous"


def multivector_of(terms: TermMap) -> MultiVector:
    grades = {len(k) for k in terms}
    if len(grades) != 1:
        raise ValueError(f"claim terms mix grades: {sorted(grades)}")
    return MultiVector(grades.pop(), {k: parse_polynomial(v) for k, v in terms.items()})


# ---------------------------------------------------------------------- Casimirs and differentials
CASIMIR_TABLE: Mapping[str, tuple[str, str]] = {
    "c0-i0": ("x1^2+x2^2+x3^2", "t"),
    "c0-i3": ("-x1^2-x2^2-x3^2", "t"),
    "s0-i1": ("-x1^2+x2^2+x3^2", "t"),
    "s0-i2": ("-x1^2-x2^2+x3^2", "t"),
    "c1-i0": ("x1^2+x2^2", "t"),
    "c1-i2": ("-x1^2-x2^2", "t"),
    "s1-i1": ("-x1^2+x2^2", "t"),
}

_DC2 = ("0", "0", "0", "1")
DIFFERENTIAL_TABLE: Mapping[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "c0-i0": (("2*x1", "2*x2", "2*x3", "0"), _DC2),
    "c0-i3": (("-2*x1", "-2*x2", "-2*x3", "0"), _DC2),
    "s0-i1": (("-2*x1", "2*x2", "2*x3", "0"), _DC2),
    "s0-i2": (("-2*x1", "-2*x2", "2*x3", "0"), _DC2),
    "c1-i0": (("2*x1", "2*x2", "0", "0"), _DC2),
    "c1-i2": (("-2*x1", "-2*x2", "0", "0"), _DC2),
    "s1-i1": (("-2*x1", "2*x2", "0", "0"), _DC2),
}

# ---------------------------------------------------------------------- Lie algebra list
@dataclass(frozen=True)
class LieClaim:
    item: int
    form: int
    brackets: Mapping[tuple[int, int], tuple[int, int, int]]
    name: str


LIE_CLAIMS: tuple[LieClaim, ...] = (
    LieClaim(1, 1, {(1, 2): (0, 0, 1), (1, 3): (0, -1, 0), (2, 3): (1, 0, 0)}, "so3"),
    LieClaim(2, 2, {(1, 2): (0, 0, -1), (1, 3): (0, 1, 0), (2, 3): (1, 0, 0)}, "sl2R"),
    LieClaim(3, 3, {(1, 2): (0, 0, 0), (1, 3): (0, -1, 0), (2, 3): (1, 0, 0)}, "e2"),
)

# ---------------------------------------------------------------------- leaf form
LEAF_FORM_STATEMENT = "omega = x1 / (k * sqrt(x1^2 + x2^2)) * omega_area"


# ---------------------------------------------------------------------- cohomology tables
@dataclass(frozen=True)
class CohomologyClaim:
    """
    One cohomology cell for one model.

    ``k is None`` stands for the "every k >= 1" column. ``degrees`` are the
    coefficient degrees the cell is checked at.
    """

    table: int
    model: str
    k: int | None
    degrees: tuple[int, ...]
    dim: int
    generators: tuple[TermMap, ...] = ()
    printed_text: str = ""

    @property
    def location(self) -> str:
        column = "H^k (k>=1)" if self.k is None else f"H^{self.k}"
        return f"table {self.table} / {self.model} / {column}"

    def generator_multivectors(self) -> list[MultiVector]:
        return [multivector_of(g) for g in self.generators]


def _table6_rows() -> list[CohomologyClaim]:
    rows = []
    for code, casimir in (
        ("c0-i0", "x1^2+x2^2+x3^2"),
        ("c0-i3", "-x1^2-x2^2-x3^2"),
        ("s0-i1", "-x1^2+x2^2+x3^2"),
    ):
        rows.append(CohomologyClaim(6, code, 0, (2,), 1, ({(): casimir},), f"R, generated by <{casimir}>"))
        rows.append(CohomologyClaim(6, code, None, (0, 1, 2), 0, (), "0"))
    return rows


def _graded_rows(table: int, degree: int) -> list[CohomologyClaim]:
    quadratic = degree == 2
    rows = [
        CohomologyClaim(table, "s0-i2", 0, (2,), 1, ({(): "-x1^2-x2^2+x3^2"},), "R, generated by <-x1^2-x2^2+x3^2>"),
    ]
    rows += [CohomologyClaim(table, "s0-i2", k, (degree,), 0, (), "0") for k in (1, 2, 3)]
    if quadratic:
        h1 = CohomologyClaim(
            table, "", 1, (2,), 2, ({(3,): "x1^2"}, {(3,): "x2^2"}), "R^2, generated by <a*x1^2*d3, b*x2^2*d3>, a != b"
        )
        h2 = CohomologyClaim(table, "", 2, (2,), 1, ({(1, 2): "x3^2"},), "R, generated by <x3^2*d12>")
        h3 = CohomologyClaim(table, "", 3, (2,), 1, ({(1, 2, 3): "x3^2"},), "R, generated by <x3^2*d123>")
    else:
        h1 = CohomologyClaim(
            table, "", 1, (1,), 1, ({(1,): "x1", (2,): "x2"},), "R, generated by <x1*d1 + x2*d2>"
        )
        h2 = CohomologyClaim(table, "", 2, (1,), 1, ({(1, 2): "x3"},), "R, generated by <x3*d12>")
        h3 = CohomologyClaim(table, "", 3, (1,), 1, ({(1, 2, 3): "x3"},), "R, generated by <x3*d123>")
    h0 = CohomologyClaim(table, "", 0, (2,), 1, ({(): "-x1^2+x2^2"},), "R, generated by <-x1^2+x2^2>")
    # merged cells: the dim-1 rows share one printed column
    for code in ("c1-i0", "c1-i2", "s1-i1"):
        for cell in (h0, h1, h2, h3):
            rows.append(
                CohomologyClaim(cell.table, code, cell.k, cell.degrees, cell.dim, cell.generators, cell.printed_text)
            )
    return rows


COHOMOLOGY_CLAIMS: tuple[CohomologyClaim, ...] = tuple(
    _table6_rows() + _graded_rows(7, 1) + _graded_rows(8, 2)
)

# Bivectors printed in the cohomology tables, per model.
COHOMOLOGY_BIVECTORS: Mapping[int, Mapping[str, TermMap]] = {
    6: {
        "c0-i0": {(1, 2): "x3", (1, 3): "-x2", (2, 3): "x1"},
        "c0-i3": {(1, 2): "x3", (1, 3): "-x2", (2, 3): "x1"},
        "s0-i1": {(1, 2): "-x3", (1, 3): "x2", (2, 3): "x1"},
    },
    7: {
        "s0-i2": {(1, 2): "-x3", (1, 3): "-x2", (2, 3): "x1"},
        "c1-i0": {(1, 3): "-x2", (2, 3): "x1"},
        "c1-i2": {(1, 3): "-x2", (2, 3): "x1"},
        "s1-i1": {(1, 3): "x2", (2, 3): "x1"},
    },
}
COHOMOLOGY_BIVECTORS = {**COHOMOLOGY_BIVECTORS, 8: COHOMOLOGY_BIVECTORS[7]}

TABLE6_LIE_NAMES: Mapping[str, str] = {"c0-i0": "so3", "c0-i3": "so3", "s0-i1": "sl2R"}


def claims_for(model_code: str, tables: Iterable[int] = (6, 7, 8)) -> list[CohomologyClaim]:
    wanted = set(tables)
    return [c for c in COHOMOLOGY_CLAIMS if c.model == model_code and c.table in wanted]


# ---------------------------------------------------------------------- report
@dataclass(frozen=True)
class DiscrepancyEntry:
    location: str
    printed_text: str
    computed: str
    verdict: Verdict
    note: str = ""

    def to_json(self) -> DiscrepancyJSON:
        out: dict[str, Any] = {
            "location": self.location,
            "printed_text": self.printed_text,
            "computed": self.computed,
            "verdict": self.verdict.value,
        }
        if self.note:
            out["note"] = self.note
        return out  # type: ignore[return-value]


@dataclass
class DiscrepancyReport:
    title: str
    entries: list[DiscrepancyEntry] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    header: list[str] = field(default_factory=list)

    def extend(self, other: "DiscrepancyReport") -> None:
        self.entries.extend(other.entries)

    def by_verdict(self, verdict: Verdict) -> list[DiscrepancyEntry]:
        return [e for e in self.entries if e.verdict is verdict]

    def find(self, location_prefix: str) -> list[DiscrepancyEntry]:
        return [e for e in self.entries if e.location.startswith(location_prefix)]

    def counts(self) -> dict[str, int]:
        out = {v.value: 0 for v in Verdict}
        for e in self.entries:
            out[e.verdict.value] += 1
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "table": {"header": list(self.header), "rows": [list(r) for r in self.rows]},
            "discrepancies": [e.to_json() for e in self.entries],
            "counts": self.counts(),
        }

    def to_rows(self) -> list[list[Any]]:
        rows: list[list[Any]] = [["location", "printed_text", "computed", "verdict", "note"]]
        rows.extend([e.location, e.printed_text, e.computed, e.verdict.value, e.note] for e in self.entries)
        return rows

    def to_text(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        if self.rows:
            table = [list(map(str, self.header))] + [[str(c) for c in r] for r in self.rows]
            widths = [max(len(r[i]) for r in table if i < len(r)) for i in range(len(table[0]))]
            for r in table:
                lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
            lines.append("")
        lines.append("discrepancies:")
        for e in self.entries:
            lines.append(f"  [{e.verdict.value}] {e.location}")
            lines.append(f"      printed:  {e.printed_text}")
            lines.append(f"      computed: {e.computed}")
            if e.note:
                lines.append(f"      note:     {e.note}")
        counts = ", ".join(f"{k}={v}" for k, v in self.counts().items())
        lines.append(f"summary: {counts}")
        return "\n".join(lines)
