"""
Reproduction of the Casimir, differential, bivector, frame and cohomology
tables, each cell compared with its transcription.

Every builder returns a :class:`~bmpoisson.claims.DiscrepancyReport` whose
``rows`` are the recomputed table and whose ``entries`` carry one verdict per
transcribed cell.
"""
from __future__ import annotations

import logging
from typing import Callable

from . import claims
from .claims import DiscrepancyEntry, DiscrepancyReport, Verdict
from .cohomology import table_report
from .errors import LeafGeometryError, UsageError
from .leaves import corrected_frame, frame_text, frame_validity, leaf_density, proposition_form, symplectic_eval
from .lie import StructureConstants, lie_class_of, structure_constants
from .models import TABLE4_FORMS, LocalModel, catalog, model, proportionality_check
from .multivector import MultiVector, format_multivector
from .poly import ONE, format_polynomial, parse_polynomial

log = logging.getLogger("bmpoisson.tables")

# Off-axis points for the leaf-form comparison.
LEAF_FORM_POINTS: tuple[tuple[float, float, float, float], ...] = (
    (0.3, 0.7, 0.5, 0.0),
    (-0.8, 0.4, -0.2, 0.1),
    (1.2, -0.5, 0.9, 0.0),
)
LEAF_FORM_RTOL = 1e-9

TABLE_DEGREES = {6: (0, 1, 2), 7: (1, 2), 8: (2,)}


def _tuple_text(values) -> str:
    return "(" + ", ".join(format_polynomial(v) for v in values) + ")"


def _proportional_verdict(derived: MultiVector, printed: MultiVector) -> tuple[Verdict, str]:
    factor = proportionality_check(derived, printed)
    if factor is None:
        return Verdict.AMBIGUOUS, "not proportional to the derived bivector"
    if factor == ONE:
        return Verdict.MATCHES, ""
    return Verdict.PROPORTIONAL, f"derived = ({format_polynomial(factor)}) * printed"


# ---------------------------------------------------------------------- Casimirs, differentials, bivectors
def table2() -> DiscrepancyReport:
    report = DiscrepancyReport("Casimirs", header=["model", "C1", "C2"])
    for m in catalog():
        report.rows.append([m.code, *(format_polynomial(c) for c in m.casimirs)])
        for name, printed, computed in zip(("C1", "C2"), claims.CASIMIR_TABLE[m.code], m.casimirs):
            verdict = Verdict.MATCHES if parse_polynomial(printed) == computed else Verdict.MISMATCH
            report.entries.append(
                DiscrepancyEntry(f"table 2 / {m.code} / {name}", printed, format_polynomial(computed), verdict)
            )
    return report


def table3() -> DiscrepancyReport:
    report = DiscrepancyReport("Casimir differentials", header=["model", "dC1", "dC2"])
    for m in catalog():
        grads = [c.gradient() for c in m.casimirs]
        report.rows.append([m.code, *(_tuple_text(g) for g in grads)])
        for name, printed, grad in zip(("dC1", "dC2"), claims.DIFFERENTIAL_TABLE[m.code], grads):
            verdict = Verdict.MATCHES if tuple(map(parse_polynomial, printed)) == tuple(grad) else Verdict.MISMATCH
            report.entries.append(
                DiscrepancyEntry(f"table 3 / {m.code} / {name}", "(" + ", ".join(printed) + ")", _tuple_text(grad), verdict)
            )
    return report


def table4() -> DiscrepancyReport:
    report = DiscrepancyReport("Bivectors", header=["model", "form", "derived (k=1)", "printed"])
    for m in catalog():
        derived, printed = m.bivector, m.printed_bivector
        verdict, note = _proportional_verdict(derived, printed)
        if verdict is Verdict.AMBIGUOUS:
            note = f"printed form ({m.table4_form}) duplicates another row and is {note}"
        report.rows.append([m.code, f"({m.table4_form})", format_multivector(derived), format_multivector(printed)])
        report.entries.append(
            DiscrepancyEntry(
                f"table 4 / {m.code}", format_multivector(printed), format_multivector(derived), verdict, note
            )
        )
    return report


# ---------------------------------------------------------------------- frames and the leaf form
def table5(point=LEAF_FORM_POINTS[0]) -> DiscrepancyReport:
    report = DiscrepancyReport("Leaf frames", header=["model", "u", "v", "annihilation", "orthogonality"])
    for m in catalog():
        printed_u, printed_v = frame_text(m)
        fixed_u, fixed_v = frame_text(m, repaired=True)
        validity = frame_validity(m, point)
        report.rows.append([m.code, printed_u, printed_v, f"{validity.annihilation:.1e}", f"{validity.orthogonality:.1e}"])
        for name, printed, fixed in (("u", printed_u, fixed_u), ("v", printed_v, fixed_v)):
            if printed == fixed:
                entry = DiscrepancyEntry(f"table 5 / {m.code} / {name}", printed, printed, Verdict.MATCHES)
            else:
                entry = DiscrepancyEntry(
                    f"table 5 / {m.code} / {name}", printed, fixed, Verdict.MISMATCH,
                    note=f"transcribed frame is not tangent to the leaf (residual {validity.annihilation:.1e})",
                )
            report.entries.append(entry)
    return report


def _leaf_form_deviation(m: LocalModel) -> tuple[float, float]:
    density_dev = form_dev = 0.0
    for q in LEAF_FORM_POINTS:
        u, v = corrected_frame(m, q).as_arrays()
        value = symplectic_eval(m.normal_form, q, u, v)
        density = leaf_density(q, 1.0)
        scale = max(abs(density), 1e-300)
        density_dev = max(density_dev, abs(value - density) / scale)
        form_dev = max(form_dev, abs(value - proposition_form(m, 1.0, q)) / scale)
    return density_dev, form_dev


def leaf_form() -> DiscrepancyReport:
    report = DiscrepancyReport("Leaf symplectic form", header=["model", "vs density", "vs density * area"])
    for m in catalog():
        try:
            density_dev, form_dev = _leaf_form_deviation(m)
        except LeafGeometryError as exc:
            report.entries.append(
                DiscrepancyEntry(f"leaf form / {m.code}", claims.LEAF_FORM_STATEMENT, str(exc), Verdict.MISMATCH)
            )
            continue
        report.rows.append([m.code, f"{density_dev:.1e}", f"{form_dev:.1e}"])
        computed = f"omega(u, v) = x1 / (k * rho) on the frame (max rel. dev. {density_dev:.1e})"
        if form_dev <= LEAF_FORM_RTOL:
            verdict, note = Verdict.MATCHES, ""
        elif density_dev <= LEAF_FORM_RTOL:
            verdict = Verdict.MISMATCH
            note = f"holds as a density on the frame; against |u||v| * omega_area it deviates by {form_dev:.1e}"
        else:
            verdict, note = Verdict.MISMATCH, f"leaf form disagrees with the density by {density_dev:.1e}"
        report.entries.append(DiscrepancyEntry(f"leaf form / {m.code}", claims.LEAF_FORM_STATEMENT, computed, verdict, note))
    return report


# ---------------------------------------------------------------------- Lie algebras
def lie_list() -> DiscrepancyReport:
    report = DiscrepancyReport("Lie algebras", header=["model", "lie class", "killing inertia", "printed name"])
    for item in claims.LIE_CLAIMS:
        printed = MultiVector(2, {k: parse_polynomial(v) for k, v in TABLE4_FORMS[item.form].items()})
        claimed = StructureConstants.from_brackets(dict(item.brackets))
        computed = structure_constants(printed)
        printed_text = ", ".join(f"{k} = {v}" for k, v in claimed.to_json().items())
        computed_text = ", ".join(f"{k} = {v}" for k, v in computed.to_json().items())
        if claimed == computed:
            entry = DiscrepancyEntry(f"lie list ({item.item})", printed_text, computed_text, Verdict.MATCHES)
        else:
            agree = [
                n for n, terms in TABLE4_FORMS.items()
                if structure_constants(MultiVector(2, {k: parse_polynomial(v) for k, v in terms.items()})) == claimed
            ]
            note = f"brackets agree with form(s) {agree}" if agree else "brackets agree with no printed form"
            entry = DiscrepancyEntry(f"lie list ({item.item})", printed_text, computed_text, Verdict.MISMATCH, note)
        report.entries.append(entry)

    for m in catalog():
        lc = lie_class_of(m.normal_form)
        report.rows.append([m.code, lc.name.value, str(lc.killing_signature), m.printed_lie_name or "-"])
        location = f"lie list / {m.code}"
        if m.printed_lie_name is None:
            entry = DiscrepancyEntry(location, "-", lc.name.value, Verdict.AMBIGUOUS, "no printed name")
        elif m.printed_lie_name == lc.name.value:
            entry = DiscrepancyEntry(location, m.printed_lie_name, lc.name.value, Verdict.MATCHES)
        else:
            entry = DiscrepancyEntry(
                location, m.printed_lie_name, lc.name.value, Verdict.MISMATCH,
                note=f"Killing inertia {lc.killing_signature}, derived dimension {lc.derived_dim}",
            )
        report.entries.append(entry)
    return report


# ---------------------------------------------------------------------- cohomology tables
def cohomology_table(number: int) -> DiscrepancyReport:
    if number not in TABLE_DEGREES:
        raise UsageError(f"no cohomology table {number}")
    printed_rows = claims.COHOMOLOGY_BIVECTORS[number]
    report = DiscrepancyReport(
        f"Poisson cohomology (table {number})",
        header=["model", "printed bivector", "d", "h0", "h1", "h2", "h3"],
    )
    for code, terms in printed_rows.items():
        m = model(code)
        printed = claims.multivector_of(terms)
        verdict, note = _proportional_verdict(m.bivector, printed)
        report.entries.append(
            DiscrepancyEntry(
                f"table {number} / {code} / bivector", format_multivector(printed), format_multivector(m.bivector),
                verdict, note,
            )
        )
        if number == 6:
            lc = lie_class_of(m.normal_form)
            printed_lie = claims.TABLE6_LIE_NAMES[code]
            report.entries.append(
                DiscrepancyEntry(
                    f"table 6 / {code} / Lie algebra", printed_lie, lc.name.value,
                    Verdict.MATCHES if printed_lie == lc.name.value else Verdict.MISMATCH,
                )
            )
        cr = table_report(code, TABLE_DEGREES[number], tables=(number,))
        for d in cr.degrees:
            report.rows.append([code, format_multivector(printed), d, *cr.results[d].dims])
        report.entries.extend(cr.discrepancies)
    return report


def table6() -> DiscrepancyReport:
    return cohomology_table(6)


def table7() -> DiscrepancyReport:
    return cohomology_table(7)


def table8() -> DiscrepancyReport:
    return cohomology_table(8)


BUILDERS: dict[str, Callable[[], DiscrepancyReport]] = {
    "2": table2,
    "3": table3,
    "4": table4,
    "5": table5,
    "6": table6,
    "7": table7,
    "8": table8,
    "lie": lie_list,
    "leaf": leaf_form,
}


def build_table(which: "str | int") -> DiscrepancyReport:
    key = str(which).strip().lower()
    if key == "all":
        return full_report()
    builder = BUILDERS.get(key)
    if builder is None:
        raise UsageError(f"unknown table {which!r}; expected one of {', '.join(BUILDERS)} or all")
    return builder()


def full_report() -> DiscrepancyReport:
    """Every transcribed cell with its verdict; the tables themselves are left out."""
    report = DiscrepancyReport("Discrepancy report")
    for builder in BUILDERS.values():
        part = builder()
        log.info("%s: %s", part.title, part.counts())
        report.extend(part)
    return report
