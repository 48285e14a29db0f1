# bmpoisson/cli/service_cli.py
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..claims import DiscrepancyReport
from ..cohomology import CohomologyReport, table_report
from ..errors import PolynomialParseError, UsageError
from ..glue import GlueReport, build_glued_structure, glue_report
from ..leaves import LeafSample, trace_leaf
from ..lie import lie_class_of
from ..models import flaschka_ratiu, model as lookup_model, proportionality_check
from ..multivector import (
    Covector,
    bundle_map,
    format_multivector,
    is_poisson,
    multivector_to_json,
)
from ..normalize import to_jsonable
from ..poly import Polynomial, as_polynomial, format_polynomial
from ..storage import write_leaf_csv
from ..suites import GLUE_JACOBIATOR_TOL, SuiteOptions, VerifyReport, run_suites
from ..tables import build_table
from .config_cli import ConfigContext, effective_config, render_config_debug_report


__all__ = [
    "Document",
    "TraceResult",
    "GlueOutcome",
    "ConfigDump",
    "describe_model",
    "run_verify",
    "render_tables",
    "trace_to_csv",
    "glue_diagnostics",
    "cohomology_report",
    "fr_bivector",
    "config_dump",
]

log = logging.getLogger("bmpoisson.cli.service")


# ---------- Result models ----------

def _cell(value: Any) -> Any:
    value = to_jsonable(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return value


@dataclass
class Document:
    """A flat-ish mapping rendered as JSON, ``key,value`` CSV rows or ``key: value`` text."""
    title: str
    data: Dict[str, Any]

    def to_json(self) -> Any:
        return to_jsonable(self.data)

    def to_rows(self) -> List[List[Any]]:
        return [["key", "value"]] + [[k, _cell(v)] for k, v in self.data.items()]

    def to_text(self) -> str:
        lines = [self.title]
        lines.extend(f"  {k}: {_cell(v)}" for k, v in self.data.items())
        return "\n".join(lines)


@dataclass
class TraceResult:
    """Where a traced leaf was written, with the sample itself."""
    csv_path: Path
    sidecar_path: Path
    sample: LeafSample

    def document(self) -> Document:
        data: Dict[str, Any] = {"csv": str(self.csv_path), "sidecar": str(self.sidecar_path)}
        data.update(self.sample.sidecar())
        data["points"] = len(self.sample.points)
        data["end"] = list(self.sample.points[-1])
        data["max_radius"] = self.sample.max_radius()
        return Document("leaf trace", data)

    def to_json(self) -> Any:
        return self.document().to_json()

    def to_rows(self) -> List[List[Any]]:
        return self.document().to_rows()

    def to_text(self) -> str:
        return self.document().to_text()


@dataclass
class GlueOutcome:
    report: GlueReport
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.report.max_jacobiator < self.tolerance

    def to_json(self) -> Any:
        out = dict(self.report.to_json())
        out.update({"tolerance": self.tolerance, "ok": self.ok})
        return out

    def to_rows(self) -> List[List[Any]]:
        return self.report.to_rows()

    def to_text(self) -> str:
        verdict = "OK" if self.ok else f"FAILED (tolerance {self.tolerance:.1e})"
        return f"{self.report.to_text()}\n{verdict}"


@dataclass
class ConfigDump:
    ctx: ConfigContext
    sections: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def to_json(self) -> Any:
        return to_jsonable({
            "anchor": str(self.ctx.anchor),
            "user_config": str(self.ctx.user_path) if self.ctx.user_path else None,
            "project_config": str(self.ctx.source_path) if self.ctx.source_path else None,
            "effective": {sec: {k: str(v) if isinstance(v, Path) else v for k, v in body.items()}
                          for sec, body in self.sections.items()},
        })

    def to_rows(self) -> List[List[Any]]:
        rows: List[List[Any]] = [["section", "key", "value"]]
        for sec, body in self.sections.items():
            rows.extend([sec, k, _cell(str(v) if isinstance(v, Path) else v)] for k, v in sorted(body.items()))
        return rows

    def to_text(self) -> str:
        return render_config_debug_report(self.ctx)


# ---------- Services (no argparse, no config IO) ----------

def _poly_arg(value: "str | Polynomial", flag: str) -> Polynomial:
    try:
        return as_polynomial(value)
    except (PolynomialParseError, TypeError) as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def describe_model(code: str, *, k: "str | Polynomial" = "1", logger: Optional[logging.Logger] = None) -> Document:
    """Casimirs, differentials, derived and printed bivectors, proportionality factor and Lie class."""
    lg = logger or log
    m = lookup_model(code)
    k_poly = _poly_arg(k, "--k")
    derived = flaschka_ratiu(m.casimirs[0], m.casimirs[1], k_poly)
    factor = proportionality_check(m.bivector, m.printed_bivector)
    lc = lie_class_of(m.normal_form)
    lg.debug("%s: lie class %s, factor %s", m.code, lc.name.value, factor)
    return Document(f"model {m.code}", {
        "id": m.code,
        "kind": m.id.kind.value,
        "component_dim": m.id.component_dim,
        "morse_index": m.id.morse_index,
        "singular_set": m.singular_set,
        "k": format_polynomial(k_poly),
        "casimirs": [format_polynomial(c) for c in m.casimirs],
        "differentials": [[format_polynomial(c) for c in dc.components] for dc in m.differentials()],
        "bivector": multivector_to_json(derived),
        "bivector_text": format_multivector(derived),
        "table4_form": m.table4_form,
        "table4_bivector": multivector_to_json(m.printed_bivector),
        "proportionality_factor": format_polynomial(factor) if factor is not None else None,
        "normal_form": multivector_to_json(m.normal_form),
        "lie_class": lc.name.value,
        "lie_algebra": lc.to_json(),
        "printed_lie_name": m.printed_lie_name,
        "printed_name_missing": m.printed_lie_name is None,
        "lie_matches_printed": m.printed_lie_name == lc.name.value,
    })


def run_verify(
    suite: str = "all",
    *,
    opts: SuiteOptions,
    logger: Optional[logging.Logger] = None,
) -> VerifyReport:
    lg = logger or log
    report = run_suites(suite, opts, logger=lg)
    for s in report.suites:
        for c in s.failures():
            lg.error("%s: %s failed: %s", s.name, c.name, c.detail)
    return report


def render_tables(which: "str | int" = "all", *, logger: Optional[logging.Logger] = None) -> DiscrepancyReport:
    lg = logger or log
    report = build_table(which)
    lg.info("%s: %s", report.title, report.counts())
    return report


def trace_to_csv(
    model_code: str,
    *,
    hamiltonians: Sequence["str | Polynomial"],
    start: Sequence[float],
    step: float,
    n_steps: int,
    out: Path,
    k: "str | Polynomial" = "1",
    logger: Optional[logging.Logger] = None,
) -> TraceResult:
    """Trace the leaf of ``k * normal_form`` through *start* and write CSV + JSON sidecar."""
    lg = logger or log
    m = lookup_model(model_code)
    pi = m.conformal(_poly_arg(k, "--k"))
    hs = [_poly_arg(h, "--h") for h in hamiltonians]
    if not hs:
        raise UsageError("trace needs at least one --h Hamiltonian")
    sample = trace_leaf(pi, start, hs, step, n_steps, model=m)
    if sample.hit_singular_set:
        lg.warning("%s: trace reached the singular set after %d points", m.code, len(sample.points))
    side = write_leaf_csv(Path(out), sample.points, sample.sidecar())
    lg.info("%s: %d points, casimir drift %.3e -> %s", m.code, len(sample.points), sample.casimir_drift, out)
    return TraceResult(Path(out), side, sample)


def glue_diagnostics(
    model_code: str,
    *,
    grid: str,
    h: float,
    r0: float,
    r1: float,
    eps: float,
    k_s: "str | Polynomial",
    kappa: "str | Polynomial",
    exclude: float,
    tolerance: float = GLUE_JACOBIATOR_TOL,
    logger: Optional[logging.Logger] = None,
) -> GlueOutcome:
    lg = logger or log
    gs = build_glued_structure(
        model_code,
        k_s=_poly_arg(k_s, "--k-s"),
        kappa=_poly_arg(kappa, "--kappa"),
        r0=r0,
        r1=r1,
        eps=eps,
    )
    report = glue_report(gs, grid, h=h, exclude=exclude)
    lg.info("%s: max jacobiator %.3e on grid %s", gs.model.code, report.max_jacobiator, grid)
    return GlueOutcome(report, tolerance)


def cohomology_report(
    model_code: str,
    *,
    degrees: Sequence[int],
    logger: Optional[logging.Logger] = None,
) -> CohomologyReport:
    if any(d < 0 for d in degrees):
        raise UsageError(f"coefficient degrees must be non-negative, got {list(degrees)}")
    return table_report(model_code, degrees, logger=logger or log)


def fr_bivector(
    c1: "str | Polynomial",
    c2: "str | Polynomial",
    *,
    k: "str | Polynomial" = "1",
    logger: Optional[logging.Logger] = None,
) -> Document:
    """Raw determinant bivector of two user Casimirs, with its Poisson and annihilation checks."""
    lg = logger or log
    p1, p2, kp = _poly_arg(c1, "--c1"), _poly_arg(c2, "--c2"), _poly_arg(k, "--k")
    pi = flaschka_ratiu(p1, p2, kp)
    annihilates = [bundle_map(pi, Covector.differential(c)).is_zero for c in (p1, p2)]
    poisson = is_poisson(pi)
    lg.debug("fr: %d terms, poisson=%s", len(pi), poisson)
    return Document("Flaschka-Ratiu bivector", {
        "casimirs": [format_polynomial(p1), format_polynomial(p2)],
        "k": format_polynomial(kp),
        "bivector": multivector_to_json(pi),
        "bivector_text": format_multivector(pi),
        "is_poisson": poisson,
        "annihilates_casimirs": annihilates,
    })


def config_dump(ctx: ConfigContext) -> ConfigDump:
    return ConfigDump(ctx, effective_config(ctx))
