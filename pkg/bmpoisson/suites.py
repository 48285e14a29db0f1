"""
Property suites run by ``bmpoisson verify``.

Each suite returns a :class:`SuiteResult` made of named checks; a suite passes
iff every check passes. Randomized suites draw from one seeded generator so a
run is reproducible from the seed printed in the report header.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import glue as glue_mod
from .cohomology import casimir_space, cohomology_dims
from .errors import BMPoissonError, CohomologyError, UsageError
from .leaves import corrected_frame, frame_validity, leaf_density, symplectic_eval, symplectic_eval_dual
from .lie import LieName, lie_class_of
from .models import catalog, flaschka_ratiu
from .multivector import hamiltonian_field, is_poisson, matrix_ranks, numeric_field, pfaffian, schouten, wedge
from .poly import format_polynomial, parse_polynomial
from .sampling import DEFAULT_SEED, make_rng, random_points, random_polynomial, random_triple

log = logging.getLogger("bmpoisson.suites")

SYMPLECTIC_RTOL = 1e-9
GLUE_JACOBIATOR_TOL = 1e-6

EXPECTED_LIE: dict[str, LieName] = {
    "c0-i0": LieName.SO3,
    "c0-i3": LieName.SO3,
    "s0-i1": LieName.SL2R,
    "s0-i2": LieName.SL2R,
    "c1-i0": LieName.E2,
    "c1-i2": LieName.E2,
    "s1-i1": LieName.E11,
}


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = DEFAULT_SEED
    samples: int = 1000
    triples: int = 500
    grid: str = "-1:1:21"
    h: float = 1e-4
    exclude: float = 1e-3


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


@dataclass
class VerifyReport:
    seed: int
    suites: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def to_json(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "ok": self.ok,
            "suites": [
                {
                    "name": s.name,
                    "ok": s.ok,
                    "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in s.checks],
                }
                for s in self.suites
            ],
        }

    def to_rows(self) -> list[list[Any]]:
        rows: list[list[Any]] = [["suite", "check", "passed", "detail"]]
        for s in self.suites:
            rows.extend([s.name, c.name, c.passed, c.detail] for c in s.checks)
        return rows

    def to_text(self) -> str:
        lines = [f"seed: {self.seed}"]
        for s in self.suites:
            passed = sum(c.passed for c in s.checks)
            lines.append(f"{s.name}: {passed}/{len(s.checks)} checks pass{'' if s.ok else ' -- FAILED'}")
            for c in s.failures():
                lines.append(f"  FAIL {c.name}: {c.detail}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


# ---------------------------------------------------------------------- suites
def suite_jacobi(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("jacobi")
    for k_text in ("1", "2 + x1^2"):
        k = parse_polynomial(k_text)
        for m in catalog():
            pi = flaschka_ratiu(*m.casimirs, k)
            res.add(f"{m.code} k={k_text}: [pi, pi] = 0", is_poisson(pi))
            res.add(f"{m.code} k={k_text}: pfaffian = 0", pfaffian(pi).is_zero)
    return res


def _singular_points(m) -> np.ndarray:
    values = np.linspace(-1.0, 1.0, 5)
    if m.id.component_dim == 0:
        return np.array([(0.0, 0.0, 0.0, t) for t in values])
    return np.array([(0.0, 0.0, x3, t) for x3 in values for t in values])


def suite_casimir(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("casimir")
    rng = make_rng(opts.seed)
    off_axis = random_points(rng, 200)
    for m in catalog():
        for name, c in zip(("C1", "C2"), m.casimirs):
            for label, pi in (("derived", m.bivector), ("normal form", m.normal_form)):
                field_c = hamiltonian_field(pi, c)
                res.add(f"{m.code} {label}: X_{name} = 0", field_c.is_zero, str(field_c))
        fn = numeric_field(m.normal_form)
        on_set = matrix_ranks(fn(_singular_points(m)))
        off_set = matrix_ranks(fn(off_axis))
        res.add(f"{m.code}: rank 0 on {m.singular_set}", bool(np.all(on_set == 0)), f"ranks {sorted(set(on_set.tolist()))}")
        res.add(f"{m.code}: rank 2 off the singular set", bool(np.all(off_set == 2)), f"ranks {sorted(set(off_set.tolist()))}")
    return res


def suite_lie(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("lie")
    for m in catalog():
        try:
            lc = lie_class_of(m.normal_form)
        except BMPoissonError as exc:
            res.add(f"{m.code}: classify", False, str(exc))
            continue
        expected = EXPECTED_LIE[m.code]
        res.add(f"{m.code}: {expected.value}", lc.name is expected, f"got {lc.name.value}")
        res.add(f"{m.code}: Jacobi on structure constants", lc.structure_constants.satisfies_jacobi())
    return res


def _k_values(points: np.ndarray) -> list[tuple[str, np.ndarray]]:
    rho2 = points[:, 0] ** 2 + points[:, 1] ** 2
    return [("1", np.ones(len(points))), ("2", np.full(len(points), 2.0)), ("1 + x1^2 + x2^2", 1.0 + rho2)]


def suite_symplectic(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("symplectic")
    rng = make_rng(opts.seed)
    points = random_points(rng, opts.samples)
    for m in catalog():
        frames = [corrected_frame(m, q).as_arrays() for q in points]
        bad = sum(not frame_validity(m, q, repaired=True).ok() for q in points)
        res.add(f"{m.code}: frame tangent and orthogonal", bad == 0, f"{bad} points fail")
        for k_text, k_vals in _k_values(points):
            fn = numeric_field(m.conformal(parse_polynomial(k_text)))
            worst = worst_dual = 0.0
            for q, (u, v), kq in zip(points, frames, k_vals):
                expected = leaf_density(q, float(kq))
                scale = abs(expected)
                worst = max(worst, abs(symplectic_eval(fn, q, u, v) - expected) / scale)
                worst_dual = max(worst_dual, abs(symplectic_eval_dual(fn, q, u, v) - expected) / scale)
            res.add(f"{m.code} k={k_text}: leaf form = x1/(k rho)", worst < SYMPLECTIC_RTOL, f"max rel. error {worst:.2e}")
            res.add(f"{m.code} k={k_text}: dual expression agrees", worst_dual < SYMPLECTIC_RTOL, f"max rel. error {worst_dual:.2e}")
    return res


def suite_cohomology(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("cohomology")
    for m in catalog():
        for d in range(4):
            try:
                result = cohomology_dims(m.normal_form, d, with_generators=False)
            except CohomologyError as exc:
                res.add(f"{m.code} d={d}: d_pi^2 = 0", False, str(exc))
                continue
            res.add(f"{m.code} d={d}: d_pi^2 = 0", True, f"h = {result.dims}")
            if d == 2:
                casimirs = casimir_space(m.normal_form, 2)
                res.add(
                    f"{m.code}: h0 at d=2 equals the quadratic Casimir count",
                    result.dims[0] == len(casimirs),
                    f"h0 = {result.dims[0]}, Casimirs: {', '.join(map(format_polynomial, casimirs))}",
                )
            if EXPECTED_LIE[m.code] is LieName.SO3 and d <= 2:
                res.add(f"{m.code} d={d}: h1 = h2 = 0", result.dims[1] == result.dims[2] == 0, f"h = {result.dims}")
    return res


def suite_glue(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("glue")
    gs = glue_mod.build_glued_structure("c0-i0")
    report = glue_mod.glue_report(gs, opts.grid, h=opts.h, exclude=opts.exclude)
    res.add(
        f"max jacobiator < {GLUE_JACOBIATOR_TOL:g} on {opts.grid}",
        report.max_jacobiator < GLUE_JACOBIATOR_TOL,
        f"{report.max_jacobiator:.3e}",
    )
    hist = report.rank_histogram
    rank4 = sum(bucket.get(4, 0) for bucket in hist.values())
    rank0_off = sum(bucket.get(0, 0) for label, bucket in hist.items() if label != glue_mod.PointClass.SINGULAR.value)
    res.add("rank never 4", rank4 == 0, f"{rank4} points of rank 4")
    res.add("rank 0 only on the singular set", rank0_off == 0, f"{rank0_off} regular points of rank 0")
    pts = glue_mod.GridSpec.parse(opts.grid).points()
    overlap = pts[gs.label_points(pts) == glue_mod.PointClass.OVERLAP.value]
    weight = glue_mod.interpolation_weight(gs, overlap) if len(overlap) else np.ones(1)
    res.add("g*sigma + rho >= 0 on the overlap", bool(np.all(weight >= 0)), f"min {float(np.min(weight)):.3e}")
    return res


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def suite_schouten(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("schouten")
    rng = make_rng(opts.seed)
    fails = {"graded antisymmetry": 0, "graded Leibniz": 0, "graded Jacobi": 0}
    for _ in range(opts.triples):
        a, b, c = random_triple(rng)
        p, q = a.grade, b.grade
        if schouten(a, b) != schouten(b, a) * -_sign((p - 1) * (q - 1)):
            fails["graded antisymmetry"] += 1
        lhs = schouten(a, wedge(b, c))
        rhs = wedge(schouten(a, b), c) + wedge(b, schouten(a, c)) * _sign((p - 1) * q)
        if lhs != rhs:
            fails["graded Leibniz"] += 1
        lhs = schouten(a, schouten(b, c))
        rhs = schouten(schouten(a, b), c) + schouten(b, schouten(a, c)) * _sign((p - 1) * (q - 1))
        if lhs != rhs:
            fails["graded Jacobi"] += 1
    for name, count in fails.items():
        res.add(f"{name} on {opts.triples} random triples", count == 0, f"{count} failures")
    return res


def suite_poly(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("poly")
    rng = make_rng(opts.seed)
    fails = {"ring axioms": 0, "product rule": 0, "text round trip": 0, "exact evaluation": 0}
    for _ in range(opts.triples):
        p, q, r = (random_polynomial(rng) for _ in range(3))
        if p * (q + r) != p * q + p * r or p * q != q * p or (p + q) - q != p:
            fails["ring axioms"] += 1
        i = int(rng.integers(1, 5))
        if (p * q).partial(i) != p.partial(i) * q + p * q.partial(i):
            fails["product rule"] += 1
        if parse_polynomial(format_polynomial(p)) != p:
            fails["text round trip"] += 1
        point = [int(x) for x in rng.integers(-3, 4, size=4)]
        if float(p.evaluate_exact(point)) != float(p.evaluate(point)):
            fails["exact evaluation"] += 1
    for name, count in fails.items():
        res.add(f"{name} on {opts.triples} random polynomials", count == 0, f"{count} failures")
    return res


SUITES: dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    "poly": suite_poly,
    "schouten": suite_schouten,
    "jacobi": suite_jacobi,
    "casimir": suite_casimir,
    "lie": suite_lie,
    "symplectic": suite_symplectic,
    "cohomology": suite_cohomology,
    "glue": suite_glue,
}


def suite_names() -> list[str]:
    return ["all", *SUITES]


def run_suites(
    name: str = "all",
    opts: SuiteOptions | None = None,
    *,
    logger: logging.Logger | None = None,
) -> VerifyReport:
    lg = logger or log
    opts = opts or SuiteOptions()
    if name != "all" and name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; expected one of {', '.join(suite_names())}")
    selected = list(SUITES) if name == "all" else [name]
    results = []
    for key in selected:
        t0 = time.perf_counter()
        result = SUITES[key](opts)
        result.seconds = time.perf_counter() - t0
        lg.info("%s: %s in %.2fs", key, "ok" if result.ok else "FAILED", result.seconds)
        results.append(result)
    return VerifyReport(opts.seed, results)
