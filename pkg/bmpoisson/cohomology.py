"""
Poisson cohomology of linear bivectors with homogeneous polynomial coefficients.

For a bivector with linear coefficients ``d_pi = [pi, .]`` preserves the
coefficient degree, so the complex splits into finite slices ``(k, d)``:
grade-``k`` multivectors on (x1, x2, x3) whose coefficients are homogeneous of
degree ``d``. Everything here is exact rational linear algebra over
``sympy.Matrix``; no floating point is involved.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

import sympy

from .claims import CohomologyClaim, DiscrepancyEntry, Verdict, claims_for
from .errors import CohomologyError, GradeError
from .multivector import MultiVector, format_multivector, hamiltonian_field, multivector_to_json, schouten
from .poly import Polynomial, format_polynomial, grlex_key

log = logging.getLogger("bmpoisson.cohomology")

SPACE_DIM = 3
DEFAULT_DEGREES: tuple[int, ...] = (0, 1, 2, 3)

Indices = tuple[int, ...]


def _q(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value: Any) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


def _monomials(d: int) -> list[tuple[int, int, int, int]]:
    monos = [(a, b, d - a - b, 0) for a in range(d + 1) for b in range(d + 1 - a)]
    return sorted(monos, key=grlex_key)


# ---------------------------------------------------------------------- slices
@dataclass(frozen=True)
class GradedSlice:
    """Grade ``k`` multivectors with degree-``d`` homogeneous coefficients in x1..x3."""

    multivector_grade: int
    coeff_degree: int
    index_tuples: tuple[Indices, ...]
    monomials: tuple[tuple[int, int, int, int], ...]

    @property
    def size(self) -> int:
        return len(self.index_tuples) * len(self.monomials)

    @cached_property
    def _positions(self) -> dict[tuple[Indices, tuple[int, ...]], int]:
        return {key: n for n, key in enumerate(itertools.product(self.index_tuples, self.monomials))}

    @property
    def basis(self) -> list[MultiVector]:
        return [
            MultiVector(self.multivector_grade, {idx: Polynomial.monomial(mono)})
            for idx, mono in itertools.product(self.index_tuples, self.monomials)
        ]

    def coords(self, mv: MultiVector) -> list[Fraction]:
        if mv.grade != self.multivector_grade:
            raise GradeError(f"expected grade {self.multivector_grade}, got {mv.grade}")
        out = [Fraction(0)] * self.size
        for idx, coeff in mv.items():
            for mono, c in coeff.items():
                pos = self._positions.get((idx, mono))
                if pos is None:
                    raise CohomologyError(
                        f"term {format_polynomial(Polynomial.monomial(mono, c))} on {idx} is outside slice "
                        f"(k={self.multivector_grade}, d={self.coeff_degree})"
                    )
                out[pos] = c
        return out

    def column(self, mv: MultiVector) -> sympy.Matrix:
        return sympy.Matrix(self.size, 1, [_q(c) for c in self.coords(mv)])

    def element(self, vector: Iterable[Any]) -> MultiVector:
        terms: dict[Indices, Polynomial] = {}
        for (idx, mono), value in zip(itertools.product(self.index_tuples, self.monomials), vector):
            c = _fraction(value)
            if c:
                terms[idx] = terms.get(idx, Polynomial()) + Polynomial.monomial(mono, c)
        return MultiVector(self.multivector_grade, terms)


def build_slice(k: int, d: int) -> GradedSlice:
    if not isinstance(k, int) or not 0 <= k <= SPACE_DIM:
        raise CohomologyError(f"multivector grade must be in 0..{SPACE_DIM}, got {k!r}")
    if not isinstance(d, int) or d < 0:
        raise CohomologyError(f"coefficient degree must be a non-negative integer, got {d!r}")
    indices = tuple(itertools.combinations(range(1, SPACE_DIM + 1), k))
    return GradedSlice(k, d, indices, tuple(_monomials(d)))


# ---------------------------------------------------------------------- differential
@dataclass(frozen=True)
class DifferentialMatrix:
    """``d_pi`` from ``source`` to ``target``; ``target`` is ``None`` past the top grade."""

    source: GradedSlice
    target: GradedSlice | None
    entries: sympy.Matrix

    @property
    def rank(self) -> int:
        return int(self.entries.rank()) if self.entries.rows and self.entries.cols else 0

    @property
    def nullity(self) -> int:
        return self.source.size - self.rank

    def apply(self, mv: MultiVector) -> sympy.Matrix:
        return self.entries * self.source.column(mv)


def _check_linear(pi: MultiVector) -> None:
    if pi.grade != 2:
        raise GradeError(f"the differential needs a bivector, got grade {pi.grade}")
    for (i, j), coeff in pi.items():
        if j > SPACE_DIM or coeff.uses_variable(4):
            raise CohomologyError("bivector leaves the x1..x3 chart; the complex lives on R^3")
        if not coeff.is_homogeneous(1):
            raise CohomologyError("degree-mixing differential: use filtered mode")


def differential_matrix(pi: MultiVector, source: GradedSlice) -> DifferentialMatrix:
    _check_linear(pi)
    k, d = source.multivector_grade, source.coeff_degree
    if k == SPACE_DIM:
        return DifferentialMatrix(source, None, sympy.zeros(0, source.size))
    target = build_slice(k + 1, d)
    columns = [target.column(schouten(pi, x)) for x in source.basis]
    entries = sympy.Matrix.hstack(*columns) if columns else sympy.zeros(target.size, 0)
    return DifferentialMatrix(source, target, entries)


# ---------------------------------------------------------------------- cohomology
def _normalized(vec: sympy.Matrix) -> sympy.Matrix:
    for value in vec:
        if value != 0:
            return vec / value
    return vec


@dataclass
class CohomologyResult:
    pi: MultiVector
    degree: int
    differentials: list[DifferentialMatrix]
    ranks: tuple[int, ...]
    dims: tuple[int, int, int, int]
    generators: list[list[MultiVector]]

    def _image(self, k: int) -> sympy.Matrix:
        size = self.differentials[k].source.size
        if k == 0:
            return sympy.zeros(size, 0)
        return self.differentials[k - 1].entries

    def is_cocycle(self, k: int, mv: MultiVector) -> bool:
        return self.differentials[k].apply(mv).is_zero_matrix

    def is_coboundary(self, k: int, mv: MultiVector) -> bool:
        image = self._image(k)
        col = self.differentials[k].source.column(mv)
        if col.is_zero_matrix:
            return True
        if image.cols == 0:
            return False
        return image.rank() == sympy.Matrix.hstack(image, col).rank()

    def is_nontrivial_class(self, k: int, mv: MultiVector) -> bool:
        """Kernel-not-image certificate for one multivector of this slice degree."""
        return self.is_cocycle(k, mv) and not self.is_coboundary(k, mv)

    def class_rank(self, k: int, mvs: Sequence[MultiVector]) -> int:
        """Dimension of the span of ``mvs`` in ``H^k``; the inputs are assumed to be cocycles."""
        if not mvs:
            return 0
        image = self._image(k)
        cols = sympy.Matrix.hstack(*(self.differentials[k].source.column(mv) for mv in mvs))
        if not image.cols:
            return int(cols.rank())
        return int(sympy.Matrix.hstack(image, cols).rank()) - int(image.rank())

    def to_json(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "dims": list(self.dims),
            "ranks": list(self.ranks),
            "generators": [[multivector_to_json(g) for g in gens] for gens in self.generators],
        }


def _greedy_generators(diff: DifferentialMatrix, image: sympy.Matrix, wanted: int) -> list[MultiVector]:
    if wanted == 0:
        return []
    src = diff.source
    candidates: list[sympy.Matrix] = []
    for pos in range(src.size):
        unit = sympy.zeros(src.size, 1)
        unit[pos] = 1
        if (diff.entries * unit).is_zero_matrix:
            candidates.append(unit)
    if diff.entries.rows:
        candidates += [_normalized(v) for v in diff.entries.nullspace()]

    chosen = image
    rank = int(chosen.rank()) if chosen.cols else 0
    out: list[MultiVector] = []
    for vec in candidates:
        trial = sympy.Matrix.hstack(chosen, vec) if chosen.cols else vec
        trial_rank = int(trial.rank())
        if trial_rank > rank:
            chosen, rank = trial, trial_rank
            out.append(src.element(vec))
            if len(out) == wanted:
                break
    return out


def cohomology_dims(pi: MultiVector, d: int, *, with_generators: bool = True) -> CohomologyResult:
    diffs = [differential_matrix(pi, build_slice(k, d)) for k in range(SPACE_DIM + 1)]
    for k in range(SPACE_DIM - 1):
        product = diffs[k + 1].entries * diffs[k].entries
        if not product.is_zero_matrix:
            raise CohomologyError(f"d_pi squared is not zero at grade {k}, degree {d}: pi is not Poisson")
    ranks = tuple(diff.rank for diff in diffs)
    dims = tuple(diffs[k].nullity - (ranks[k - 1] if k else 0) for k in range(SPACE_DIM + 1))
    generators: list[list[MultiVector]] = []
    for k in range(SPACE_DIM + 1):
        if not with_generators:
            generators.append([])
            continue
        image = diffs[k - 1].entries if k else sympy.zeros(diffs[k].source.size, 0)
        generators.append(_greedy_generators(diffs[k], image, dims[k]))
    log.debug("degree %d: h = %s, ranks = %s", d, dims, ranks)
    return CohomologyResult(pi, d, diffs, ranks, dims, generators)  # type: ignore[arg-type]


def casimir_space(pi: MultiVector, d: int) -> list[Polynomial]:
    """
    Basis of the homogeneous degree-``d`` Casimirs of ``pi``.

    Solved from ``hamiltonian_field(pi, f) = 0`` directly, without the
    differential matrices, so it cross-checks ``h0``.
    """
    _check_linear(pi)
    source = build_slice(0, d)
    target = build_slice(1, d)
    columns = [target.column(hamiltonian_field(pi, f.coefficient(()))) for f in source.basis]
    system = sympy.Matrix.hstack(*columns)
    return [source.element(_normalized(v)).coefficient(()) for v in system.nullspace()]


def complex_grid(
    pi: MultiVector, degrees: Iterable[int] = DEFAULT_DEGREES, *, with_generators: bool = True
) -> dict[int, CohomologyResult]:
    return {d: cohomology_dims(pi, d, with_generators=with_generators) for d in sorted(set(degrees))}


# ---------------------------------------------------------------------- report against transcribed claims
def _describe(result: CohomologyResult, k: int) -> str:
    gens = "; ".join(format_multivector(g) for g in result.generators[k]) or "-"
    return f"dim {result.dims[k]} at d={result.degree}; generators: {gens}"


def judge_claim(claim: CohomologyClaim, grid: dict[int, CohomologyResult]) -> DiscrepancyEntry:
    if claim.k is None:
        nonzero = [
            f"h{k}={grid[d].dims[k]} at d={d} ({'; '.join(format_multivector(g) for g in grid[d].generators[k])})"
            for d in claim.degrees
            for k in range(1, SPACE_DIM + 1)
            if grid[d].dims[k]
        ]
        if not nonzero:
            computed = f"h1 = h2 = h3 = 0 at d in {list(claim.degrees)}"
            return DiscrepancyEntry(claim.location, claim.printed_text, computed, Verdict.MATCHES)
        return DiscrepancyEntry(claim.location, claim.printed_text, ", ".join(nonzero), Verdict.MISMATCH)

    result = grid[claim.degrees[0]]
    k = claim.k
    h = result.dims[k]
    computed = _describe(result, k)
    if h != claim.dim:
        return DiscrepancyEntry(
            claim.location, claim.printed_text, computed, Verdict.MISMATCH,
            note=f"rank d_{k} = {result.ranks[k]}, nullity = {result.differentials[k].nullity}",
        )
    gens = claim.generator_multivectors()
    failing = [g for g in gens if not result.is_cocycle(k, g)]
    if failing:
        return DiscrepancyEntry(
            claim.location, claim.printed_text, computed, Verdict.AMBIGUOUS,
            note="printed generator is not a cocycle of this row's bivector: "
            + "; ".join(format_multivector(g) for g in failing),
        )
    if result.class_rank(k, gens) != len(gens):
        return DiscrepancyEntry(
            claim.location, claim.printed_text, computed, Verdict.AMBIGUOUS,
            note="printed generators are dependent modulo the image",
        )
    return DiscrepancyEntry(claim.location, claim.printed_text, computed, Verdict.MATCHES)


@dataclass
class CohomologyReport:
    model: str
    bivector: MultiVector
    degrees: tuple[int, ...]
    results: dict[int, CohomologyResult]
    claims: list[CohomologyClaim] = field(default_factory=list)
    discrepancies: list[DiscrepancyEntry] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "bivector": format_multivector(self.bivector),
            "grid": [self.results[d].to_json() for d in self.degrees],
            "discrepancies": [e.to_json() for e in self.discrepancies],
        }

    def to_rows(self) -> list[list[Any]]:
        rows: list[list[Any]] = [["model", "d", "h0", "h1", "h2", "h3"]]
        for d in self.degrees:
            rows.append([self.model, d, *self.results[d].dims])
        return rows

    def to_text(self) -> str:
        lines = [f"Poisson cohomology of {self.model}: {format_multivector(self.bivector)}"]
        lines.append(f"{'d':>3}  {'h0':>3} {'h1':>3} {'h2':>3} {'h3':>3}")
        for d in self.degrees:
            lines.append(f"{d:>3}  " + " ".join(f"{h:>3}" for h in self.results[d].dims))
        for d in self.degrees:
            for k, gens in enumerate(self.results[d].generators):
                for g in gens:
                    lines.append(f"  H^{k} d={d}: {format_multivector(g)}")
        if self.discrepancies:
            lines.append("discrepancies:")
            for e in self.discrepancies:
                lines.append(f"  [{e.verdict.value}] {e.location}: {e.computed}")
                if e.note:
                    lines.append(f"      {e.note}")
        return "\n".join(lines)


def table_report(
    model_code: Any,
    degrees: Iterable[int] = DEFAULT_DEGREES,
    *,
    tables: Iterable[int] = (6, 7, 8),
    logger: logging.Logger | None = None,
) -> CohomologyReport:
    from .models import model as lookup

    lg = logger or log
    m = lookup(model_code)
    shown = tuple(sorted(set(degrees)))
    claims = claims_for(m.code, tables)
    needed = set(shown) | {d for c in claims for d in c.degrees}
    grid = complex_grid(m.normal_form, needed)
    entries = [judge_claim(c, grid) for c in claims]
    lg.info("%s: %d cohomology claims checked over degrees %s", m.code, len(entries), sorted(needed))
    return CohomologyReport(m.code, m.normal_form, shown, {d: grid[d] for d in shown}, claims, entries)
