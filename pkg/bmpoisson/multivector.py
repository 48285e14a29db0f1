"""
Polynomial multivector fields on R^4 and the Schouten-Nijenhuis bracket.

Sign convention
---------------
Multivectors are treated as polynomials in odd variables ``xi_i = d/dx_i``.
The bracket is

    [P, Q] = sum_i  (dP/dxi_i)_right * dQ/dx_i  -  dP/dx_i * (dQ/dxi_i)_left

which gives the Lie bracket on vector fields, ``[X, f] = X(f)`` and
``[pi, f] = B(df)`` where ``B(alpha)^i = sum_j pi^{ij} alpha_j``. With it the
bracket is graded antisymmetric, a graded derivation of the wedge product and
satisfies the graded Jacobi identity, so ``d_pi = [pi, .]`` squares to zero
for any Poisson ``pi``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import GradeError
from .poly import NVARS, ONE, ZERO, Polynomial, as_polynomial, format_polynomial, parse_polynomial
from .typing_defs import BivectorField, MultiVectorJSON, is_multivector_json

log = logging.getLogger("bmpoisson.multivector")

DIM = NVARS
Indices = tuple[int, ...]

# Entries smaller than RANK_TOL * (1 + max|entry|) count as zero.
RANK_TOL = 1e-12


def _coerce_coeff(value: Any) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return as_polynomial(value)


def _sort_sign(indices: Sequence[int]) -> tuple[int, Indices]:
    """Sign of the permutation sorting ``indices`` and the sorted tuple; sign 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(indices)), 2) if indices[a] > indices[b]
    )
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


class MultiVector:
    """Grade-k antisymmetric multivector ``sum_I f_I d_I`` with increasing index tuples ``I``."""

    __slots__ = ("grade", "_terms")

    def __init__(self, grade: int, terms: Mapping[Sequence[int], Any] | None = None) -> None:
        if not isinstance(grade, int) or not 0 <= grade <= DIM:
            raise GradeError(f"grade must be in 0..{DIM}, got {grade!r}")
        clean: dict[Indices, Polynomial] = {}
        for indices, coeff in (terms or {}).items():
            key = tuple(int(i) for i in indices)
            if len(key) != grade:
                raise GradeError(f"index tuple {key} does not match grade {grade}")
            if any(not 1 <= i <= DIM for i in key) or any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"indices must be strictly increasing in 1..{DIM}, got {key}")
            clean[key] = clean.get(key, ZERO) + _coerce_coeff(coeff)
        self.grade = grade
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _wrap(cls, grade: int, terms: dict[Indices, Polynomial]) -> "MultiVector":
        obj = cls.__new__(cls)
        obj.grade = grade
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, grade: int) -> "MultiVector":
        return cls(grade)

    @classmethod
    def scalar(cls, f: Any) -> "MultiVector":
        return cls(0, {(): _coerce_coeff(f)})

    @classmethod
    def partial_field(cls, *indices: int, coeff: Any = ONE) -> "MultiVector":
        """``coeff * d_{i1} ^ ... ^ d_{ik}`` for indices in any order."""
        sign, key = _sort_sign(indices)
        if sign == 0:
            return cls(len(indices))
        return cls(len(indices), {key: _coerce_coeff(coeff) * sign})

    # ------------------------------------------------------------------ inspection
    def items(self) -> list[tuple[Indices, Polynomial]]:
        return sorted(self._terms.items())

    def coefficient(self, indices: Sequence[int]) -> Polynomial:
        sign, key = _sort_sign(tuple(indices))
        if sign == 0 or len(key) != self.grade:
            return ZERO
        return self._terms.get(key, ZERO) * sign

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((c.degree for c in self._terms.values()), default=-1)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.grade == other.grade and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.grade, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiVector({self.grade}, {format_multivector(self)!r})"

    def __str__(self) -> str:
        return format_multivector(self)

    # ------------------------------------------------------------------ linear structure
    def _check_same_grade(self, other: "MultiVector") -> None:
        if self.grade != other.grade:
            raise GradeError(f"cannot add grade {self.grade} and grade {other.grade}")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        if not isinstance(other, MultiVector):
            return NotImplemented
        self._check_same_grade(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            value = out.get(key, ZERO) + c
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        return MultiVector._wrap(self.grade, out)

    def __neg__(self) -> "MultiVector":
        return MultiVector._wrap(self.grade, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor: Any) -> "MultiVector":
        if isinstance(factor, MultiVector):
            return NotImplemented
        f = _coerce_coeff(factor)
        out = {k: c * f for k, c in self._terms.items()}
        return MultiVector._wrap(self.grade, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def map_coefficients(self, fn) -> "MultiVector":
        out = {k: fn(c) for k, c in self._terms.items()}
        return MultiVector._wrap(self.grade, {k: c for k, c in out.items() if c})

    def uses_index(self, i: int) -> bool:
        return any(i in key for key in self._terms)


def _accumulate(out: dict[Indices, Polynomial], left: Indices, right: Indices, coeff: Polynomial) -> None:
    if not coeff:
        return
    sign, key = _sort_sign(left + right)
    if sign == 0:
        return
    value = out.get(key, ZERO) + (coeff if sign > 0 else -coeff)
    if value:
        out[key] = value
    else:
        out.pop(key, None)


def wedge(a: MultiVector, b: MultiVector) -> MultiVector:
    grade = a.grade + b.grade
    if grade > DIM:
        raise GradeError("grade exceeds dimension")
    out: dict[Indices, Polynomial] = {}
    for I, f in a._terms.items():
        for J, g in b._terms.items():
            _accumulate(out, I, J, f * g)
    return MultiVector._wrap(grade, out)


def schouten(a: MultiVector, b: MultiVector) -> MultiVector:
    """Schouten-Nijenhuis bracket ``[a, b]`` of grade ``p + q - 1`` (see module docstring).

    Sign convention: ``[pi, f] = +X_f = B(df)``, so ``{x_i, x_j} = pi^{ij}``.
    """
    grade = a.grade + b.grade - 1
    if grade > DIM:
        raise GradeError("grade exceeds dimension")
    if grade < 0:
        raise GradeError("bracket of two functions has negative grade")
    p = a.grade
    out: dict[Indices, Polynomial] = {}
    for I, f in a._terms.items():
        for J, g in b._terms.items():
            # right derivative in xi_i of a, paired with d/dx_i of b
            for m, i in enumerate(I):
                dg = g.partial(i)
                if dg:
                    coeff = f * dg
                    _accumulate(out, I[:m] + I[m + 1:], J, coeff if (p - 1 - m) % 2 == 0 else -coeff)
            # d/dx_j of a, paired with the left derivative in xi_j of b
            for m, j in enumerate(J):
                df = f.partial(j)
                if df:
                    coeff = df * g
                    _accumulate(out, I, J[:m] + J[m + 1:], -coeff if m % 2 == 0 else coeff)
    return MultiVector._wrap(grade, out)


def is_poisson(pi: MultiVector) -> bool:
    if pi.grade != 2:
        raise GradeError(f"is_poisson expects a bivector, got grade {pi.grade}")
    return schouten(pi, pi).is_zero


def scale(mv: MultiVector, f: Any) -> MultiVector:
    return mv * f


# ---------------------------------------------------------------------- covectors, bundle map
@dataclass(frozen=True)
class Covector:
    components: tuple[Polynomial, Polynomial, Polynomial, Polynomial]

    def __post_init__(self) -> None:
        comps = tuple(_coerce_coeff(c) for c in self.components)
        if len(comps) != DIM:
            raise ValueError(f"a covector has {DIM} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def differential(cls, f: Polynomial) -> "Covector":
        return cls(f.gradient())

    def __getitem__(self, i: int) -> Polynomial:
        """1-based component access."""
        return self.components[i - 1]

    def pair(self, field: MultiVector) -> Polynomial:
        """``<alpha, X>`` for a vector field ``X``."""
        if field.grade != 1:
            raise GradeError("covectors pair with vector fields only")
        total = ZERO
        for (i,), c in field._terms.items():
            total = total + self.components[i - 1] * c
        return total


@dataclass(frozen=True)
class BivectorMatrix:
    """The antisymmetric 4x4 polynomial matrix ``pi^{ij}`` of a bivector."""

    entries: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(_coerce_coeff(c) for c in row) for row in self.entries)
        if len(rows) != DIM or any(len(r) != DIM for r in rows):
            raise ValueError("bivector matrix must be 4x4")
        for i in range(DIM):
            if rows[i][i]:
                raise ValueError("bivector matrix must have a zero diagonal")
            for j in range(i + 1, DIM):
                if rows[j][i] != -rows[i][j]:
                    raise ValueError("bivector matrix must be antisymmetric")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_multivector(cls, pi: MultiVector) -> "BivectorMatrix":
        if pi.grade != 2:
            raise GradeError(f"expected a bivector, got grade {pi.grade}")
        rows = [[ZERO] * DIM for _ in range(DIM)]
        for (i, j), c in pi._terms.items():
            rows[i - 1][j - 1] = c
            rows[j - 1][i - 1] = -c
        return cls(tuple(tuple(r) for r in rows))

    def to_multivector(self) -> MultiVector:
        return MultiVector(
            2, {(i + 1, j + 1): self.entries[i][j] for i in range(DIM) for j in range(i + 1, DIM)}
        )

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def evaluate(self, points: Any) -> np.ndarray:
        return numeric_field(self.to_multivector())(points)


def bundle_map(pi: MultiVector, alpha: Covector) -> MultiVector:
    """``B(alpha)^i = sum_j pi^{ij} alpha_j``."""
    if pi.grade != 2:
        raise GradeError(f"bundle_map expects a bivector, got grade {pi.grade}")
    out: dict[Indices, Polynomial] = {}
    for (i, j), c in pi._terms.items():
        for row, col, sign in ((i, j, 1), (j, i, -1)):
            contrib = c * alpha[col]
            if contrib:
                value = out.get((row,), ZERO) + (contrib if sign > 0 else -contrib)
                if value:
                    out[(row,)] = value
                else:
                    out.pop((row,), None)
    return MultiVector._wrap(1, out)


def hamiltonian_field(pi: MultiVector, h: Polynomial) -> MultiVector:
    return bundle_map(pi, Covector.differential(h))


def poisson_bracket(pi: MultiVector, f: Polynomial, g: Polynomial) -> Polynomial:
    """``{f, g} = pi(df, dg) = sum pi^{ij} d_i f d_j g``."""
    return Covector.differential(f).pair(hamiltonian_field(pi, g))


def pfaffian(matrix: BivectorMatrix | MultiVector) -> Polynomial:
    m = matrix if isinstance(matrix, BivectorMatrix) else BivectorMatrix.from_multivector(matrix)
    return m[1, 2] * m[3, 4] - m[1, 3] * m[2, 4] + m[1, 4] * m[2, 3]


# ---------------------------------------------------------------------- numeric side
class _CompiledBivector:
    """Vectorized evaluation ``points[..., 4] -> matrices[..., 4, 4]``."""

    def __init__(self, pi: MultiVector) -> None:
        if pi.grade != 2:
            raise GradeError(f"expected a bivector, got grade {pi.grade}")
        self.pi = pi
        self._terms = [((i - 1, j - 1), c) for (i, j), c in pi.items()]

    def __call__(self, points: Any) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[:-1] + (DIM, DIM))
        coords = tuple(pts[..., k] for k in range(DIM))
        for (i, j), c in self._terms:
            value = c.evaluate(coords)
            out[..., i, j] = value
            out[..., j, i] = -value
        return out


def numeric_field(pi: MultiVector) -> BivectorField:
    return _CompiledBivector(pi)


def matrix_ranks(matrices: Any, tol: float = RANK_TOL) -> np.ndarray:
    """
    Even ranks of antisymmetric 4x4 matrices, vectorized over leading axes.

    Rank 4 iff the Pfaffian is nonzero, rank 2 iff some entry (a 2x2 minor
    ``[[0, a], [-a, 0]]``) is nonzero, otherwise 0.
    """
    m = np.asarray(matrices, dtype=float)
    scale = 1.0 + np.max(np.abs(m), axis=(-2, -1))
    eps = tol * scale
    cleaned = np.where(np.abs(m) < eps[..., None, None], 0.0, m)
    pf = (
        cleaned[..., 0, 1] * cleaned[..., 2, 3]
        - cleaned[..., 0, 2] * cleaned[..., 1, 3]
        + cleaned[..., 0, 3] * cleaned[..., 1, 2]
    )
    nonzero = np.any(cleaned != 0.0, axis=(-2, -1))
    return np.where(np.abs(pf) >= eps * scale, 4, np.where(nonzero, 2, 0))


def rank_at(pi: MultiVector, point: Sequence[float]) -> int:
    return int(matrix_ranks(numeric_field(pi)(np.asarray(point, dtype=float))))


# ---------------------------------------------------------------------- text / JSON
def _format_indices(indices: Indices) -> str:
    return "d" + "".join(str(i) for i in indices)


def format_multivector(mv: MultiVector) -> str:
    if not mv:
        return "0"
    parts = []
    for indices, coeff in mv.items():
        body = f"({format_polynomial(coeff)})"
        parts.append(f"{body}*{_format_indices(indices)}" if indices else body)
    return " + ".join(parts)


def multivector_to_json(mv: MultiVector) -> MultiVectorJSON:
    return {
        "grade": mv.grade,
        "terms": [{"indices": list(k), "coeff": format_polynomial(c)} for k, c in mv.items()],
    }


def multivector_from_json(data: Mapping[str, Any]) -> MultiVector:
    if not is_multivector_json(data):
        raise ValueError(f"malformed multivector JSON: {data!r}")
    try:
        grade = int(data["grade"])
        raw_terms = data.get("terms", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed multivector JSON: {exc}") from exc
    terms: dict[Indices, Polynomial] = {}
    for term in raw_terms:
        key = tuple(int(i) for i in term["indices"])
        if key in terms:
            raise ValueError(f"duplicate index tuple {key} in multivector JSON")
        terms[key] = parse_polynomial(str(term["coeff"]))
    return MultiVector(grade, terms)
