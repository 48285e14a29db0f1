"""
The seven Bott-Morse local models and the Flaschka-Ratiu constructor.

Each model is fixed by its Casimirs ``C1`` (the transverse Morse normal form)
and ``C2 = t``. The stored ``bivector`` is the determinant construction with
``k = 1``; ``printed_bivector`` keeps the printed form of the bivector table for
comparison; ``normal_form`` is the linear form the leaf, glue and cohomology
layers work with.
"""
from __future__ import annotations

import enum
import itertools
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping

import numpy as np

from .errors import GradeError, ModelError, UnknownModelError
from .multivector import Covector, MultiVector, _sort_sign
from .poly import ONE, ZERO, Polynomial, as_polynomial, parse_polynomial

log = logging.getLogger("bmpoisson.models")


class ModelKind(str, enum.Enum):
    CENTER = "center"
    SADDLE = "saddle"


# (component_dim, kind) -> admissible Morse indices
ADMISSIBLE: Mapping[tuple[int, ModelKind], tuple[int, ...]] = {
    (0, ModelKind.CENTER): (0, 3),
    (0, ModelKind.SADDLE): (1, 2),
    (1, ModelKind.CENTER): (0, 2),
    (1, ModelKind.SADDLE): (1,),
}

MODEL_CODES: tuple[str, ...] = ("c0-i0", "c0-i3", "s0-i1", "s0-i2", "c1-i0", "c1-i2", "s1-i1")

_CODE_RE = re.compile(r"([cs])(\d+)-i(\d+)")


@dataclass(frozen=True)
class ModelId:
    component_dim: int
    kind: ModelKind
    morse_index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ModelKind(self.kind))
        allowed = ADMISSIBLE.get((self.component_dim, self.kind))
        if allowed is None or self.morse_index not in allowed:
            raise ModelError(
                f"no {self.kind.value} model with component dimension {self.component_dim} "
                f"and Morse index {self.morse_index}"
            )

    @property
    def code(self) -> str:
        return f"{'c' if self.kind is ModelKind.CENTER else 's'}{self.component_dim}-i{self.morse_index}"

    @classmethod
    def parse(cls, code: "str | ModelId") -> "ModelId":
        if isinstance(code, ModelId):
            return code
        m = _CODE_RE.fullmatch(str(code).strip())
        if not m:
            raise UnknownModelError(f"unknown model id {code!r}; expected one of {', '.join(MODEL_CODES)}")
        kind = ModelKind.CENTER if m.group(1) == "c" else ModelKind.SADDLE
        try:
            return cls(int(m.group(2)), kind, int(m.group(3)))
        except ModelError as exc:
            raise UnknownModelError(f"unknown model id {code!r}: {exc}") from exc

    def __str__(self) -> str:
        return self.code


# ---------------------------------------------------------------------- Flaschka-Ratiu
def _basis_column(i: int) -> tuple[Polynomial, ...]:
    return tuple(ONE if r == i else ZERO for r in range(1, 5))


def _det4(columns: tuple[tuple[Polynomial, ...], ...]) -> Polynomial:
    """Leibniz expansion of the 4x4 determinant whose columns are given."""
    total = ZERO
    for rows in itertools.permutations(range(4)):
        term = ONE
        for col, row in enumerate(rows):
            entry = columns[col][row]
            if not entry:
                term = ZERO
                break
            term = term * entry
        if term:
            sign, _ = _sort_sign(rows)
            total = total + (term if sign > 0 else -term)
    return total


def flaschka_ratiu(c1: Polynomial, c2: Polynomial, k: Any = ONE) -> MultiVector:
    """
    Bivector with ``Pi_ij = k * det(e_i, e_j, dC1, dC2)``.

    The result annihilates ``dC1`` and ``dC2`` by multilinearity of the
    determinant. ``k`` must be a nonzero polynomial; whether it vanishes
    somewhere on the working chart is the caller's business.
    """
    k = as_polynomial(k)
    if not k:
        raise ModelError("conformal factor k must be a nonzero polynomial")
    a, b = c1.gradient(), c2.gradient()
    terms: dict[tuple[int, int], Polynomial] = {}
    for i, j in itertools.combinations(range(1, 5), 2):
        value = _det4((_basis_column(i), _basis_column(j), a, b))
        if value:
            terms[(i, j)] = k * value
    return MultiVector(2, terms)


def proportionality_check(a: MultiVector, b: MultiVector) -> Polynomial | None:
    """``g`` with ``a = g * b`` when one polynomial factor works for every term, else ``None``."""
    if a.grade != 2 or b.grade != 2:
        raise GradeError("proportionality_check compares bivectors")
    if not b:
        return ONE if not a else None
    if not a:
        return ZERO
    a_terms, b_terms = dict(a.items()), dict(b.items())
    if set(a_terms) != set(b_terms):
        return None
    first = min(a_terms)
    g = a_terms[first].divide_exact(b_terms[first])
    if g is None:
        return None
    for key, coeff in a_terms.items():
        if g * b_terms[key] != coeff:
            return None
    return g


# ---------------------------------------------------------------------- catalog
def _bivector(terms: Mapping[tuple[int, int], str]) -> MultiVector:
    return MultiVector(2, {k: parse_polynomial(v) for k, v in terms.items()})


# Printed bivector forms, numbered as in the bivector table.
TABLE4_FORMS: Mapping[int, Mapping[tuple[int, int], str]] = {
    1: {(1, 2): "x3", (1, 3): "-x2", (2, 3): "x1"},
    2: {(1, 2): "-x3", (1, 3): "x2", (2, 3): "x1"},
    3: {(1, 2): "-x3", (1, 3): "x2", (2, 3): "x1"},
    4: {(1, 3): "-x2", (2, 3): "x1"},
    5: {(1, 3): "x2", (2, 3): "x1"},
}

# The index-2 dim-0 saddle form as printed in the cohomology tables.
_SADDLE_INDEX2_FORM = {(1, 2): "-x3", (1, 3): "-x2", (2, 3): "x1"}


@dataclass(frozen=True)
class _Row:
    code: str
    casimir: str
    table4_form: int
    printed_lie_name: str | None


_ROWS: tuple[_Row, ...] = (
    _Row("c0-i0", "x1^2 + x2^2 + x3^2", 1, "so3"),
    _Row("c0-i3", "-x1^2 - x2^2 - x3^2", 1, "so3"),
    _Row("s0-i1", "-x1^2 + x2^2 + x3^2", 2, "sl2R"),
    _Row("s0-i2", "-x1^2 - x2^2 + x3^2", 3, "e2"),
    _Row("c1-i0", "x1^2 + x2^2", 4, "e2"),
    _Row("c1-i2", "-x1^2 - x2^2", 4, "e2"),
    _Row("s1-i1", "-x1^2 + x2^2", 5, None),
)


@dataclass(frozen=True)
class LocalModel:
    id: ModelId
    casimirs: tuple[Polynomial, Polynomial]
    bivector: MultiVector
    printed_bivector: MultiVector
    normal_form: MultiVector
    table4_form: int
    printed_lie_name: str | None

    @property
    def code(self) -> str:
        return self.id.code

    def differentials(self) -> tuple[Covector, Covector]:
        return Covector.differential(self.casimirs[0]), Covector.differential(self.casimirs[1])

    def conformal(self, k: Any = ONE) -> MultiVector:
        """``k * normal_form``: the conformal family of this model."""
        return self.normal_form * as_polynomial(k)

    def singular_distance(self, points: Any) -> np.ndarray:
        """Euclidean distance to the singular set, vectorized over ``(..., 4)`` points."""
        pts = np.asarray(points, dtype=float)
        if self.id.component_dim == 0:
            return np.sqrt(pts[..., 0] ** 2 + pts[..., 1] ** 2 + pts[..., 2] ** 2)
        return np.sqrt(pts[..., 0] ** 2 + pts[..., 1] ** 2)

    @property
    def singular_set(self) -> str:
        return "x1 = x2 = x3 = 0" if self.id.component_dim == 0 else "x1 = x2 = 0"


def _build(row: _Row) -> LocalModel:
    mid = ModelId.parse(row.code)
    c1 = parse_polynomial(row.casimir)
    c2 = parse_polynomial("t")
    derived = flaschka_ratiu(c1, c2, ONE)
    printed = _bivector(TABLE4_FORMS[row.table4_form])
    normal = printed
    if proportionality_check(derived, printed) is None:
        normal = _bivector(_SADDLE_INDEX2_FORM)
        log.debug("%s: printed form (%d) is not proportional to the derived bivector", row.code, row.table4_form)
    if proportionality_check(derived, normal) is None:
        raise ModelError(f"{row.code}: no linear normal form proportional to the derived bivector")
    return LocalModel(
        id=mid,
        casimirs=(c1, c2),
        bivector=derived,
        printed_bivector=printed,
        normal_form=normal,
        table4_form=row.table4_form,
        printed_lie_name=row.printed_lie_name,
    )


@lru_cache(maxsize=None)
def catalog() -> tuple[LocalModel, ...]:
    return tuple(_build(row) for row in _ROWS)


def model(code: "str | ModelId") -> LocalModel:
    mid = ModelId.parse(code)
    for m in catalog():
        if m.id == mid:
            return m
    raise UnknownModelError(f"unknown model id {code!r}")
