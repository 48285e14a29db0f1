"""
Three-dimensional real Lie algebras read off linear bivectors.

A linear bivector ``pi^{ij} = sum_k c^k_{ij} x_k`` on (x1, x2, x3) is the
Lie-Poisson structure dual to the algebra with ``[e_i, e_j] = sum_k c^k_{ij} e_k``.
Classification uses exact invariants only: the inertia of the Killing form,
the dimension of the derived algebra and unimodularity.
"""
from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import sympy

from .errors import GradeError, LieAlgebraError
from .multivector import MultiVector

log = logging.getLogger("bmpoisson.lie")

LIE_DIM = 3

Constants = tuple[tuple[tuple[Fraction, ...], ...], ...]


class LieName(str, enum.Enum):
    SO3 = "so3"
    SL2R = "sl2R"
    E2 = "e2"
    E11 = "e11"
    HEISENBERG = "heisenberg"
    ABELIAN = "abelian"


@dataclass(frozen=True)
class StructureConstants:
    """``c[k][i][j]`` (0-based) with ``[e_i, e_j] = sum_k c[k][i][j] e_k``."""

    c: Constants

    def __post_init__(self) -> None:
        for k, i, j in itertools.product(range(LIE_DIM), repeat=3):
            if self.c[k][i][j] != -self.c[k][j][i]:
                raise LieAlgebraError("structure constants must be antisymmetric in (i, j)")

    @classmethod
    def from_brackets(cls, brackets: dict[tuple[int, int], tuple[Any, Any, Any]]) -> "StructureConstants":
        """Build from 1-based ``{(i, j): coords of [e_i, e_j]}``; missing pairs bracket to zero."""
        c = [[[Fraction(0)] * LIE_DIM for _ in range(LIE_DIM)] for _ in range(LIE_DIM)]
        for (i, j), coords in brackets.items():
            for k, value in enumerate(coords):
                c[k][i - 1][j - 1] = Fraction(value)
                c[k][j - 1][i - 1] = -Fraction(value)
        return cls(tuple(tuple(tuple(row) for row in plane) for plane in c))

    def bracket(self, u, v) -> tuple[Fraction, ...]:
        return tuple(
            sum(
                (Fraction(u[i]) * Fraction(v[j]) * self.c[k][i][j] for i in range(LIE_DIM) for j in range(LIE_DIM)),
                Fraction(0),
            )
            for k in range(LIE_DIM)
        )

    def basis_bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        """``[e_i, e_j]`` for 1-based indices."""
        return tuple(self.c[k][i - 1][j - 1] for k in range(LIE_DIM))

    @property
    def is_abelian(self) -> bool:
        return all(v == 0 for plane in self.c for row in plane for v in row)

    def satisfies_jacobi(self) -> bool:
        basis = [tuple(Fraction(int(a == b)) for b in range(LIE_DIM)) for a in range(LIE_DIM)]
        for x, y, z in itertools.combinations(basis, 3):
            total = [Fraction(0)] * LIE_DIM
            for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                for k, value in enumerate(self.bracket(self.bracket(a, b), c)):
                    total[k] += value
            if any(total):
                return False
        return True

    def ad(self, i: int) -> sympy.Matrix:
        """Matrix of ``ad(e_i)`` (0-based) in the basis e1, e2, e3."""
        return sympy.Matrix(
            LIE_DIM, LIE_DIM, lambda k, j: sympy.Rational(self.c[k][i][j].numerator, self.c[k][i][j].denominator)
        )

    def to_json(self) -> dict[str, str]:
        return {f"[e{i},e{j}]": _format_vector(self.basis_bracket(i, j)) for i, j in itertools.combinations(range(1, 4), 2)}


def _format_vector(coords: tuple[Fraction, ...]) -> str:
    parts = []
    for k, value in enumerate(coords, start=1):
        if value == 0:
            continue
        sign = "-" if value < 0 else "+"
        mag = abs(value)
        body = f"e{k}" if mag == 1 else f"{mag}*e{k}"
        parts.append((sign, body))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class LieClass:
    name: LieName
    structure_constants: StructureConstants
    killing_signature: tuple[int, int, int]
    derived_dim: int
    unimodular: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name.value,
            "brackets": self.structure_constants.to_json(),
            "killing_signature": list(self.killing_signature),
            "derived_dim": self.derived_dim,
            "unimodular": self.unimodular,
        }


def structure_constants(pi: MultiVector) -> StructureConstants:
    if pi.grade != 2:
        raise GradeError(f"structure_constants expects a bivector, got grade {pi.grade}")
    c = [[[Fraction(0)] * LIE_DIM for _ in range(LIE_DIM)] for _ in range(LIE_DIM)]
    for (i, j), coeff in pi.items():
        if j > LIE_DIM or not coeff.is_homogeneous(1) or coeff.uses_variable(4):
            raise LieAlgebraError("not a linear bivector")
        for k in range(LIE_DIM):
            mono = tuple(int(m == k) for m in range(4))
            value = coeff.coefficient(mono)
            c[k][i - 1][j - 1] = value
            c[k][j - 1][i - 1] = -value
    return StructureConstants(tuple(tuple(tuple(row) for row in plane) for plane in c))


def killing_form(constants: StructureConstants) -> sympy.Matrix:
    ads = [constants.ad(i) for i in range(LIE_DIM)]
    return sympy.Matrix(LIE_DIM, LIE_DIM, lambda a, b: (ads[a] * ads[b]).trace())


def inertia(sym: sympy.Matrix) -> tuple[int, int, int]:
    """
    ``(positive, negative, zero)`` eigenvalue counts of a rational symmetric matrix.

    The characteristic polynomial of a symmetric matrix has only real roots,
    so Descartes' rule of signs counts the positive ones exactly.
    """
    lam = sympy.Symbol("lam")
    coeffs = list(sympy.Poly(sym.charpoly(lam).as_expr(), lam).all_coeffs())
    n = sym.rows
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    positive = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    return positive, n - zero - positive, zero


def derived_dimension(constants: StructureConstants) -> int:
    rows = [
        [sympy.Rational(v.numerator, v.denominator) for v in constants.basis_bracket(i, j)]
        for i, j in itertools.combinations(range(1, LIE_DIM + 1), 2)
    ]
    return int(sympy.Matrix(rows).rank())


def classify_lie(constants: StructureConstants) -> LieClass:
    if not constants.satisfies_jacobi():
        raise LieAlgebraError("not a Lie algebra")
    signature = inertia(killing_form(constants))
    derived = derived_dimension(constants)
    unimodular = all(constants.ad(i).trace() == 0 for i in range(LIE_DIM))
    p, q, _ = signature

    name: LieName | None = None
    if derived == 0:
        name = LieName.ABELIAN
    elif derived == 3:
        name = LieName.SO3 if q == LIE_DIM else LieName.SL2R
    elif unimodular and derived == 2:
        if (p, q) == (0, 1):
            name = LieName.E2
        elif (p, q) == (1, 0):
            name = LieName.E11
    elif unimodular and derived == 1:
        name = LieName.HEISENBERG
    if name is None:
        raise LieAlgebraError(
            f"unsupported Lie algebra (derived dim {derived}, Killing inertia {signature}, "
            f"{'unimodular' if unimodular else 'not unimodular'})"
        )
    log.debug("classified: %s (killing=%s, derived=%d)", name.value, signature, derived)
    return LieClass(name, constants, signature, derived, unimodular)


def lie_class_of(pi: MultiVector) -> LieClass:
    return classify_lie(structure_constants(pi))
