"""
Exact polynomials over the rationals in the four chart coordinates ``x1, x2, x3, t``.

A :class:`Polynomial` is an immutable map from exponent 4-tuples to nonzero
:class:`fractions.Fraction` coefficients. Equality is structural, which is what
the property suites rely on. ``evaluate`` is the single bridge to floats and
accepts numpy arrays so numeric callers can evaluate on whole point clouds.
"""
from __future__ import annotations

import logging
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import PolynomialParseError

log = logging.getLogger("bmpoisson.poly")

NVARS = 4
VARIABLE_NAMES: tuple[str, ...] = ("x1", "x2", "x3", "t")

Monomial = tuple[int, int, int, int]
Scalar = Union[int, Fraction]


def grlex_key(mono: Sequence[int]) -> tuple:
    """Sort key placing higher total degree first, ties broken by larger exponent tuple."""
    return (-sum(mono), tuple(-e for e in mono))


def _check_index(i: int) -> int:
    if not isinstance(i, int) or not 1 <= i <= NVARS:
        raise ValueError(f"variable index must be in 1..{NVARS}, got {i!r}")
    return i - 1


class Polynomial:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], Any] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = tuple(int(e) for e in mono)
            if len(key) != NVARS or any(e < 0 for e in key):
                raise ValueError(f"monomial needs {NVARS} non-negative exponents, got {mono!r}")
            clean[key] = clean.get(key, Fraction(0)) + Fraction(coeff)
        self._terms: dict[Monomial, Fraction] = {m: c for m, c in clean.items() if c}

    @classmethod
    def _wrap(cls, terms: dict[Monomial, Fraction]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    # ------------------------------------------------------------------ constructors
    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        return cls._wrap({(0, 0, 0, 0): value} if value else {})

    @classmethod
    def variable(cls, i: int) -> "Polynomial":
        idx = _check_index(i)
        mono = tuple(1 if k == idx else 0 for k in range(NVARS))
        return cls._wrap({mono: Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls({tuple(exponents): coeff})

    # ------------------------------------------------------------------ inspection
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        """Read-only view in canonical (graded-lex) order."""
        return MappingProxyType({m: self._terms[m] for m in sorted(self._terms, key=grlex_key)})

    def items(self) -> list[tuple[Monomial, Fraction]]:
        return [(m, self._terms[m]) for m in sorted(self._terms, key=grlex_key)]

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._terms, key=grlex_key))

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0, 0, 0), Fraction(0))

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = min(self._terms, key=grlex_key)
        return mono, self._terms[mono]

    def is_homogeneous(self, d: int | None = None) -> bool:
        degrees = {sum(m) for m in self._terms}
        if not degrees:
            return True
        if len(degrees) != 1:
            return False
        return d is None or degrees == {d}

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._wrap({m: c for m, c in self._terms.items() if sum(m) == d})

    def uses_variable(self, i: int) -> bool:
        idx = _check_index(i)
        return any(m[idx] for m in self._terms)

    # ------------------------------------------------------------------ arithmetic
    @staticmethod
    def _coerce(other: Any) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other: Any) -> "Polynomial":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in q._terms.items():
            value = out.get(mono, 0) + c
            if value:
                out[mono] = value
            else:
                out.pop(mono, None)
        return Polynomial._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> "Polynomial":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other: Any) -> "Polynomial":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other: Any) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            factor = Fraction(other)
            if not factor:
                return Polynomial._wrap({})
            return Polynomial._wrap({m: c * factor for m, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                out[key] = out.get(key, 0) + c1 * c2
        return Polynomial._wrap({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self._terms == q._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # ------------------------------------------------------------------ calculus
    def partial(self, i: int) -> "Polynomial":
        idx = _check_index(i)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = mono[idx]
            if e:
                out[mono[:idx] + (e - 1,) + mono[idx + 1:]] = c * e
        return Polynomial._wrap(out)

    def gradient(self) -> tuple["Polynomial", "Polynomial", "Polynomial", "Polynomial"]:
        return tuple(self.partial(i) for i in range(1, NVARS + 1))  # type: ignore[return-value]

    # ------------------------------------------------------------------ evaluation
    def evaluate(self, point: Sequence[Any]) -> Any:
        """
        Evaluate at a point given as 4 coordinates.

        Coordinates may be floats or numpy arrays of a common broadcastable
        shape; the result is a float or an array of that shape.
        """
        if len(point) != NVARS:
            raise ValueError(f"point needs {NVARS} coordinates")
        arrays = [np.asarray(x) for x in point if isinstance(x, np.ndarray)]
        total: Any = 0.0
        for mono, c in self._terms.items():
            term: Any = float(c)
            for x, e in zip(point, mono):
                if e == 1:
                    term = term * x
                elif e:
                    term = term * x**e
            total = total + term
        if arrays:
            shape = np.broadcast_shapes(*(a.shape for a in arrays))
            return np.broadcast_to(np.asarray(total, dtype=float), shape).copy()
        return float(total)

    def evaluate_exact(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != NVARS:
            raise ValueError(f"point needs {NVARS} coordinates")
        coords = [Fraction(x) for x in point]
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = c
            for x, e in zip(coords, mono):
                if e:
                    term *= x**e
            total += term
        return total

    def divide_exact(self, other: "Polynomial") -> "Polynomial | None":
        """Quotient ``self / other`` when ``other`` divides ``self`` exactly, else ``None``."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_mono, lead_coeff = other.leading_term()
        remainder: Polynomial = self
        quotient: dict[Monomial, Fraction] = {}
        while remainder:
            mono, coeff = remainder.leading_term()
            shift = tuple(a - b for a, b in zip(mono, lead_mono))
            if any(s < 0 for s in shift):
                return None
            factor = Polynomial._wrap({shift: coeff / lead_coeff})
            quotient[shift] = quotient.get(shift, 0) + coeff / lead_coeff
            remainder = remainder - factor * other
        return Polynomial._wrap({m: c for m, c in quotient.items() if c})


ZERO = Polynomial()
ONE = Polynomial.constant(1)
X1, X2, X3, T = (Polynomial.variable(i) for i in range(1, NVARS + 1))


# ---------------------------------------------------------------------- functional API
def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial(p: Polynomial, i: int) -> Polynomial:
    return p.partial(i)


def gradient(p: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    return p.gradient()


def evaluate(p: Polynomial, point: Sequence[Any]) -> Any:
    return p.evaluate(point)


def evaluate_exact(p: Polynomial, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate_exact(point)


def divide_exact(p: Polynomial, q: Polynomial) -> Polynomial | None:
    return p.divide_exact(q)


def as_polynomial(value: "Polynomial | str | Scalar") -> Polynomial:
    """Accept a polynomial, a polynomial string or a rational scalar."""
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, str):
        return parse_polynomial(value)
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a polynomial")


# ---------------------------------------------------------------------- text grammar
_VAR_RE = re.compile(r"(x1|x2|x3|t)(?:\^(\d+))?")
_NUM_RE = re.compile(r"\d+/\d+|\d+(?:\.\d*)?|\.\d+")
_VAR_INDEX = {name: k for k, name in enumerate(VARIABLE_NAMES)}


def _parse_term(body: str, source: str) -> tuple[Fraction, Monomial]:
    coeff = Fraction(1)
    exps = [0] * NVARS
    for factor in body.split("*"):
        if not factor:
            raise PolynomialParseError(f"empty factor in term {body!r} of {source!r}")
        var = _VAR_RE.fullmatch(factor)
        if var:
            exps[_VAR_INDEX[var.group(1)]] += int(var.group(2) or 1)
            continue
        if _NUM_RE.fullmatch(factor):
            try:
                coeff *= Fraction(factor)
            except ZeroDivisionError as exc:
                raise PolynomialParseError(f"zero denominator in {factor!r}") from exc
            continue
        raise PolynomialParseError(f"unrecognized factor {factor!r} in {source!r}")
    return coeff, tuple(exps)  # type: ignore[return-value]


def parse_polynomial(text: str) -> Polynomial:
    """
    Parse ``<rational> [* x1^a][* x2^b][* x3^c][* t^d]`` terms joined by ``+``/``-``.

    Whitespace is ignored, ``^1`` and the coefficient are optional, and
    consecutive signs combine (``1 + -x2`` is accepted).
    """
    s = "".join(str(text).split())
    if not s:
        raise PolynomialParseError("empty polynomial")
    terms: dict[Monomial, Fraction] = {}
    pos, n = 0, len(s)
    while pos < n:
        sign = 1
        while pos < n and s[pos] in "+-":
            if s[pos] == "-":
                sign = -sign
            pos += 1
        end = pos
        while end < n and s[end] not in "+-":
            end += 1
        body = s[pos:end]
        if not body:
            raise PolynomialParseError(f"dangling sign in {text!r}")
        coeff, mono = _parse_term(body, str(text))
        terms[mono] = terms.get(mono, Fraction(0)) + sign * coeff
        pos = end
    return Polynomial(terms)


def _format_monomial(mono: Monomial) -> str:
    return "*".join(
        name if e == 1 else f"{name}^{e}" for name, e in zip(VARIABLE_NAMES, mono) if e
    )


def format_polynomial(p: Polynomial) -> str:
    if not p:
        return "0"
    parts: list[str] = []
    for k, (mono, c) in enumerate(p.items()):
        body = _format_monomial(mono)
        magnitude = c if k == 0 else abs(c)
        term = f"{magnitude}*{body}" if body else f"{magnitude}"
        if k == 0:
            parts.append(term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts)
