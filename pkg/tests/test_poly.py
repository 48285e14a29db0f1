# tests/test_poly.py
from fractions import Fraction

import numpy as np
import pytest

from bmpoisson.errors import PolynomialParseError
from bmpoisson.poly import (
    ONE,
    T,
    X1,
    X2,
    X3,
    ZERO,
    Polynomial,
    as_polynomial,
    format_polynomial,
    parse_polynomial,
)


def test_parse_and_format_canonical_order():
    p = parse_polynomial("-2*x3 + x2^2 + x1^2")
    assert p == X1**2 + X2**2 - 2 * X3
    assert format_polynomial(p) == "1*x1^2 + 1*x2^2 - 2*x3"
    assert format_polynomial(ZERO) == "0"
    assert format_polynomial(parse_polynomial("-x2")) == "-1*x2"


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1 + -x2", ONE - X2),
        (" x1 * x2 ", X1 * X2),
        ("3/2*t^2", Polynomial.monomial((0, 0, 0, 2), Fraction(3, 2))),
        ("0.5*x1", X1 * Fraction(1, 2)),
        ("x1 - x1", ZERO),
        ("x1^1*x1", X1**2),
    ],
)
def test_parse_accepts(text, expected):
    assert parse_polynomial(text) == expected


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty polynomial"),
        ("x1 +", "dangling sign"),
        ("x4", "unrecognized factor"),
        ("2**x1", "empty factor"),
        ("1/0", "zero denominator"),
    ],
)
def test_parse_rejects(text, message):
    with pytest.raises(PolynomialParseError, match=message):
        parse_polynomial(text)


def test_parse_error_is_a_value_error():
    with pytest.raises(ValueError):
        parse_polynomial("y")


def test_ring_operations_and_equality_with_scalars():
    p = X1 + 1
    assert p * p == X1**2 + 2 * X1 + 1
    assert 3 - X1 == -(X1 - 3)
    assert Polynomial.constant(Fraction(5, 2)) == Fraction(5, 2)
    assert Polynomial.constant(4) == 4
    assert p**0 == ONE
    with pytest.raises(ValueError):
        p ** -1


def test_degree_and_homogeneity():
    p = parse_polynomial("x1^2*x3 + x2 + 7")
    assert p.degree == 3
    assert not p.is_homogeneous()
    assert p.homogeneous_part(3) == X1**2 * X3
    assert p.homogeneous_part(0) == 7
    assert (X1 * X2 + X3**2).is_homogeneous(2)
    assert p.uses_variable(3) and not p.uses_variable(4)


def test_partials_and_gradient():
    c = X1**2 + X2**2 + X3**2
    assert c.gradient() == (2 * X1, 2 * X2, 2 * X3, ZERO)
    assert (X1 * T**3).partial(4) == 3 * X1 * T**2
    with pytest.raises(ValueError):
        c.partial(5)


def test_evaluate_float_exact_and_vectorized():
    p = parse_polynomial("x1^2 - 1/3*x2*t")
    assert p.evaluate_exact([1, 3, 0, 2]) == Fraction(-1)
    assert p.evaluate([2.0, 0.0, 0.0, 0.0]) == pytest.approx(4.0)
    coords = (np.array([1.0, 2.0]), np.array([3.0, 0.0]), np.zeros(2), np.array([2.0, 5.0]))
    assert np.allclose(p.evaluate(coords), [-1.0, 4.0])


def test_divide_exact():
    num = X1**2 - X2**2
    assert num.divide_exact(X1 - X2) == X1 + X2
    assert (X1 + 1).divide_exact(X2) is None
    assert (2 * X3).divide_exact(Polynomial.constant(2)) == X3
    with pytest.raises(ZeroDivisionError):
        X1.divide_exact(ZERO)


def test_as_polynomial_coercions():
    assert as_polynomial("2 + x1^2") == 2 + X1**2
    assert as_polynomial(3) == 3
    assert as_polynomial(X2) == X2
