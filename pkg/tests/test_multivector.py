# tests/test_multivector.py
import numpy as np
import pytest

from bmpoisson.errors import GradeError
from bmpoisson.multivector import (
    BivectorMatrix,
    Covector,
    MultiVector,
    bundle_map,
    format_multivector,
    hamiltonian_field,
    is_poisson,
    matrix_ranks,
    multivector_from_json,
    multivector_to_json,
    numeric_field,
    pfaffian,
    poisson_bracket,
    rank_at,
    schouten,
    wedge,
)
from bmpoisson.poly import ONE, T, X1, X2, X3, ZERO, parse_polynomial

D = MultiVector.partial_field


def _so3():
    return D(1, 2, coeff=X3) + D(1, 3, coeff=-X2) + D(2, 3, coeff=X1)


def test_partial_field_sorts_with_sign():
    assert D(2, 1) == D(1, 2) * -1
    assert D(1, 1).is_zero
    assert D(3, 1, 2) == D(1, 2, 3)
    assert D(2, 1).coefficient((2, 1)) == ONE


def test_constructor_validation():
    with pytest.raises(GradeError):
        MultiVector(5)
    with pytest.raises(ValueError, match="strictly increasing"):
        MultiVector(2, {(2, 1): X1})
    with pytest.raises(GradeError):
        MultiVector(2, {(1,): X1})


def test_schouten_on_vector_fields_is_the_lie_bracket():
    assert schouten(D(2, coeff=X1), D(1)) == D(2) * -1
    assert schouten(D(1), D(2, coeff=X1)) == D(2)


def test_schouten_with_function_is_the_hamiltonian_field():
    pi = _so3()
    for f in (X1, X2 * X3, X1**2 + T):
        assert schouten(pi, MultiVector.scalar(f)) == hamiltonian_field(pi, f)
    assert hamiltonian_field(pi, X3) == D(1, coeff=-X2) + D(2, coeff=X1)


def test_schouten_sign_gives_bracket_of_coordinates():
    # [pi, x_j] = sum_i pi^{ij} d_i
    assert schouten(D(1, 2), MultiVector.scalar(X2)) == D(1)
    assert schouten(D(1, 2), MultiVector.scalar(X1)) == D(2) * -1
    assert schouten(_so3(), MultiVector.scalar(X3)) == D(1, coeff=-X2) + D(2, coeff=X1)


def test_is_poisson_examples():
    assert is_poisson(_so3())
    assert is_poisson(D(1, 2) + D(3, 4))
    assert not is_poisson(D(1, 2) + D(3, 4, coeff=X1))
    with pytest.raises(GradeError):
        is_poisson(D(1))


def test_grade_errors():
    with pytest.raises(GradeError, match="grade exceeds dimension"):
        wedge(D(1, 2, 3), D(4, 1))
    with pytest.raises(GradeError, match="negative grade"):
        schouten(MultiVector.scalar(X1), MultiVector.scalar(X2))
    with pytest.raises(GradeError, match="grade exceeds dimension"):
        schouten(D(1, 2, 3), D(1, 2, 4))


def test_wedge_is_graded_commutative():
    a, b = D(1, coeff=X2), D(3, coeff=X1)
    assert wedge(a, b) == wedge(b, a) * -1
    assert wedge(a, a).is_zero
    assert wedge(D(1, 2), D(3, 4)) == D(1, 2, 3, 4)


def test_poisson_bracket_and_bundle_map():
    pi = _so3()
    assert poisson_bracket(pi, X1, X2) == X3
    assert poisson_bracket(pi, X2, X1) == -X3
    casimir = X1**2 + X2**2 + X3**2
    assert bundle_map(pi, Covector.differential(casimir)).is_zero
    assert Covector.differential(X1 * X2)[2] == X1


def test_pfaffian_and_numeric_ranks():
    pi = _so3()
    assert pfaffian(pi) == ZERO
    assert pfaffian(D(1, 2) + D(3, 4)) == ONE
    assert rank_at(pi, (0.3, -0.2, 0.5, 1.0)) == 2
    assert rank_at(pi, (0.0, 0.0, 0.0, 1.0)) == 0
    assert rank_at(D(1, 2) + D(3, 4), (0.0, 0.0, 0.0, 0.0)) == 4

    field = numeric_field(pi)
    pts = np.array([[1.0, 2.0, 3.0, 0.0], [0.0, 0.0, 0.0, 0.0]])
    mats = field(pts)
    assert mats.shape == (2, 4, 4)
    assert mats[0, 0, 1] == pytest.approx(3.0)
    assert mats[0, 1, 0] == pytest.approx(-3.0)
    assert matrix_ranks(mats).tolist() == [2, 0]


def test_bivector_matrix_round_trip_and_antisymmetry():
    pi = _so3()
    m = BivectorMatrix.from_multivector(pi)
    assert m[2, 1] == -X3
    assert m.to_multivector() == pi
    with pytest.raises(ValueError, match="antisymmetric"):
        BivectorMatrix(tuple(tuple(ONE if i != j else ZERO for j in range(4)) for i in range(4)))


def test_text_and_json_forms():
    pi = D(1, 2, coeff=parse_polynomial("2*x3")) + D(2, 3, coeff=X1)
    assert format_multivector(pi) == "(2*x3)*d12 + (1*x1)*d23"
    assert format_multivector(MultiVector.zero(2)) == "0"
    data = multivector_to_json(pi)
    assert data == {
        "grade": 2,
        "terms": [{"indices": [1, 2], "coeff": "2*x3"}, {"indices": [2, 3], "coeff": "1*x1"}],
    }
    assert multivector_from_json(data) == pi
    with pytest.raises(ValueError, match="duplicate"):
        multivector_from_json({"grade": 1, "terms": [{"indices": [1], "coeff": "1"}] * 2})
