# tests/test_models.py
import numpy as np
import pytest

from bmpoisson.errors import ModelError, UnknownModelError, UsageError
from bmpoisson.models import (
    MODEL_CODES,
    ModelId,
    ModelKind,
    catalog,
    flaschka_ratiu,
    model,
    proportionality_check,
)
from bmpoisson.multivector import MultiVector, bundle_map, is_poisson, pfaffian
from bmpoisson.poly import ONE, T, X1, X2, X3, parse_polynomial


def test_catalog_has_the_seven_models_in_order():
    assert tuple(m.code for m in catalog()) == MODEL_CODES
    assert len(MODEL_CODES) == 7


@pytest.mark.parametrize("code", MODEL_CODES)
def test_model_id_parse_round_trip(code):
    mid = ModelId.parse(code)
    assert mid.code == code
    assert str(mid) == code
    assert ModelId.parse(mid) is mid


def test_model_id_fields():
    mid = ModelId.parse("s1-i1")
    assert (mid.component_dim, mid.kind, mid.morse_index) == (1, ModelKind.SADDLE, 1)


@pytest.mark.parametrize("code", ["zz-i9", "c0-i1", "s1-i0", "c2-i0", ""])
def test_unknown_model_ids_are_usage_errors(code):
    with pytest.raises(UnknownModelError) as exc:
        model(code)
    assert isinstance(exc.value, UsageError)


def test_flaschka_ratiu_of_the_sphere_is_twice_the_so3_form():
    c1 = X1**2 + X2**2 + X3**2
    pi = flaschka_ratiu(c1, T)
    expected = MultiVector(2, {(1, 2): X3, (1, 3): -X2, (2, 3): X1})
    assert proportionality_check(pi, expected) == 2


def test_flaschka_ratiu_rejects_zero_factor():
    with pytest.raises(ModelError, match="nonzero"):
        flaschka_ratiu(X1, T, 0)


@pytest.mark.parametrize("m", catalog(), ids=lambda m: m.code)
def test_derived_bivector_is_poisson_and_annihilates_casimirs(m):
    for k in (ONE, parse_polynomial("2 + x1^2")):
        pi = flaschka_ratiu(*m.casimirs, k)
        assert is_poisson(pi)
        assert pfaffian(pi).is_zero
        for dc in m.differentials():
            assert bundle_map(pi, dc).is_zero


@pytest.mark.parametrize("m", catalog(), ids=lambda m: m.code)
def test_normal_form_is_a_constant_multiple_of_the_derived_bivector(m):
    g = proportionality_check(m.bivector, m.normal_form)
    assert g is not None
    assert g.is_constant and not g.is_zero
    assert not m.normal_form.uses_index(4)


def test_saddle_index_two_uses_its_own_normal_form():
    m = model("s0-i2")
    assert proportionality_check(m.bivector, m.printed_bivector) is None
    assert m.normal_form.coefficient((1, 2)) == -X3


def test_conformal_family_and_singular_set():
    m = model("c1-i0")
    assert m.conformal("2") == m.normal_form * 2
    assert m.singular_set == "x1 = x2 = 0"
    assert model("c0-i3").singular_set == "x1 = x2 = x3 = 0"
    d = m.singular_distance(np.array([[3.0, 4.0, 9.0, 1.0], [0.0, 0.0, 5.0, 0.0]]))
    assert np.allclose(d, [5.0, 0.0])


def test_proportionality_check_mismatch():
    a = MultiVector(2, {(1, 2): X1, (1, 3): X2})
    b = MultiVector(2, {(1, 2): X1, (1, 3): X3})
    assert proportionality_check(a, b) is None
    assert proportionality_check(a * X3, a) == X3
