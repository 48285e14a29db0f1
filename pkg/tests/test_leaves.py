# tests/test_leaves.py
import math

import numpy as np
import pytest

from bmpoisson.errors import LeafGeometryError, NotTangentError, SingularPointError
from bmpoisson.leaves import (
    corrected_frame,
    frame_needs_repair,
    frame_text,
    frame_validity,
    leaf_density,
    leaf_frame,
    symplectic_eval,
    symplectic_eval_dual,
    trace_leaf,
)
from bmpoisson.models import MODEL_CODES, model

FULL_TURN = 2 * math.pi / 6284


def test_frame_is_undefined_on_the_axis():
    with pytest.raises(LeafGeometryError, match="frame undefined on axis"):
        leaf_frame("c0-i0", (0.0, 0.0, 0.4, 0.0))
    with pytest.raises(LeafGeometryError, match="frame undefined on axis"):
        leaf_density((0.0, 0.0, 1.0, 0.0), 1.0)


@pytest.mark.parametrize("code", MODEL_CODES)
def test_corrected_frame_is_tangent_and_orthogonal(code):
    for q in [(0.3, 0.7, 0.5, 0.0), (-0.8, 0.2, -0.4, 1.5), (0.1, -0.9, 0.6, -2.0)]:
        assert frame_validity(code, q, repaired=True).ok()


def test_transcribed_frame_text_is_kept_when_valid():
    assert not frame_needs_repair("c0-i0")
    assert frame_text("c0-i0") == frame_text("c0-i0", repaired=True)


def test_leaf_form_matches_density_on_the_sphere_model():
    m = model("c0-i0")
    for k in (1.0, 2.0):
        pi = m.conformal(str(int(k)))
        for q in [(0.3, 0.7, 0.5, 0.0), (-0.6, 0.25, -0.1, 3.0)]:
            u, v = corrected_frame(m, q).as_arrays()
            expected = leaf_density(q, k)
            assert symplectic_eval(pi, q, u, v) == pytest.approx(expected, rel=1e-9)
            assert symplectic_eval_dual(pi, q, u, v) == pytest.approx(expected, rel=1e-9)


def test_leaf_form_rejects_singular_points_and_non_tangent_vectors():
    pi = model("c0-i0").normal_form
    with pytest.raises(SingularPointError):
        symplectic_eval(pi, (0.0, 0.0, 0.0, 1.0), (1.0, 0.0, 0.0, 0.0), (0.0, 1.0, 0.0, 0.0))
    with pytest.raises(NotTangentError) as exc:
        symplectic_eval(pi, (0.3, 0.7, 0.5, 0.0), (0.0, 0.0, 0.0, 1.0), (0.0, 1.0, 0.0, 0.0))
    assert exc.value.vector_name == "u"


def test_circle_trace_closes_and_keeps_the_casimir():
    m = model("c0-i0")
    sample = trace_leaf(m.normal_form, (1.0, 0.0, 0.0, 0.0), ["x3"], FULL_TURN, 6284, model=m)
    assert len(sample.points) == 6285
    assert not sample.hit_singular_set
    assert np.linalg.norm(np.subtract(sample.points[-1], sample.start)) < 1e-5
    assert sample.casimir_drift < 1e-9
    assert sample.max_radius() == pytest.approx(1.0, abs=1e-9)


def test_cylinder_trace_stays_on_its_level_set():
    m = model("c1-i0")
    sample = trace_leaf(m.normal_form, (0.6, 0.8, 0.2, 0.0), ["x3", "x1"], 1e-2, 200, model=m)
    pts = np.asarray(sample.points)
    assert pts.shape == (401, 4)
    assert np.allclose(pts[:, 0] ** 2 + pts[:, 1] ** 2, 1.0, atol=1e-8)
    assert np.allclose(pts[:, 3], 0.0)
    side = sample.sidecar()
    assert side["model"] == "c1-i0"
    assert side["hamiltonians"] == ["1*x3", "1*x1"]
    assert side["start"] == [0.6, 0.8, 0.2, 0.0]


def test_trace_rejects_singular_start_and_bad_step():
    m = model("c0-i0")
    with pytest.raises(SingularPointError, match="singular point"):
        trace_leaf(m.normal_form, (0.0, 0.0, 0.0, 0.0), ["x3"], 1e-3, 10, model=m)
    with pytest.raises(LeafGeometryError, match="step must be positive"):
        trace_leaf(m.normal_form, (1.0, 0.0, 0.0, 0.0), ["x3"], 0.0, 10, model=m)
