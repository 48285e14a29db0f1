# tests/test_cohomology.py
import pytest

from bmpoisson.cohomology import (
    build_slice,
    casimir_space,
    cohomology_dims,
    complex_grid,
    differential_matrix,
    table_report,
)
from bmpoisson.errors import CohomologyError
from bmpoisson.models import model
from bmpoisson.multivector import MultiVector
from bmpoisson.poly import X1, X2, X3, parse_polynomial

D = MultiVector.partial_field


@pytest.fixture(scope="module")
def so3():
    return model("c0-i0").normal_form


@pytest.fixture(scope="module")
def e2():
    return model("c1-i0").normal_form


@pytest.mark.parametrize("k, d, size", [(0, 0, 1), (0, 1, 3), (1, 1, 9), (2, 2, 18), (3, 0, 1), (3, 2, 6)])
def test_slice_sizes(k, d, size):
    assert build_slice(k, d).size == size


def test_slice_rejects_bad_indices():
    with pytest.raises(CohomologyError):
        build_slice(4, 0)
    with pytest.raises(CohomologyError):
        build_slice(0, -1)


def test_slice_coordinates_round_trip():
    sl = build_slice(1, 1)
    mv = D(1, coeff=X1) + D(3, coeff=parse_polynomial("2*x2 - x3"))
    assert sl.element(sl.coords(mv)) == mv
    with pytest.raises(CohomologyError, match="outside slice"):
        sl.coords(D(1, coeff=X1**2))


def test_casimir_spaces(so3, e2):
    assert casimir_space(so3, 2) == [X1**2 + X2**2 + X3**2]
    assert casimir_space(e2, 2) == [X1**2 + X2**2]
    assert casimir_space(so3, 1) == []


@pytest.mark.parametrize("d, dims", [(0, (1, 0, 0, 1)), (1, (0, 0, 0, 0)), (2, (1, 0, 0, 1))])
def test_so3_cohomology(so3, d, dims):
    assert cohomology_dims(so3, d, with_generators=False).dims == dims


@pytest.mark.parametrize("d, dims", [(0, (1, 1, 1, 1)), (1, (0, 1, 2, 1)), (2, (1, 1, 1, 1))])
def test_e2_cohomology(e2, d, dims):
    result = cohomology_dims(e2, d)
    assert result.dims == dims
    assert [len(g) for g in result.generators] == list(dims)
    for k, gens in enumerate(result.generators):
        assert result.class_rank(k, gens) == len(gens)


def test_e2_linear_certificates(e2):
    result = cohomology_dims(e2, 1)
    assert result.is_nontrivial_class(1, D(1, coeff=X1) + D(2, coeff=X2))
    assert result.is_cocycle(2, D(1, 2, coeff=X3))
    assert result.is_nontrivial_class(3, D(1, 2, 3, coeff=X3))
    hamiltonian = D(1, coeff=-X2) + D(2, coeff=X1)
    assert result.is_coboundary(1, hamiltonian)


def test_e2_quadratic_certificates(e2):
    result = cohomology_dims(e2, 2)
    assert result.is_nontrivial_class(1, D(3, coeff=X1**2))
    assert result.is_coboundary(1, D(3, coeff=X1**2 - X2**2))
    assert result.class_rank(1, [D(3, coeff=X1**2), D(3, coeff=X2**2)]) == 1
    assert result.is_nontrivial_class(0, MultiVector.scalar(X1**2 + X2**2))


def test_differential_squares_to_zero(e2):
    d0 = differential_matrix(e2, build_slice(0, 1))
    d1 = differential_matrix(e2, build_slice(1, 1))
    assert (d1.entries * d0.entries).is_zero_matrix
    assert d0.rank == 3


def test_input_checks():
    with pytest.raises(CohomologyError, match="degree-mixing"):
        cohomology_dims(D(1, 2, coeff=X3 + X1**2), 1)
    with pytest.raises(CohomologyError, match="x1..x3 chart"):
        cohomology_dims(D(1, 4, coeff=X1), 1)
    not_poisson = D(1, 2, coeff=X3) + D(1, 3, coeff=X1)
    with pytest.raises(CohomologyError, match="d_pi squared is not zero"):
        cohomology_dims(not_poisson, 1)


def test_complex_grid_and_report_json():
    grid = complex_grid(model("s0-i2").normal_form, (1, 2), with_generators=False)
    assert grid[1].dims == (0, 0, 0, 0)
    assert grid[2].dims == (1, 0, 0, 1)

    report = table_report("c1-i0", (1,))
    data = report.to_json()
    assert data["model"] == "c1-i0"
    assert data["grid"][0]["dims"] == [0, 1, 2, 1]
    assert report.to_rows()[1] == ["c1-i0", 1, 0, 1, 2, 1]
    assert report.to_text().startswith("Poisson cohomology of c1-i0")
    assert any(e["location"] == "table 7 / c1-i0 / H^2" for e in data["discrepancies"])
