import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cahnblow.core import (
    ContractViolation,
    Field,
    Grid,
    NonfiniteField,
    NonInvertible,
    biharmonic,
    inner,
    inverse_laplacian,
    laplacian,
    norms,
    sine_coefficients,
    sine_synthesis,
)

from conftest import navier, periodic


def sines(grid, coeffs):
    x = grid.nodes
    return Field(grid, sum(c * np.sin((k + 1) * np.pi * x / grid.length) for k, c in enumerate(coeffs)))


# ----------------------------------------------------------------- grids


def test_grid_spacing():
    assert Grid.line(1.0, 9, "navier").h == pytest.approx(0.1)
    assert Grid.line(1.0, 10, "periodic").h == pytest.approx(0.1)
    assert Grid.radial(1.0, 11, N=3).h == pytest.approx(0.1)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(geometry="line", n=4, bc="navier", length=1.0),
        dict(geometry="line", n=16, bc="navier", length=0.0),
        dict(geometry="line", n=16, bc="symmetric", length=1.0),
        dict(geometry="radial", n=16, bc="navier", length=1.0),
        dict(geometry="disk", n=16, bc="navier", length=1.0),
    ],
)
def test_grid_rejects_bad_data(kwargs):
    with pytest.raises(ContractViolation):
        Grid(**kwargs)


def test_field_rejects_nonfinite_and_wrong_length():
    g = navier(n=15)
    with pytest.raises(NonfiniteField):
        Field(g, np.full(15, np.nan))
    with pytest.raises(ContractViolation):
        Field(g, np.zeros(14))


def test_field_is_read_only():
    f = Field(navier(n=15), np.zeros(15))
    with pytest.raises(ValueError):
        f.values[0] = 1.0


# ------------------------------------------------------------ transforms


def test_sine_coefficients_of_basis_function():
    c = sine_coefficients(sines(navier(), [1.0]))
    assert c[0] == pytest.approx(1.0, abs=1e-13)
    assert np.max(np.abs(c[1:])) < 1e-13


def test_sine_coefficients_of_zero():
    assert not np.any(sine_coefficients(Field(navier(), np.zeros(255))))


def test_sine_coefficients_linear_combination():
    c = sine_coefficients(sines(navier(), [1.0, 0.0, 2.0]))
    expected = np.zeros(255)
    expected[[0, 2]] = [1.0, 2.0]
    np.testing.assert_allclose(c, expected, atol=1e-13)


def test_sine_coefficients_need_navier():
    with pytest.raises(ContractViolation):
        sine_coefficients(Field(periodic(), np.zeros(256)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=20))
def test_sine_round_trip(coeffs):
    g = navier(n=63)
    f = sines(g, coeffs)
    back = sine_synthesis(g, sine_coefficients(f))
    scale = max(np.max(np.abs(f.values)), 1e-300)
    assert np.max(np.abs(back.values - f.values)) <= 1e-12 * scale + 1e-300


# ------------------------------------------------------------- operators


@pytest.mark.parametrize("k", [1, 2, 5])
def test_laplacian_eigenfunction(k):
    g = navier(L=2.0)
    f = Field.from_function(g, lambda x: np.sin(k * np.pi * x / 2.0))
    expected = -((k * np.pi / 2.0) ** 2) * f.values
    np.testing.assert_allclose(laplacian(f).values, expected, atol=1e-10)


def test_laplacian_of_periodic_constant():
    f = Field(periodic(), np.full(256, 3.0))
    assert np.max(np.abs(laplacian(f).values)) < 1e-12


def test_radial_laplacian_of_r_squared():
    # Delta r^2 = 2N; the centred stencil is exact on quadratics
    g = Grid.radial(2.0, 201, N=3)
    lap = laplacian(Field.from_function(g, lambda r: r * r)).values
    np.testing.assert_allclose(lap, 6.0, rtol=1e-8)


def test_radial_biharmonic_of_linear_function_in_1d():
    g = Grid.radial(1.0, 101, N=1)
    bi = biharmonic(Field.from_function(g, lambda r: 1.0 + 0.0 * r)).values
    assert np.max(np.abs(bi)) < 1e-8


def test_inverse_laplacian_eigenvalue_one():
    g = navier()
    f = Field.from_function(g, np.sin)
    np.testing.assert_allclose(inverse_laplacian(f).values, np.sin(g.nodes), atol=1e-13)


def test_inverse_laplacian_eigenvalue_four():
    g = navier()
    f = Field.from_function(g, lambda x: np.sin(2 * x))
    np.testing.assert_allclose(inverse_laplacian(f).values, np.sin(2 * g.nodes) / 4, atol=1e-13)


def test_inverse_laplacian_rejects_periodic_constant():
    with pytest.raises(NonInvertible):
        inverse_laplacian(Field(periodic(), np.ones(256)))


def test_biharmonic_two_modes():
    # round-off in the top mode is amplified by k^4, so keep the grid modest
    g = navier(n=63)
    f = Field.from_function(g, lambda x: np.sin(x) + np.sin(2 * x))
    expected = np.sin(g.nodes) + 16 * np.sin(2 * g.nodes)
    np.testing.assert_allclose(biharmonic(f).values, expected, atol=1e-8)


# ----------------------------------------------------------------- norms


def test_norms_of_sine():
    nm = norms(Field.from_function(navier(), np.sin))
    assert nm.l2**2 == pytest.approx(np.pi / 2, rel=1e-12)
    assert nm.h1_semi**2 == pytest.approx(np.pi / 2, rel=1e-12)
    assert nm.linf == pytest.approx(1.0, abs=1e-4)
    # int_0^pi sin^4 = 3 pi / 8
    assert nm.lp1 == pytest.approx(3 * np.pi / 8, rel=1e-12)
    assert nm.hminus1**2 == pytest.approx(np.pi / 2, rel=1e-12)


def test_norms_of_zero():
    nm = norms(Field(navier(), np.zeros(255)))
    assert (nm.l2, nm.linf, nm.h1_semi, nm.lp1, nm.hminus1) == (0, 0, 0, 0, 0)


def test_hminus1_unavailable_for_nonzero_mean():
    assert norms(Field(periodic(), np.ones(256))).hminus1 is None


# ------------------------------------------------------------ properties

coeff_lists = st.lists(st.floats(-3, 3), min_size=1, max_size=12)


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_biharmonic_is_laplacian_squared(coeffs):
    f = sines(navier(n=63), coeffs)
    np.testing.assert_allclose(
        biharmonic(f).values, laplacian(laplacian(f)).values, atol=1e-9 * (1 + np.max(np.abs(f.values)))
    )


@settings(max_examples=40, deadline=None)
@given(coeff_lists, coeff_lists)
def test_laplacian_is_self_adjoint(a, b):
    g = navier(n=63)
    f, h = sines(g, a), sines(g, b)
    lhs, rhs = inner(laplacian(f), h), inner(f, laplacian(h))
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_inverse_laplacian_is_positive_and_inverts(coeffs):
    f = sines(navier(n=63), coeffs)
    assert inner(inverse_laplacian(f), f) >= -1e-14
    back = -laplacian(inverse_laplacian(f)).values
    assert np.max(np.abs(back - f.values)) <= 1e-10 * (1 + np.max(np.abs(f.values)))
