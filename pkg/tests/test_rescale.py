import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cahnblow.core import ContractViolation, Field, Grid
from cahnblow.patterns import fujita_exponent, sobolev_exponent
from cahnblow.rescale import (
    NotEnoughData,
    extract_profile,
    mass_law_exponent,
    scaling_exponents,
    to_similarity,
)
from cahnblow.simulate import Series, SimResult, fit_blowup_rate


# ------------------------------------------------------------- exponents


def test_critical_case_at_sobolev_exponent():
    rep = scaling_exponents(5.0, 3)
    assert rep.gamma1 == 0.0
    assert rep.delta_behavior == "unit"
    assert rep.p_star == 5.0


def test_subcritical_vanishes():
    rep = scaling_exponents(3.0, 3)
    assert rep.gamma1 == -2.0
    assert rep.delta_behavior == "vanishes"


def test_weighted_critical_exponent():
    rep = scaling_exponents(9.0, 3, alpha=2.0)
    assert rep.p_star_alpha == 9.0
    assert rep.gamma1 == 0.0
    assert rep.delta_behavior == "unit"


def test_low_dimension_has_infinite_p_star():
    rep = scaling_exponents(3.0, 1, rule="sobolev")
    assert rep.p_star == math.inf and rep.gamma1 is None
    assert rep.delta_behavior == "vanishes"  # falls back to gamma2


@pytest.mark.parametrize("N", range(3, 15))
def test_both_rules_vanish_at_criticality(N):
    rep = scaling_exponents(sobolev_exponent(N), N)
    assert abs(rep.gamma1) < 1e-12 and abs(rep.gamma2) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 30), st.floats(0.0, 5.0))
def test_weighted_rules_agree_at_criticality(N, alpha):
    p = 1 + 2 * (alpha + 2) / (N - 2)
    rep = scaling_exponents(p, N, alpha)
    assert abs(rep.gamma1) < 1e-10 and abs(rep.gamma2) < 1e-10


@pytest.mark.parametrize("N", [1, 2, 3, 7])
def test_mass_law_exponent_vanishes_at_fujita(N):
    assert mass_law_exponent(fujita_exponent(N), N) == 0.0


def test_scaling_rejects_bad_input():
    with pytest.raises(ContractViolation):
        scaling_exponents(1.0, 3)
    with pytest.raises(ContractViolation):
        scaling_exponents(2.0, 3, rule="other")


# -------------------------------------------------------------- transform


def g_profile(y):
    return np.exp(-y * y) * (1 + 0.3 * y)


def similarity_field(T, t, n=4001, L=12.0):
    grid = Grid.line(L, n, "periodic", x0=-L / 2)
    tau = T - t
    return Field.from_function(grid, lambda x: tau**-0.25 * g_profile(x / tau**0.25))


def test_to_similarity_recovers_profile():
    y_grid = Grid.line(8.0, 200, "periodic", x0=-4.0)
    res = to_similarity(similarity_field(1.0, 0.9), 3.0, 1.0, 0.9, y_grid)
    assert res.valid.all()
    np.testing.assert_allclose(res.field.values, g_profile(y_grid.nodes), atol=1e-6)


def test_to_similarity_of_zero():
    grid = Grid.line(4.0, 64, "periodic", x0=-2.0)
    res = to_similarity(Field(grid, np.zeros(64)), 3.0, 1.0, 0.5, grid)
    assert not np.any(res.field.values)


def test_to_similarity_never_extrapolates():
    y_grid = Grid.line(40.0, 400, "periodic", x0=-20.0)
    res = to_similarity(similarity_field(1.0, 0.0, L=6.0), 3.0, 1.0, 0.0, y_grid)
    assert not res.valid.all()
    assert not np.any(res.field.values[~res.valid])


def test_to_similarity_requires_t_before_T():
    grid = Grid.line(4.0, 64, "periodic", x0=-2.0)
    with pytest.raises(ContractViolation):
        to_similarity(Field(grid, np.zeros(64)), 3.0, 1.0, 1.0, grid)


def test_interpolation_error_is_third_order_or_better():
    y_grid = Grid.line(6.0, 120, "periodic", x0=-3.0)
    errs = []
    for n in (401, 801):
        res = to_similarity(similarity_field(1.0, 0.5, n=n), 3.0, 1.0, 0.5, y_grid)
        errs.append(np.max(np.abs(res.field.values - g_profile(y_grid.nodes))))
    assert errs[1] < errs[0] / 6


# ------------------------------------------------------------- extraction


def synthetic_result(T=1.0, count=40):
    t = 1.0 - np.geomspace(0.5, 1e-3, count)
    sup = (T - t) ** -0.25
    snaps = [(float(s), similarity_field(T, s, n=2001)) for s in t]
    series = Series(t, sup, sup, sup, sup)
    fit = fit_blowup_rate(t[count // 2:], sup[count // 2:])
    return SimResult(
        status="blowup", series=series, snapshots=snaps, T_est=fit.T_est, fit=fit,
        metadata={"fit_window_start": float(t[count // 2])},
    )


def test_extract_exact_similarity_data():
    ex = extract_profile(synthetic_result(), 3.0)
    assert ex.T_est == pytest.approx(1.0, abs=1e-8)
    assert ex.convergence_gap < 1e-4
    y, v = ex.f.valid_values()
    np.testing.assert_allclose(v, g_profile(y), atol=1e-4)


def test_extract_needs_blowup_status():
    res = synthetic_result()
    res.status = "completed"
    with pytest.raises(NotEnoughData):
        extract_profile(res, 3.0)


def test_extract_needs_snapshots_in_window():
    res = synthetic_result()
    res.snapshots = res.snapshots[:2]
    with pytest.raises(NotEnoughData):
        extract_profile(res, 3.0)


def test_extracted_pde_profile_is_positive_bell(blowup_run):
    ex = extract_profile(blowup_run, 3.0)
    y, v = ex.f.valid_values()
    core = np.abs(y) <= 5
    assert np.all(v[core] > 0)
    assert np.argmax(v) == np.argmin(np.abs(y))
    # the exponential tail gives f(5)/f(0) of about 0.016
    assert v[core][0] < 0.05 * v.max()


def test_rescaled_snapshots_converge(blowup_run):
    T = blowup_run.T_est
    y_grid = Grid.line(10.0, 200, "periodic", x0=-5.0)
    snaps = blowup_run.snapshots
    picks = [snaps[len(snaps) // 2], snaps[3 * len(snaps) // 4], snaps[-1]]
    final = to_similarity(picks[-1][1], 3.0, T, picks[-1][0], y_grid).field.values
    gaps = [
        np.max(np.abs(to_similarity(u, 3.0, T, t, y_grid).field.values - final))
        for t, u in picks[:2]
    ]
    assert gaps[1] < gaps[0]
