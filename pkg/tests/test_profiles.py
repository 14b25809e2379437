import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cahnblow.core import ContractViolation
from cahnblow.profiles import (
    A0,
    BundleParams,
    ContinuationLost,
    NonIntegrableTail,
    extension_shoot,
    limit_profile_g0,
    mu_continuation,
    oscillation_frequency,
    profile_mass,
    shoot,
    solve_profile,
    tail_state,
)


def test_a0_constant():
    assert A0 == pytest.approx(0.472470, abs=5e-7)


# ------------------------------------------------------------------ tails


def test_tail_zero_bundle():
    assert not np.any(tail_state(7.0, BundleParams(A=0, C=0, p=3)))


def test_tail_power_law():
    y = 6.0
    np.testing.assert_allclose(
        tail_state(y, BundleParams(A=1, C=0, p=3)),
        [1 / y, -1 / y**2, 2 / y**3, -6 / y**4],
        rtol=1e-14,
    )


def _symbolic_tail(A, C, p, y0):
    y = sp.symbols("y", positive=True)
    a0 = 3 * sp.Integer(2) ** sp.Rational(-8, 3)
    f = A * y ** (-2 / sp.nsimplify(p - 1)) + C * y ** sp.Rational(-1, 3) * sp.exp(-a0 * y ** sp.Rational(4, 3))
    return [float(sp.diff(f, y, k).subs(y, y0).evalf(30)) for k in range(4)]


def test_tail_exponential_term_at_ten():
    got = tail_state(10.0, BundleParams(A=0, C=1, p=3))
    assert got[0] == pytest.approx(10 ** (-1 / 3) * math.exp(-A0 * 10 ** (4 / 3)), rel=1e-13)
    np.testing.assert_allclose(got, _symbolic_tail(0, 1, 3, 10), rtol=1e-11)


@pytest.mark.parametrize("A,C,p,y", [(0.7, -1.3, 2.5, 5.5), (-2.0, 0.4, 4.0, 12.0), (1.0, 1.0, 1.5, 8.0)])
def test_tail_matches_symbolic_oracle(A, C, p, y):
    np.testing.assert_allclose(
        tail_state(y, BundleParams(A=A, C=C, p=p)), _symbolic_tail(A, C, p, y), rtol=1e-10
    )


def test_tail_rejects_small_y():
    with pytest.raises(ContractViolation):
        tail_state(4.0, BundleParams(A=1, C=1, p=3))


@settings(max_examples=30, deadline=None)
@given(
    st.floats(-3, 3), st.floats(-3, 3), st.floats(1.3, 6.0), st.floats(6.0, 14.0),
    st.sampled_from([0.25, 0.15, 0.0]), st.booleans(),
)
def test_tail_derivatives_match_finite_differences(A, C, p, y, mu, corrected):
    params = BundleParams(A=A, C=C, p=p, B=0.5 * C, mu=mu)
    # the series corrections carry steep powers, so the difference step is small
    h = 2e-5 * y
    s = tail_state(y, params, corrected=corrected)
    fd = (tail_state(y + h, params, corrected=corrected) - tail_state(y - h, params, corrected=corrected)) / (2 * h)
    scale = np.max(np.abs(s)) + 1e-300
    assert np.max(np.abs(fd[:3] - s[1:])) <= 1e-6 * scale


def test_extension_envelope_is_wider():
    y = 10.0
    assert math.exp(-(A0 / 2) * y ** (4 / 3)) > math.exp(-A0 * y ** (4 / 3))
    ext = tail_state(y, BundleParams(A=0, B=1, C=0, p=3), kind="extension")
    blow = tail_state(y, BundleParams(A=0, C=1, p=3))
    assert abs(ext[0]) > 100 * abs(blow[0])


# --------------------------------------------------------------- shooting


def test_zero_shot():
    r = shoot(3.0, 0.0, 0.0)
    assert r.residual == (0.0, 0.0)
    assert not np.any(r.trajectory.f)


def test_odd_symmetry_at_A_zero():
    a, b = shoot(3.0, 0.0, 1.0), shoot(3.0, 0.0, -1.0)
    np.testing.assert_allclose(a.trajectory.f, -b.trajectory.f, rtol=1e-12, atol=1e-300)
    assert a.residual == pytest.approx(tuple(-v for v in b.residual), rel=1e-12)


def test_shoot_checks_arguments():
    with pytest.raises(ContractViolation):
        shoot(3.0, 0.0, 1.0, y_max=8.0)
    with pytest.raises(ContractViolation):
        shoot(1.0, 0.0, 1.0)


@pytest.mark.parametrize("p,A,C", [(3.0, 0.0, 1.7), (4.0, 0.45, 1.2)])
def test_expanded_form_agrees_with_divergence_form(p, A, C):
    # for p >= 3 the expanded nonlinearity has no singular factor
    a = shoot(p, A, C, form="divergence")
    b = shoot(p, A, C, form="expanded")
    np.testing.assert_allclose(a.residual, b.residual, rtol=1e-7, atol=1e-10)
    np.testing.assert_allclose(a.trajectory.f, b.trajectory.f, atol=1e-8)


def test_residual_continuity_in_C():
    Cs = np.linspace(1.70, 1.76, 13)
    r = np.array([shoot(3.0, 0.0, C, n_samples=2).residual[0] for C in Cs])
    assert np.max(np.abs(np.diff(r))) < 0.1 * (np.max(r) - np.min(r)) + 1e-12
    assert np.count_nonzero(np.diff(np.sign(r))) == 1


# --------------------------------------------------------------- solutions


def test_ground_state_at_fujita(profile_p3):
    prof = profile_p3
    assert max(map(abs, prof.residual)) <= 1e-8
    assert abs(prof.params.A) <= 1e-4 * prof.sup
    assert np.all(prof.f > 0)
    assert prof.f[0] == pytest.approx(1.129104073, abs=1e-7)


def test_subfujita_profile_changes_sign(profile_p2):
    prof = profile_p2
    assert max(map(abs, prof.residual)) <= 1e-8
    assert prof.params.A < 0
    assert prof.sign_changes() >= 1
    l1 = 2 * np.trapezoid(np.abs(prof.f), prof.y)
    assert abs(profile_mass(prof)) <= 1e-3 * l1


def test_superfujita_profile(profile_p4):
    assert profile_p4.params.A > 0
    assert profile_p4.mass is None
    with pytest.raises(NonIntegrableTail):
        profile_mass(profile_p4)


def test_zero_profile_mass():
    assert profile_mass(shoot(2.0, 0.0, 0.0).trajectory) == 0.0


@pytest.mark.parametrize("p,y_far", [(3.0, 20.0), (2.5, 20.0), (2.0, 17.0)])
def test_profile_insensitive_to_tail_cut(p, y_far):
    # at p = 2 and y = 20 the exponential mode sits below the integrator's
    # relative tolerance against the algebraic one, so 17 is the far cut there
    near = solve_profile(p)
    far = solve_profile(p, seed=near.params, y_max=y_far, sweep=False)
    y = np.linspace(0.0, 10.0, 201)
    assert np.max(np.abs(far(y) - near(y))) < 1e-6


def test_p3_profile_matches_the_pde(profile_p3, blowup_run):
    from cahnblow.rescale import extract_profile

    ex = extract_profile(blowup_run, 3.0)
    y, v = ex.f.valid_values()
    core = np.abs(y) <= 5
    diff = v[core] / np.max(np.abs(v)) - profile_p3(y[core]) / profile_p3.sup
    assert np.max(np.abs(diff)) <= 5e-2


# ------------------------------------------------------------ limit profile


def test_limit_profile_initial_data_and_curvature():
    lp = limit_profile_g0(3.0)
    assert lp.g[0] == 1.0 and lp.gp[0] == 0.0
    # g0''(0) = -1/(2 (p-1) p) = -1/12 from the equation at z = 0; g0' is odd
    near = limit_profile_g0(3.0, z_max=0.05, n_samples=51)
    z = near.z[1:]
    coef = np.linalg.lstsq(np.column_stack([z, z**3, z**5]), near.gp[1:], rcond=None)[0]
    assert coef[0] == pytest.approx(-1 / 12, abs=1e-8)


@pytest.mark.parametrize("p", [1.5, 3.0, 5.0])
def test_limit_profile_monotone(p):
    lp = limit_profile_g0(p)
    assert np.all(np.diff(lp.g) < 0)


def test_oscillation_frequency():
    assert oscillation_frequency(4.0, 1.0) == 2.0
    assert oscillation_frequency(3.0, 0.01) == pytest.approx(17.3205, abs=1e-4)
    eps = np.geomspace(1e-4, 1.0, 20)
    assert np.all(np.diff([oscillation_frequency(3.0, e) for e in eps]) < 0)


# -------------------------------------------------------------- extension


def test_extension_zero_shot():
    r = extension_shoot(3.0, 1, 0.0, 0.0, 0.0)
    assert r.residual == (0.0, 0.0)


def test_extension_residual_linear_for_small_amplitudes():
    a = np.array(extension_shoot(3.0, 1, 0.0, 1e-6, 2e-6).residual)
    b = np.array(extension_shoot(3.0, 1, 0.0, 2e-6, 4e-6).residual)
    np.testing.assert_allclose(b, 2 * a, rtol=0.05)


# ------------------------------------------------------------ continuation


@pytest.fixture(scope="module")
def branch_p3():
    return mu_continuation(3.0, steps=3)


def test_continuation_endpoint_matches_direct_solve(branch_p3, profile_p3):
    mu, prof = branch_p3[-1]
    assert mu == 0.25
    assert prof.params.A == pytest.approx(profile_p3.params.A, abs=1e-6)
    assert prof.params.C == pytest.approx(profile_p3.params.C, abs=1e-6)


def test_continuation_mu_grid_increasing(branch_p3):
    mus = [m for m, _ in branch_p3]
    assert mus == [0.0, 0.125, 0.25]
    assert all(p.sup > 0.5 for _, p in branch_p3)


def test_two_step_continuation_is_two_solves(branch_p3):
    two = mu_continuation(3.0, steps=2)
    assert [m for m, _ in two] == [0.0, 0.25]
    (_, first), (_, last) = two
    assert first.f[0] == pytest.approx(branch_p3[0][1].f[0], rel=1e-8)
    direct0 = solve_profile(3.0, seed=first.params, mu=0.0)
    assert direct0.f[0] == pytest.approx(first.f[0], rel=1e-8)
    assert last.params.C == pytest.approx(branch_p3[-1][1].params.C, abs=1e-6)


def test_continuation_needs_two_steps():
    with pytest.raises(ContractViolation):
        mu_continuation(3.0, steps=1)


def test_continuation_lost_reports_branch():
    with pytest.raises(ContinuationLost) as info:
        mu_continuation(3.0, steps=3, seed=BundleParams(A=0.0, B=0.0, C=0.0, p=3.0, mu=0.0))
    assert info.value.branch == []
