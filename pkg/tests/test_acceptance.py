"""The thirteen acceptance criteria, one test each.

Every test records a ``criterion N PASS|FAIL`` line; the lines are printed
together at the end of the pytest run.  Run this file alone with
``python3 -m pytest tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from cahnblow.core import Field, Grid
from cahnblow.patterns import (
    characteristic_roots,
    exponent_report,
    fujita_exponent,
    hardy_criterion,
    joseph_lundgren_exponent,
    loewner_nirenberg_residual,
    serrin_exponent,
    singular_state,
    sobolev_exponent,
)
from cahnblow.profiles import profile_mass
from cahnblow.rescale import extract_profile
from cahnblow.simulate import SimConfig, run
from cahnblow.spectral import adjoint_eigenfunction, biorthonormality_check, kernel_F, multi_indices
from cahnblow.steady import (
    EllipticConfig,
    NotConverged,
    TrivialLimit,
    category_census,
    fibering_map,
    fibering_seed,
    positive_solution_threshold,
    solve_steady,
)

from conftest import ACCEPTANCE
from test_steady import identity_terms


def record(number, title, ok, detail):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    print(line)
    ACCEPTANCE[number] = line
    assert ok, line


# --------------------------------------------------------------- spectral


def test_criterion_01_hermite_eigen_identity():
    t0 = time.perf_counter()
    bad, count = [], 0
    for N in (1, 2, 3):
        for beta in multi_indices(8, N):
            count += 1
            if adjoint_eigenfunction(beta).residual():
                bad.append(beta.components)
    elapsed = time.perf_counter() - t0
    record(1, "Hermite eigen-identity", not bad and elapsed < 5.0,
           f"{count} multi-indices, {len(bad)} nonzero remainders, {elapsed:.2f} s")


def test_criterion_02_kernel_and_biorthonormality():
    t0 = time.perf_counter()
    mass = kernel_F(np.linspace(-40.0, 40.0, 4001), orders=0).integral()
    gram = np.array([[biorthonormality_check(a, b) for b in range(5)] for a in range(5)])
    err = float(np.max(np.abs(gram - np.eye(5))))
    elapsed = time.perf_counter() - t0
    ok = abs(mass - 1.0) <= 1e-8 and err <= 1e-6 and elapsed < 30.0
    record(2, "kernel mass and Gram matrix", ok,
           f"|int F - 1| = {abs(mass - 1):.1e}, max Gram error {err:.1e}, {elapsed:.1f} s")


# ---------------------------------------------------------------- simulate


def _periodic_run(sign, t_end=1.0, n=256):
    grid = Grid.line(2 * math.pi, n, "periodic")
    u0 = Field.from_function(grid, lambda x: 0.3 + 0.5 * np.cos(x) + 0.2 * np.sin(2 * x))
    cfg = SimConfig(p=3.0, gamma=0.0, sign=sign, grid=grid, t_end=t_end, blowup_threshold=10.0)
    return run(cfg, u0)


def test_criterion_03_mass_conservation():
    drifts = []
    for sign in ("stable", "unstable"):
        res = _periodic_run(sign)
        m = res.series.mass
        drifts.append(float(np.max(np.abs(m - m[0])) / (1 + abs(m[0]))))
        assert res.status == "completed"
    record(3, "mass conservation", max(drifts) <= 1e-10,
           f"relative drift stable {drifts[0]:.1e}, unstable {drifts[1]:.1e}")


def test_criterion_04_energy_dissipation():
    E = _periodic_run("stable").series.energy
    worst = float(np.max(np.diff(E) / (1 + np.abs(E[:-1]))))
    record(4, "energy dissipation", worst <= 1e-8, f"largest relative increase per step {worst:.1e}")


_BOUNDED: list[float] = []


@settings(max_examples=5, derandomize=True, deadline=None,
          suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2**31 - 1))
def _bounded_run(seed):
    rng = np.random.default_rng(seed)
    grid = Grid.line(2 * math.pi, 128, "periodic")
    x = grid.nodes
    u = sum(rng.normal() / k**2 * np.cos(k * x + rng.uniform(0, 2 * math.pi)) for k in range(1, 7))
    u0 = Field(grid, u / np.max(np.abs(u)))
    cfg = SimConfig(p=3.0, gamma=0.0, sign="stable", grid=grid, dt0=1e-2, t_end=10.0,
                    blowup_threshold=10.0)
    res = run(cfg, u0)
    assert res.status == "completed", res.status
    _BOUNDED.append(float(np.max(res.series.sup)))
    assert _BOUNDED[-1] <= 2.0


def test_criterion_05_global_boundedness():
    _BOUNDED.clear()
    try:
        _bounded_run()
        ok = len(_BOUNDED) >= 5
    except AssertionError:
        ok = False
    record(5, "global boundedness", ok,
           f"{len(_BOUNDED)} random data, largest sup on [0, 10] = {max(_BOUNDED, default=math.nan):.3f}")


def test_criterion_06_blowup_rate(blowup_run):
    t0 = time.perf_counter()
    res = blowup_run
    expo = res.fit.exponent if res.fit else math.nan
    ok = res.status == "blowup" and abs(expo - 0.25) <= 0.2 * 0.25
    record(6, "blow-up rate", ok,
           f"status {res.status}, exponent {expo:.4f}, T_est {res.T_est:.6g} "
           f"(run cached; check {time.perf_counter() - t0:.1f} s)")


def test_criterion_06_runtime():
    from conftest import demo_config

    t0 = time.perf_counter()
    cfg, u0 = demo_config()
    status = run(cfg, u0).status
    elapsed = time.perf_counter() - t0
    assert status == "blowup" and elapsed < 120.0, f"{status} after {elapsed:.1f} s"


# ---------------------------------------------------------------- profiles


def test_criterion_07_pde_ode_agreement(blowup_run, profile_p3):
    ex = extract_profile(blowup_run, 3.0)
    y, v = ex.f.valid_values()
    core = np.abs(y) <= 5
    pde = v[core] / np.max(np.abs(v[core]))
    ode = profile_p3(y[core]) / profile_p3.sup
    diff = float(np.max(np.abs(pde - ode)))
    a_ratio = abs(profile_p3.params.A) / profile_p3.sup
    ok = diff <= 5e-2 and a_ratio <= 1e-4
    record(7, "PDE/ODE profile agreement", ok,
           f"sup-difference {diff:.2e} on |y| <= 5, |A|/||f|| = {a_ratio:.1e}, "
           f"convergence gap {ex.convergence_gap:.1e}")


def test_criterion_08_zero_mass_and_sign_change(profile_p2):
    prof = profile_p2
    mass = profile_mass(prof)
    l1 = 2 * float(np.trapezoid(np.abs(prof.f), prof.y))
    ok = abs(mass) <= 1e-3 * l1 and prof.params.A < 0 and prof.sign_changes() >= 1
    record(8, "zero mass and sign change at p=2", ok,
           f"|int f|/int|f| = {abs(mass) / l1:.1e}, A = {prof.params.A:.4f}, "
           f"{prof.sign_changes()} sign change(s)")


# ------------------------------------------------------------------ steady


@pytest.mark.xfail(
    strict=True,
    reason="nu_k = k^2 - gamma/k^2 on (0, pi) gives count 1 at both gamma = 1 and gamma = 10, "
    "so the required strict growth along the decades cannot hold",
)
def test_criterion_09_census():
    gammas = (1, 10, 100, 1e3, 1e4)
    counts = [category_census(g, math.pi).count for g in gammas]
    c1, c20 = category_census(1.0, math.pi).count, category_census(20.0, math.pi).count
    exact = c1 == 1 and c20 == 2
    strict = all(b > a for a, b in zip(counts, counts[1:]))
    detail = f"count(1) = {c1}, count(20) = {c20}, counts along decades {counts}"
    if exact and not strict:
        detail += " (exact counts hold; strict growth fails between gamma = 1 and 10, see ledger)"
    record(9, "census exactness and divergence", exact and strict, detail)


def test_criterion_10_steady_identities():
    cases = [(math.pi, 3.0, 0.0, 1), (math.pi, 3.0, 0.9 * 16, 2), (math.pi, 3.0, 0.9 * 81, 3),
             (2.0, 2.0, 1.0, 1), (2.0, 5.0, 3.0, 1), (math.pi, 1.5, 0.5, 1)]
    worst = 0.0
    for L, p, gamma, k in cases:
        cfg = EllipticConfig(L=L, p=p, gamma=gamma)
        seed = fibering_seed(
            Field.from_function(cfg.grid, lambda x: np.sin(k * math.pi * x / L)), gamma, p
        )
        s = solve_steady(cfg, seed)
        d, h, lp = identity_terms(s.u, gamma, p)
        scale = d + abs(gamma) * h + lp
        worst = max(
            worst,
            abs(d - gamma * h - lp) / scale,
            abs(fibering_map(s.u, gamma, p, [1.0]).derivative(1.0)) / scale,
            abs(s.F_value - (0.5 - 1 / (p + 1)) * lp) / scale,
        )
    lam1 = positive_solution_threshold(math.pi)
    positives = 0
    for gamma in (1.5 * lam1, 5.0, 20.0, 100.0):
        cfg = EllipticConfig(L=math.pi, p=3.0, gamma=gamma)
        for amp in (0.5, 2.0, 5.0):
            seed = Field.from_function(cfg.grid, lambda x: amp * np.sin(x))
            try:
                positives += solve_steady(cfg, seed).is_positive
            except (TrivialLimit, NotConverged):
                pass
    ok = worst <= 1e-8 and positives == 0
    record(10, "steady-state identities", ok,
           f"{len(cases)} states, worst relative identity error {worst:.1e}; "
           f"{positives} positive solutions from 12 positive seeds above lambda_1")


# ---------------------------------------------------------------- patterns


def test_criterion_11_hardy_saturation():
    worst, doubles = 0.0, 0
    for N in range(11, 31):
        p = joseph_lundgren_exponent(N)
        s = singular_state(p, N)
        worst = max(worst, abs(p * s.D - (N - 2) ** 2 / 4))
        r = characteristic_roots(hardy_criterion(p, N).c_H, N)
        doubles += r.double_root and r.gamma_plus == -(N - 2) / 2
    record(11, "Hardy/JL saturation", worst <= 1e-9 and doubles == 20,
           f"max |p_JL D - c_H| = {worst:.1e}, double roots {doubles}/20")


def test_criterion_12_loewner_nirenberg():
    xi = np.geomspace(1e-3, 1e3, 600)
    worst = max(loewner_nirenberg_residual(xi, d, N) for N in (3, 4, 5) for d in (0.5, 1.0, 2.0))
    record(12, "Loewner-Nirenberg residual", worst <= 1e-8, f"max relative residual {worst:.1e}")


def test_criterion_13_exponent_catalog():
    jl = exponent_report(12).p_JL
    formula = 1 + 4 / (8 - 2 * math.sqrt(11))
    checks = {
        "p0(1)=3": fujita_exponent(1) == 3.0,
        "p_S(3)=5": sobolev_exponent(3) == 5.0,
        "p_N(3)=3": serrin_exponent(3) == 3.0,
        "p*(2,3)=9": exponent_report(3, alpha=2.0).p_star_alpha == 9.0,
        "p_JL(12)": abs(jl - formula) <= 1e-3 and abs(jl - 3.9266) <= 1e-3,
    }
    failed = [k for k, v in checks.items() if not v]
    record(13, "exponent catalog", not failed,
           f"p_JL(12) = {jl:.6f}" + (f"; failed {failed}" if failed else "; spot values exact"))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
