"""Stationary solutions of the unstable equation on an interval with Navier conditions.

On ``(0, L)`` the steady problem reduces (after one inversion of ``-Delta``) to

    -u'' - gamma (-d^2/dx^2)^{-1} u - |u|^{p-1} u = 0,

the Euler equation of

    F(u) = 1/2 int |u'|^2 - gamma/2 int |(-Delta)^{-1/2} u|^2 - 1/(p+1) int |u|^{p+1}.

Everything is diagonal in the sine basis ``sin(k pi x / L)``, where
``-Delta`` has symbol ``kappa_k^2 = (k pi / L)^2``.  Splitting ``u = r v``
gives the fibering map ``phi_v(r) = r^2 Q(v)/2 - r^{p+1} R(v)/(p+1)`` with
``Q = int |v'|^2 - gamma int |(-Delta)^{-1/2} v|^2`` and ``R = int |v|^{p+1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ContractViolation, Field, Grid, integrate, sine_coefficients, sine_synthesis

__all__ = [
    "EllipticConfig",
    "SteadyState",
    "FiberingCurve",
    "Census",
    "NotConverged",
    "TrivialLimit",
    "NoTurningPoint",
    "biharmonic_eigs",
    "rayleigh_quotient",
    "critical_gamma",
    "positive_solution_threshold",
    "quadratic_form",
    "functional_F",
    "frechet_residual",
    "fibering_map",
    "r_of_v",
    "reduced_functional_G",
    "fibering_seed",
    "solve_steady",
    "category_census",
]

RESIDUAL_TOL = 1e-10


class NotConverged(RuntimeError):
    """Newton did not reach the residual tolerance; ``trace`` holds ``(iteration, residual)``."""

    def __init__(self, msg, trace):
        super().__init__(msg)
        self.trace = trace


class TrivialLimit(RuntimeError):
    """Newton converged to (or collapsed towards) the zero solution."""


class NoTurningPoint(ValueError):
    """The fibering map has no positive critical point (``Q <= 0``)."""


@dataclass(frozen=True)
class EllipticConfig:
    """Problem data on ``(0, L)``; ``modes`` Galerkin modes on ``n`` interior nodes."""

    L: float
    p: float
    gamma: float
    modes: int = 64
    n: int = 255

    def __post_init__(self):
        if not self.L > 0:
            raise ContractViolation(f"L must be positive, got {self.L}")
        if not self.p > 1:
            raise ContractViolation(f"p must exceed 1, got {self.p}")
        if int(self.modes) != self.modes or self.modes < 4:
            raise ContractViolation("modes must be an integer >= 4")
        if self.modes > self.n // 2:
            raise ContractViolation(f"modes={self.modes} exceeds half the grid resolution n={self.n}")

    @property
    def grid(self) -> Grid:
        return Grid.line(self.L, self.n, "navier")


def _kappa2(grid: Grid, count: int | None = None) -> np.ndarray:
    k = np.arange(1, (count or grid.n) + 1)
    return (k * math.pi / grid.length) ** 2


def _parts(u: Field, gamma: float):
    """``int |u'|^2`` and ``int |(-Delta)^{-1/2} u|^2`` by Parseval."""
    c = sine_coefficients(u)
    k2 = _kappa2(u.grid)
    w = u.grid.length / 2.0
    return float(w * np.sum(k2 * c * c)), float(w * np.sum(c * c / k2))


def _lp1(u: Field, p: float) -> float:
    return integrate(np.abs(u.values) ** (p + 1.0), u.grid)


def _check_navier(u: Field):
    g = u.grid
    if g.geometry != "line" or g.bc != "navier":
        raise ContractViolation("steady fields live on a Navier line grid")


# ------------------------------------------------------------ spectrum


def biharmonic_eigs(L: float, count: int) -> list[tuple[float, int]]:
    """``(lambda_k, k)`` with ``lambda_k = (k pi / L)^4``, eigenfunction ``sin(k pi x / L)``."""
    if not L > 0:
        raise ContractViolation("L must be positive")
    if count < 1:
        raise ContractViolation("count must be at least 1")
    return [((k * math.pi / L) ** 4, k) for k in range(1, int(count) + 1)]


def rayleigh_quotient(u: Field) -> float:
    """``int |Delta u|^2 / int u^2`` for a field with Navier conditions."""
    _check_navier(u)
    c = sine_coefficients(u)
    den = float(np.sum(c * c))
    if den == 0.0:
        raise ContractViolation("the Rayleigh quotient of zero is undefined")
    return float(np.sum(_kappa2(u.grid) ** 2 * c * c)) / den


def critical_gamma(p: float, lambda1: float) -> float:
    """``lambda1 p / (p + 1)``, the reciprocal of the constant ``M1 = (p+1)/(p lambda1)``."""
    if not p > 1:
        raise ContractViolation("p must exceed 1")
    return lambda1 * p / (p + 1.0)


def positive_solution_threshold(L: float) -> float:
    """``lambda1 = (pi/L)^4``: no positive solution exists for ``gamma >= lambda1``.

    Testing the equation against ``sin(pi x/L) > 0`` gives
    ``(mu1 - gamma/mu1) int u sin = int |u|^{p-1} u sin``, which is impossible
    for ``u > 0`` once ``nu1 = mu1 - gamma/mu1 <= 0``.
    """
    return biharmonic_eigs(L, 1)[0][0]


# ------------------------------------------------------------ functionals


def quadratic_form(v: Field, gamma: float) -> float:
    """``Q(v) = int |v'|^2 - gamma int |(-Delta)^{-1/2} v|^2``."""
    _check_navier(v)
    d, h = _parts(v, gamma)
    return d - gamma * h


def functional_F(u: Field, gamma: float, p: float) -> float:
    """Euler functional: spectral quadratic part, grid quadrature for ``int |u|^{p+1}``."""
    _check_navier(u)
    d, h = _parts(u, gamma)
    return 0.5 * d - 0.5 * gamma * h - _lp1(u, p) / (p + 1.0)


def _gradient_coefficients(c: np.ndarray, grid: Grid, gamma: float, p: float) -> np.ndarray:
    u = sine_synthesis(grid, c)
    nl = sine_coefficients(u.with_values(np.abs(u.values) ** (p - 1.0) * u.values))
    k2 = _kappa2(grid)
    full = np.zeros(grid.n)
    full[: c.size] = c
    return k2 * full - gamma * full / k2 - nl


def frechet_residual(u: Field, gamma: float, p: float) -> Field:
    """L2 gradient ``g`` of the Euler functional: ``<g, phi> = F'(u) phi``.

    ``g = -u'' - gamma (-Delta)^{-1} u - |u|^{p-1} u``, assembled mode by mode.
    """
    _check_navier(u)
    return sine_synthesis(u.grid, _gradient_coefficients(sine_coefficients(u), u.grid, gamma, p))


# ------------------------------------------------------------ fibering


@dataclass(frozen=True)
class FiberingCurve:
    """``phi_v(r)`` sampled on ``r`` with the integrals that define it."""

    r: np.ndarray
    phi: np.ndarray
    Q: float
    R: float
    p: float
    r1: float | None

    @property
    def shape(self) -> str:
        """``unique_max`` when ``Q > 0``, ``decreasing`` otherwise."""
        return "unique_max" if self.Q > 0 else "decreasing"

    def derivative(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r * self.Q - r**self.p * self.R


def _fibering_integrals(v: Field, gamma: float, p: float):
    R = _lp1(v, p)
    if not R > 0:
        raise ContractViolation("int |v|^{p+1} must be positive")
    return quadratic_form(v, gamma), R


def fibering_map(v: Field, gamma: float, p: float, r_grid) -> FiberingCurve:
    """``phi_v(r) = (r^2/2) Q - (r^{p+1}/(p+1)) R`` on ``r_grid``."""
    Q, R = _fibering_integrals(v, gamma, p)
    r = np.asarray(r_grid, dtype=float)
    phi = 0.5 * r * r * Q - r ** (p + 1.0) * R / (p + 1.0)
    r1 = (Q / R) ** (1.0 / (p - 1.0)) if Q > 0 else None
    return FiberingCurve(r=r, phi=phi, Q=Q, R=R, p=p, r1=r1)


def r_of_v(v: Field, gamma: float, p: float) -> float:
    """Positive critical point ``r = (Q/R)^{1/(p-1)}`` of the fibering map.

    Raises
    ------
    NoTurningPoint
        If ``Q <= 0``.
    """
    Q, R = _fibering_integrals(v, gamma, p)
    if not Q > 0:
        raise NoTurningPoint(f"Q = {Q:.6g} <= 0: the fibering map is decreasing")
    return (Q / R) ** (1.0 / (p - 1.0))


def reduced_functional_G(v: Field, gamma: float, p: float) -> float:
    """``(1/2 - 1/(p+1)) Q^{(p+1)/(p-1)} / R^{2/(p-1)}``, homogeneous of degree zero in ``v``."""
    Q, R = _fibering_integrals(v, gamma, p)
    if not Q > 0:
        raise NoTurningPoint(f"Q = {Q:.6g} <= 0: G is undefined")
    return (0.5 - 1.0 / (p + 1.0)) * Q ** ((p + 1.0) / (p - 1.0)) / R ** (2.0 / (p - 1.0))


def fibering_seed(v: Field, gamma: float, p: float) -> Field:
    """``r(v) v``: the point of the ray through ``v`` where the fibering map peaks."""
    return v.with_values(r_of_v(v, gamma, p) * v.values)


# ------------------------------------------------------------ Newton


@dataclass
class SteadyState:
    """Converged Galerkin solution with its fibering data.

    ``critical_value`` is ``G(u)``, which equals ``F(u)`` at a critical point.
    """

    u: Field
    gamma: float
    p: float
    residual_norm: float
    critical_value: float
    fibering_class: str
    iterations: int = 0
    trace: list = field(default_factory=list)

    @property
    def sign_changes(self) -> int:
        v = self.u.values
        v = v[np.abs(v) > 1e-8 * np.max(np.abs(v))]
        return int(np.count_nonzero(np.diff(np.sign(v)) != 0))

    @property
    def F_value(self) -> float:
        return functional_F(self.u, self.gamma, self.p)

    @property
    def is_positive(self) -> bool:
        return bool(np.all(self.u.values > 0))


def _classify(u: Field, gamma: float) -> str:
    if quadratic_form(u, gamma) <= 0:
        return "none_positive"
    v = u.values
    return "unique_max" if (np.all(v >= 0) or np.all(v <= 0)) else "multi"


def _seed_coefficients(cfg: EllipticConfig, seed: Field) -> np.ndarray:
    _check_navier(seed)
    if not math.isclose(seed.grid.length, cfg.L, rel_tol=1e-12):
        raise ContractViolation("seed lives on an interval of a different length")
    c = sine_coefficients(seed)[: cfg.modes]
    out = np.zeros(cfg.modes)
    out[: c.size] = c
    return out


def solve_steady(
    cfg: EllipticConfig,
    seed: Field,
    tol: float = RESIDUAL_TOL,
    max_iter: int = 60,
) -> SteadyState:
    """Newton on the Galerkin residual in the first ``cfg.modes`` sine modes.

    The Jacobian is ``diag(kappa^2 - gamma/kappa^2) - P[p |u|^{p-1} .]``,
    with ``P`` the sine projection, assembled on the grid.  Steps are
    backtracked until the residual norm decreases.

    Raises
    ------
    ContractViolation
        If the seed is zero or on a foreign grid.
    TrivialLimit
        If the iterate collapses to zero.
    NotConverged
        If the residual stays above ``tol``; ``trace`` lists the history.
    """
    grid = cfg.grid
    M = cfg.modes
    c = _seed_coefficients(cfg, seed)
    scale0 = float(np.linalg.norm(c))
    if scale0 == 0.0:
        raise ContractViolation("the seed must be nonzero")
    x = grid.nodes
    k = np.arange(1, M + 1)
    S = np.sin(np.outer(x, k) * math.pi / cfg.L)
    k2 = _kappa2(grid, M)
    lin = k2 - cfg.gamma / k2
    w = cfg.L / 2.0

    def residual(cc):
        return _gradient_coefficients(cc, grid, cfg.gamma, cfg.p)[:M]

    def norm(r):
        return math.sqrt(w * float(np.dot(r, r)))

    r = residual(c)
    trace = [(0, norm(r))]
    for it in range(1, max_iter + 1):
        if trace[-1][1] <= tol:
            break
        u = S @ c
        weight = cfg.p * np.abs(u) ** (cfg.p - 1.0)
        J = np.diag(lin) - (2.0 / (grid.n + 1)) * (S.T * weight) @ S
        try:
            d = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            d = np.linalg.lstsq(J, -r, rcond=None)[0]
        lam, n0 = 1.0, trace[-1][1]
        while lam > 1e-6:
            cn = c + lam * d
            rn = residual(cn)
            if norm(rn) < n0 or norm(rn) <= tol:
                break
            lam /= 2.0
        else:
            raise NotConverged(f"line search failed at iteration {it} (residual {n0:.3e})", trace)
        c, r = cn, rn
        trace.append((it, norm(r)))
        if np.linalg.norm(c) < 1e-8 * scale0:
            raise TrivialLimit("Newton iterate collapsed to zero")
    if trace[-1][1] > tol:
        raise NotConverged(
            f"residual {trace[-1][1]:.3e} above {tol:.1e} after {max_iter} iterations", trace
        )
    # a tiny iterate has a tiny residual, so convergence alone does not exclude zero
    if np.linalg.norm(c) < 1e-3 * scale0:
        raise TrivialLimit("Newton converged to the zero solution")
    u = sine_synthesis(grid, c)
    return SteadyState(
        u=u,
        gamma=cfg.gamma,
        p=cfg.p,
        residual_norm=trace[-1][1],
        critical_value=reduced_functional_G(u, cfg.gamma, cfg.p),
        fibering_class=_classify(u, cfg.gamma),
        iterations=len(trace) - 1,
        trace=trace,
    )


# ------------------------------------------------------------ census


@dataclass(frozen=True)
class Census:
    """Eigenvalues ``nu_k = mu_k - gamma/mu_k`` (sorted) and ``count = #{nu_k < 1}``."""

    count: int
    nu_values: np.ndarray
    gamma: float
    L: float


def category_census(gamma: float, L: float, max_k: int = 1000) -> Census:
    """Count the eigenvalues below one of ``-Delta - gamma (-Delta)^{-1}`` on ``(0, L)``.

    ``nu_k = 1`` exactly is not counted.

    Raises
    ------
    ContractViolation
        If ``max_k`` modes do not reach ``nu_k >= 1``, so the count would be truncated.
    """
    if not L > 0:
        raise ContractViolation("L must be positive")
    if max_k < 1:
        raise ContractViolation("max_k must be at least 1")
    mu = (np.arange(1, int(max_k) + 1) * math.pi / L) ** 2
    nu = mu - gamma / mu
    # nu_k increases with k once mu_k^2 > -gamma, so the tail decides truncation
    if nu[-1] < 1.0 or (nu.size > 1 and nu[-1] < nu[-2]):
        raise ContractViolation(f"max_k={max_k} is too small to complete the census at gamma={gamma}")
    return Census(count=int(np.count_nonzero(nu < 1.0)), nu_values=np.sort(nu), gamma=gamma, L=L)
