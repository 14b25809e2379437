"""Critical exponents, explicit steady states and Type-II rate formulas.

Every function is a closed form guarded by its validity range: an
out-of-range call raises :class:`~cahnblow.core.ContractViolation` (or sets
an explicit flag) instead of returning a meaningless number.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import ContractViolation, Field, integrate, laplacian

__all__ = [
    "ExponentReport",
    "SingularState",
    "HardyReport",
    "CharacteristicRoots",
    "TypeIIRate",
    "FinalExponent",
    "PerturbationBound",
    "fujita_exponent",
    "sobolev_exponent",
    "serrin_exponent",
    "joseph_lundgren_exponent",
    "exponent_report",
    "loewner_nirenberg",
    "loewner_nirenberg_derivatives",
    "loewner_nirenberg_residual",
    "singular_state",
    "hardy_criterion",
    "characteristic_roots",
    "blowup_rate",
    "final_profile_exponent",
    "perturbation_bound_check",
]


def _check_dim(N, minimum=1):
    if int(N) != N or N < minimum:
        raise ContractViolation(f"N must be an integer >= {minimum}, got {N}")
    return int(N)


# ---------------------------------------------------------------- exponents


def fujita_exponent(N: int) -> float:
    """``p0 = 1 + 2/N``."""
    N = _check_dim(N)
    return 1.0 + 2.0 / N


def sobolev_exponent(N: int) -> float:
    """``p_S = (N+2)/(N-2)`` for ``N >= 3``."""
    N = _check_dim(N, 3)
    return (N + 2.0) / (N - 2.0)


def serrin_exponent(N: int) -> float:
    """``p_N = N/(N-2)`` for ``N >= 3``; singular steady states exist for ``p > p_N``."""
    N = _check_dim(N, 3)
    return N / (N - 2.0)


def joseph_lundgren_exponent(N: int) -> float:
    """``p_JL = 1 + 4/(N - 4 - 2 sqrt(N-1))`` for ``N >= 11``."""
    N = _check_dim(N, 11)
    return 1.0 + 4.0 / (N - 4.0 - 2.0 * math.sqrt(N - 1.0))


@dataclass(frozen=True)
class ExponentReport:
    """Critical exponents for dimension ``N`` and weight exponent ``alpha``.

    Exponents outside their validity range are ``math.inf`` (for the
    ``N <= 2`` Sobolev-type values) or ``None``; ``undefined`` explains each.
    """

    N: int
    alpha: float
    p0: float
    p1: float
    p_sobolev: float
    p_star: float
    p_star_alpha: float
    p_N: float | None
    p_JL: float | None
    undefined: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "alpha": self.alpha,
            "p0": self.p0,
            "p1": self.p1,
            "p_sobolev": self.p_sobolev,
            "p_star": self.p_star,
            "p_star_alpha": self.p_star_alpha,
            "p_N": self.p_N,
            "p_JL": self.p_JL,
            "undefined": dict(self.undefined),
        }


def exponent_report(N: int, alpha: float = 0.0) -> ExponentReport:
    """All critical exponents defined for ``(N, alpha)``.

    ``p* = 1 + 4/(N-2)`` and ``p*(alpha) = 1 + 2(alpha+2)/(N-2)`` are
    infinite for ``N = 1, 2``.
    """
    N = _check_dim(N)
    if alpha < 0:
        raise ContractViolation("alpha must be non-negative")
    undefined = {}
    if N >= 3:
        p_s = sobolev_exponent(N)
        p_star = 1.0 + 4.0 / (N - 2.0)
        p_star_alpha = 1.0 + 2.0 * (alpha + 2.0) / (N - 2.0)
        p_n = serrin_exponent(N)
    else:
        p_s = p_star = p_star_alpha = math.inf
        p_n = None
        undefined["p_sobolev"] = "infinite for N <= 2"
        undefined["p_N"] = "needs N >= 3"
    if N >= 11:
        p_jl = joseph_lundgren_exponent(N)
    else:
        p_jl = None
        undefined["p_JL"] = "needs N >= 11"
    return ExponentReport(
        N=N,
        alpha=float(alpha),
        p0=fujita_exponent(N),
        p1=1.0 + 2.0 / (N + 1.0),
        p_sobolev=p_s,
        p_star=p_star,
        p_star_alpha=p_star_alpha,
        p_N=p_n,
        p_JL=p_jl,
        undefined=undefined,
    )


# ------------------------------------------------- Loewner-Nirenberg states


def _ln_constants(d: float, N: int):
    N = _check_dim(N, 3)
    if not d > 0:
        raise ContractViolation("d must be positive")
    a = N * (N - 2.0)
    b = d ** (4.0 / (N - 2.0))
    return N, a, b, (N - 2.0) / 2.0


def loewner_nirenberg(xi, d: float, N: int):
    """``W0(xi) = d [N(N-2)/(N(N-2) + d^{4/(N-2)} xi^2)]^{(N-2)/2}``, with ``W0(0) = d``."""
    N, a, b, k = _ln_constants(d, N)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise ContractViolation("xi must be non-negative")
    out = d * (a / (a + b * xi * xi)) ** k
    return float(out) if out.ndim == 0 else out


def loewner_nirenberg_derivatives(xi, d: float, N: int):
    """``(W0, W0', W0'')`` in the radial variable, by the chain rule."""
    N, a, b, k = _ln_constants(d, N)
    xi = np.asarray(xi, dtype=float)
    s = a + b * xi * xi
    w = d * a**k * s ** (-k)
    w1 = -2.0 * k * b * xi * d * a**k * s ** (-k - 1.0)
    w2 = -2.0 * k * b * d * a**k * (s ** (-k - 1.0) - 2.0 * (k + 1.0) * b * xi * xi * s ** (-k - 2.0))
    return w, w1, w2


def loewner_nirenberg_residual(xi, d: float, N: int) -> float:
    """Max relative residual of ``W'' + (N-1) W'/xi + W^{p_S}`` at positive radii ``xi``."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0):
        raise ContractViolation("residual radii must be positive")
    w, w1, w2 = loewner_nirenberg_derivatives(xi, d, N)
    source = w ** sobolev_exponent(N)
    res = w2 + (N - 1.0) * w1 / xi + source
    scale = np.abs(w2) + np.abs((N - 1.0) * w1 / xi) + np.abs(source)
    return float(np.max(np.abs(res) / scale))


# ------------------------------------------------------ singular states


@dataclass(frozen=True)
class SingularState:
    """``U(y) = C_star |y|^{-mu}`` solving ``Delta U + U^p = 0`` away from 0."""

    p: float
    N: int
    mu: float
    D: float
    C_star: float
    c: float

    def __call__(self, y):
        return self.C_star * np.abs(np.asarray(y, dtype=float)) ** (-self.mu)

    def residual(self, r) -> float:
        """Max relative residual of the radial equation at radii ``r > 0``."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ContractViolation("radii must be positive")
        u = self(r)
        u1 = -self.mu * u / r
        u2 = self.mu * (self.mu + 1.0) * u / r**2
        source = u**self.p
        res = u2 + (self.N - 1.0) * u1 / r + source
        scale = np.abs(u2) + np.abs((self.N - 1.0) * u1 / r) + source
        return float(np.max(np.abs(res) / scale))


def singular_state(p: float, N: int) -> SingularState:
    """Constants of the radial singular steady state.

    ``mu = 2/(p-1)``, ``D = mu (N - 2 - mu)``, ``C_star = D^{1/(p-1)}`` and
    ``c = p D`` (the inverse-square potential coefficient).  Requires
    ``p > p_N = N/(N-2)``, which is exactly ``D > 0``.
    """
    N = _check_dim(N, 3)
    if not p > 1:
        raise ContractViolation("p must exceed 1")
    mu = 2.0 / (p - 1.0)
    D = mu * (N - 2.0 - mu)
    if not D > 0:
        raise ContractViolation(f"singular state needs p > p_N = {serrin_exponent(N)} (D = {D})")
    return SingularState(p=float(p), N=N, mu=mu, D=D, C_star=D ** (1.0 / (p - 1.0)), c=p * D)


@dataclass(frozen=True)
class HardyReport:
    c: float
    c_H: float
    satisfied: bool
    p_JL: float | None


def hardy_criterion(p: float, N: int) -> HardyReport:
    """Compare ``c = p D`` with the Hardy constant ``c_H = (N-2)^2/4``.

    ``satisfied`` is ``c <= c_H``; ``p_JL`` is reported when ``N >= 11``.
    """
    s = singular_state(p, N)
    c_h = (N - 2.0) ** 2 / 4.0
    return HardyReport(
        c=s.c,
        c_H=c_h,
        satisfied=bool(s.c <= c_h * (1.0 + 1e-12)),
        p_JL=joseph_lundgren_exponent(N) if N >= 11 else None,
    )


@dataclass(frozen=True)
class CharacteristicRoots:
    """Roots of ``(g-2)(g-3)(g^2 + (N-2) g + c)``."""

    roots: tuple
    gamma_plus: complex | float
    gamma_minus: complex | float
    double_root: bool
    complex_pair: bool


def characteristic_roots(c: float, N: int, tol: float = 1e-12) -> CharacteristicRoots:
    """``gamma_pm = -(N-2)/2 +/- sqrt((N-2)^2/4 - c)``.

    The discriminant is treated as zero when it is within ``tol`` of zero
    relative to ``(N-2)^2/4``; then the double root ``-(N-2)/2`` is returned.
    """
    N = _check_dim(N)
    half = (N - 2.0) / 2.0
    disc = half * half - c
    scale = max(1.0, half * half)
    if abs(disc) <= tol * scale:
        gp = gm = -half
        double, cplx = True, False
    elif disc > 0:
        root = math.sqrt(disc)
        gp, gm = -half + root, -half - root
        double, cplx = False, False
    else:
        root = cmath.sqrt(disc)
        gp, gm = -half + root, -half - root
        double, cplx = False, True
    return CharacteristicRoots(
        roots=(2.0, 3.0, gp, gm),
        gamma_plus=gp,
        gamma_minus=gm,
        double_root=double,
        complex_pair=cplx,
    )


# -------------------------------------------------------- Type-II rates


@dataclass(frozen=True)
class TypeIIRate:
    rho: float
    mu_region2: float
    s_law: str


def blowup_rate(lambda_hat: float, p: float, N: int) -> TypeIIRate:
    """``rho = 4|lambda_hat|/((N-2)(p - p_S))`` and ``mu_region2 = (p-1) rho/2``.

    ``s_law`` is the Region-II time variable ``s = exp((p-1) rho tau)/((p-1) rho)``.
    """
    N = _check_dim(N, 3)
    if not lambda_hat < 0:
        raise ContractViolation("lambda_hat must be negative")
    ps = sobolev_exponent(N)
    if not p > ps:
        raise ContractViolation(f"blow-up rate needs p > p_S = {ps}")
    rho = 4.0 * abs(lambda_hat) / ((N - 2.0) * (p - ps))
    k = (p - 1.0) * rho
    return TypeIIRate(rho=rho, mu_region2=k / 2.0, s_law=f"s = exp({k!r} tau) / {k!r}")


@dataclass(frozen=True)
class FinalExponent:
    gamma: float
    below_inverse: bool  # gamma < 1/(p-1)
    inverse_below_one: bool  # 1/(p-1) < 1


def final_profile_exponent(p: float, N: int) -> FinalExponent:
    """``gamma = 2/(N(p-1))`` of the final-time singularity ``|x|^{-gamma}``."""
    N = _check_dim(N)
    if not p > 1:
        raise ContractViolation("p must exceed 1")
    g = 2.0 / (N * (p - 1.0))
    inv = 1.0 / (p - 1.0)
    return FinalExponent(gamma=g, below_inverse=g < inv, inverse_below_one=inv < 1.0)


# ------------------------------------------------- perturbation estimate


@dataclass(frozen=True)
class PerturbationBound:
    """``lhs = ||c Delta(|y|^{-2} u)||`` and ``rhs_bound = |c| ||u||_{W^{2,2}}``.

    ``constant`` is their ratio, the empirical ``K`` of the bound.
    """

    lhs: float
    rhs_bound: float

    @property
    def constant(self) -> float:
        return self.lhs / self.rhs_bound if self.rhs_bound > 0 else 0.0


def perturbation_bound_check(u: Field, c: float, N: int | None = None) -> PerturbationBound:
    """Size of the inverse-square perturbation ``c Delta(|y|^{-2} u)`` on a radial field.

    ``u`` must vanish at the origin (supported away from it or of second
    order there) so that ``|y|^{-2} u`` stays bounded.
    """
    g = u.grid
    if g.geometry != "radial":
        raise ContractViolation("perturbation check needs a radial field")
    if N is not None and N != g.dim:
        raise ContractViolation("N must match the grid dimension")
    r = g.nodes
    v = u.values
    scale = max(float(np.max(np.abs(v))), 1e-300)
    if abs(v[0]) > 1e-12 * scale:
        raise ContractViolation("u must vanish at the origin")
    w = np.empty_like(v)
    w[1:] = v[1:] / r[1:] ** 2
    w[0] = 2.0 * w[1] - w[2]
    lap_w = laplacian(u.with_values(w)).values
    lap_u = laplacian(u).values
    lhs = abs(c) * np.sqrt(integrate(lap_w**2, g))
    norm22 = np.sqrt(integrate(v**2, g) + integrate(lap_u**2, g))
    return PerturbationBound(lhs=float(lhs), rhs_bound=float(abs(c) * norm22))
