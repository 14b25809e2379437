"""Generalized Hermite eigenfunctions of the rescaled bi-harmonic operator.

For ``B = -Delta^2 + (1/4) y.grad + N/4`` and its adjoint
``B* = -Delta^2 - (1/4) y.grad`` the eigenpairs are indexed by multi-indices
``beta`` with eigenvalue ``-|beta|/4``:

* adjoint eigenfunctions are polynomials,
  ``psi*_beta = (1/sqrt(beta!)) sum_{j>=0} Delta^{2j} y^beta / j!``;
* eigenfunctions of ``B`` are derivatives of the rescaled kernel,
  ``psi_beta = (-1)^|beta| / sqrt(beta!) D^beta F`` with
  ``F(y) = (2 pi)^{-N} int exp(-|xi|^4 + i xi.y) d xi``.

Polynomials are kept in exact rational arithmetic (:class:`fractions.Fraction`);
the ``sqrt(beta!)`` normalizer is carried separately as the integer ``beta!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.integrate import quad, simpson

from .core import ContractViolation, Grid, sphere_area

__all__ = [
    "Poly",
    "MultiIndex",
    "HermiteEigenfunction",
    "KernelSamples",
    "multi_indices",
    "poly_laplacian",
    "poly_euler",
    "apply_adjoint_operator",
    "adjoint_eigenfunction",
    "kernel_derivative",
    "kernel_F",
    "kernel_moment",
    "eigenfunction",
    "biorthonormality_check",
    "laplacian_kernel_at_origin",
    "h_beta",
    "alpha_beta",
    "type2_balance",
]

XI_MAX = 4.0  # exp(-XI_MAX^4) ~ 6.6e-112 bounds the truncated symbol integral

Poly = dict  # exponent tuple -> Fraction


# ---------------------------------------------------------- multi-indices


@dataclass(frozen=True)
class MultiIndex:
    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if not comps or any(c < 0 for c in comps):
            raise ContractViolation("multi-index components must be non-negative, N >= 1")
        object.__setattr__(self, "components", comps)

    @property
    def N(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        return sum(self.components)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(c) for c in self.components)

    def __iter__(self):
        return iter(self.components)


def _as_index(beta) -> MultiIndex:
    if isinstance(beta, MultiIndex):
        return beta
    if isinstance(beta, int):
        return MultiIndex((beta,))
    return MultiIndex(tuple(beta))


def multi_indices(max_order: int, N: int):
    """All multi-indices of length ``N`` with ``|beta| <= max_order``, sorted by order."""
    out = [MultiIndex(b) for b in product(range(max_order + 1), repeat=N) if sum(b) <= max_order]
    return sorted(out, key=lambda b: (b.order, b.components))


# --------------------------------------------------- exact polynomial algebra


def _clean(P: Poly) -> Poly:
    return {e: c for e, c in P.items() if c != 0}


def _add_into(acc: Poly, P: Poly, scale=Fraction(1)) -> None:
    for e, c in P.items():
        acc[e] = acc.get(e, Fraction(0)) + scale * c


def poly_laplacian(P: Poly) -> Poly:
    """Exact Laplacian of a polynomial."""
    out: Poly = {}
    for e, c in P.items():
        for i, k in enumerate(e):
            if k >= 2:
                e2 = e[:i] + (k - 2,) + e[i + 1 :]
                out[e2] = out.get(e2, Fraction(0)) + c * k * (k - 1)
    return _clean(out)


def poly_euler(P: Poly) -> Poly:
    """Exact ``y . grad P`` (each monomial scaled by its degree)."""
    return _clean({e: c * sum(e) for e, c in P.items()})


def apply_adjoint_operator(P: Poly) -> Poly:
    """``(-Delta^2 - (1/4) y.grad) P`` in exact arithmetic."""
    out: Poly = {}
    _add_into(out, poly_laplacian(poly_laplacian(P)), Fraction(-1))
    _add_into(out, poly_euler(P), Fraction(-1, 4))
    return _clean(out)


@dataclass(frozen=True)
class HermiteEigenfunction:
    """``psi*_beta = poly / sqrt(norm_sq)`` with exact rational ``poly``."""

    beta: MultiIndex
    eigenvalue: Fraction
    poly: Poly
    norm_sq: int

    def residual(self) -> Poly:
        """``B* poly - eigenvalue * poly``; the empty dict for an exact eigenfunction."""
        out = dict(apply_adjoint_operator(self.poly))
        _add_into(out, self.poly, -self.eigenvalue)
        return _clean(out)

    def __call__(self, y) -> np.ndarray:
        """Evaluate at points ``y`` of shape ``(..., N)`` (or ``(...,)`` when ``N = 1``)."""
        y = np.asarray(y, dtype=float)
        if self.beta.N == 1 and (y.ndim == 0 or y.shape[-1] != 1):
            y = y[..., None]
        val = np.zeros(y.shape[:-1])
        for e, c in self.poly.items():
            val = val + float(c) * np.prod(y ** np.array(e), axis=-1)
        return val / math.sqrt(self.norm_sq)

    def coefficient_table(self):
        """Sorted ``(exponents, numerator, denominator)`` triples."""
        return [
            (list(e), c.numerator, c.denominator)
            for e, c in sorted(self.poly.items(), key=lambda kv: (-sum(kv[0]), kv[0]))
        ]


def adjoint_eigenfunction(beta) -> HermiteEigenfunction:
    """Exact polynomial eigenfunction of ``B*`` for the multi-index ``beta``."""
    beta = _as_index(beta)
    term: Poly = {beta.components: Fraction(1)}
    poly: Poly = dict(term)
    for j in range(1, beta.order // 4 + 1):
        term = poly_laplacian(poly_laplacian(term))
        _add_into(poly, term, Fraction(1, math.factorial(j)))
        # keep the undivided iterate Delta^{2j} y^beta in `term`
    return HermiteEigenfunction(
        beta=beta,
        eigenvalue=Fraction(-beta.order, 4),
        poly=_clean(poly),
        norm_sq=beta.factorial,
    )


# -------------------------------------------------------------- the kernel


def kernel_derivative(y, m: int = 0) -> np.ndarray:
    """``F^{(m)}(y)`` for ``N = 1``, ``F(y) = (1/pi) int_0^inf exp(-xi^4) cos(xi y) d xi``.

    From the symbol, ``F^{(m)}(y) = (1/pi) int_0^inf xi^m exp(-xi^4) cos(xi y + m pi/2) d xi``;
    each value is an adaptive QUADPACK integral with a cosine/sine weight on
    ``[0, 4]`` (the neglected remainder is below ``1e-100``).
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    cm, sm = round(math.cos(m * math.pi / 2)), round(math.sin(m * math.pi / 2))
    parity = 1.0 if m % 2 == 0 else -1.0
    amp = lambda x: x**m * math.exp(-(x**4))  # noqa: E731
    cache: dict[float, float] = {}
    out = np.empty(y.size)
    for i, yi in enumerate(y):
        a = abs(yi)
        if a not in cache:
            if a == 0.0:
                val = cm * quad(amp, 0.0, XI_MAX, epsabs=1e-15, epsrel=1e-13, limit=200)[0]
            else:
                val = 0.0
                if cm:
                    val += cm * quad(amp, 0.0, XI_MAX, weight="cos", wvar=a, epsabs=1e-14,
                                     epsrel=1e-13, limit=400)[0]
                if sm:
                    val -= sm * quad(amp, 0.0, XI_MAX, weight="sin", wvar=a, epsabs=1e-14,
                                     epsrel=1e-13, limit=400)[0]
            cache[a] = val / math.pi
        out[i] = cache[a] * (parity if yi < 0 else 1.0)
    return out


@dataclass(frozen=True)
class KernelSamples:
    """``table[m]`` holds ``F^{(m)}`` sampled at ``y``."""

    y: np.ndarray
    table: np.ndarray

    @property
    def F(self) -> np.ndarray:
        return self.table[0]

    def derivative(self, m: int) -> np.ndarray:
        return self.table[m]

    def integral(self, m: int = 0) -> float:
        """Simpson integral of ``F^{(m)}`` over the sampled range."""
        return float(simpson(self.table[m], x=self.y))


def kernel_F(y, N: int = 1, orders: int = 4) -> KernelSamples:
    """Sample ``F`` and its derivatives up to ``orders`` on ``y`` (``N = 1``).

    ``y`` is an array of points or a one-dimensional :class:`~cahnblow.core.Grid`,
    in which case its nodes are used.
    """
    if N != 1:
        raise ContractViolation("kernel sampling is implemented for N = 1")
    if isinstance(y, Grid):
        if y.dim != 1:
            raise ContractViolation("kernel sampling needs a one-dimensional grid")
        y = y.nodes
    y = np.asarray(y, dtype=float)
    table = np.array([kernel_derivative(y, m) for m in range(orders + 1)])
    return KernelSamples(y=y, table=table)


def kernel_moment(k: int) -> int:
    """Exact ``int y^k F dy`` (N = 1): ``(-1)^j (4j)!/j!`` for ``k = 4j``, else 0.

    Follows from ``int (-i y)^k F = d^k/dxi^k exp(-xi^4)`` at ``xi = 0``.
    """
    if k < 0:
        raise ContractViolation("moment order must be non-negative")
    if k % 4:
        return 0
    j = k // 4
    return (-1) ** j * math.factorial(4 * j) // math.factorial(j)


def eigenfunction(beta):
    """Callable ``y -> psi_beta(y) = (-1)^|beta|/sqrt(beta!) F^{(beta)}(y)`` (N = 1)."""
    beta = _as_index(beta)
    if beta.N != 1:
        raise ContractViolation("kernel eigenfunctions are implemented for N = 1")
    m = beta.order
    c = (-1) ** m / math.sqrt(beta.factorial)
    return lambda y: c * kernel_derivative(y, m)


def _poly_derivative_1d(P: Poly, m: int) -> Poly:
    out: Poly = {}
    for (k,), c in P.items():
        if k >= m:
            out[(k - m,)] = out.get((k - m,), Fraction(0)) + c * math.perm(k, m)
    return _clean(out)


def biorthonormality_check(
    mu,
    nu,
    method: str = "quadrature",
    y_max: float = 40.0,
    n: int = 4001,
) -> float:
    """Inner product ``<psi_mu, psi*_nu>`` for ``N = 1``.

    ``method='moments'`` integrates by parts onto the exact moments of ``F``;
    ``method='quadrature'`` integrates sampled ``psi_mu`` against ``psi*_nu``
    with Simpson's rule on ``[-y_max, y_max]``.
    """
    mu, nu = _as_index(mu), _as_index(nu)
    if mu.N != 1 or nu.N != 1:
        raise ContractViolation("biorthonormality check is implemented for N = 1")
    if mu.order > 6 or nu.order > 6:
        raise ContractViolation("orders up to 6 are supported")
    star = adjoint_eigenfunction(nu)
    if method == "moments":
        DP = _poly_derivative_1d(star.poly, mu.order)
        total = sum((c * kernel_moment(k) for (k,), c in DP.items()), Fraction(0))
        return float(total) / math.sqrt(mu.factorial * nu.factorial)
    if method != "quadrature":
        raise ContractViolation(f"unknown method {method!r}")
    y = np.linspace(-y_max, y_max, n)
    return float(simpson(eigenfunction(mu)(y) * star(y), x=y))


# --------------------------------------------------------- Type-II numbers


def laplacian_kernel_at_origin(beta) -> float:
    """``(D^beta Delta F)(0)`` for the ``N``-dimensional kernel.

    Equals ``-(2 pi)^{-N} i^|beta| int xi^beta |xi|^2 exp(-|xi|^4) d xi``; the
    integral vanishes unless every component is even and otherwise factors
    into a sphere moment ``2 prod Gamma((b_i+1)/2) / Gamma((|b|+N)/2)`` and
    the radial integral ``Gamma((|b|+N+2)/4)/4``.
    """
    beta = _as_index(beta)
    if any(b % 2 for b in beta):
        return 0.0
    N, k = beta.N, beta.order
    sphere = 2.0 * math.prod(math.gamma((b + 1) / 2.0) for b in beta) / math.gamma((k + N) / 2.0)
    radial = math.gamma((k + N + 2) / 4.0) / 4.0
    sign = (-1) ** (k // 2)
    return -sign * sphere * radial / (2.0 * math.pi) ** N


def h_beta(beta, p: float, N: int, d: float = 1.0) -> float:
    """``h_beta = -e_N (Delta psi_beta)(0)`` with ``e_N = int W0^{p_S}``.

    ``W0`` is the Loewner-Nirenberg solution with ``W0(0) = d``; ``p`` must
    equal the Sobolev exponent ``(N+2)/(N-2)``.
    """
    from .patterns import loewner_nirenberg, sobolev_exponent

    beta = _as_index(beta)
    if N < 3:
        raise ContractViolation("h_beta needs N >= 3")
    if beta.N != N:
        raise ContractViolation("multi-index length must equal N")
    pS = sobolev_exponent(N)
    if abs(p - pS) > 1e-12 * pS:
        raise ContractViolation(f"h_beta is defined at p = p_S = {pS}")
    if not d > 0:
        raise ContractViolation("d must be positive")
    e_N = sphere_area(N) * quad(
        lambda r: r ** (N - 1) * loewner_nirenberg(r, d, N) ** pS, 0.0, np.inf,
        epsabs=0.0, epsrel=1e-12, limit=400,
    )[0]
    lap = (-1) ** beta.order / math.sqrt(beta.factorial) * laplacian_kernel_at_origin(beta)
    return -e_N * lap


def alpha_beta(beta, N: int) -> float:
    """``alpha_beta = (2|beta| + N - 2)/8``."""
    order = _as_index(beta).order
    return (2.0 * order + N - 2.0) / 8.0


def type2_balance(beta, N: int) -> tuple[float, float]:
    """Growth rate of ``phi_beta`` and decay rate of ``c_beta``: ``(alpha_beta, -alpha_beta)``."""
    a = alpha_beta(beta, N)
    return a, -a
