"""Similarity variables and the scaling-exponent algebra of the global-existence argument.

Blow-up solutions are compared with ``u(x,t) = (T-t)^{-1/(2(p-1))} f(x/(T-t)^{1/4})``.
:func:`to_similarity` inverts that map on sampled data, :func:`extract_profile`
applies it to the last snapshots of a blow-up run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .core import ContractViolation, Field, Grid
from .simulate import SimResult

__all__ = [
    "ScalingReport",
    "Rescaled",
    "ExtractedProfile",
    "NotEnoughData",
    "scaling_exponents",
    "to_similarity",
    "extract_profile",
    "mass_law_exponent",
]


class NotEnoughData(ValueError):
    """Too few snapshots to rescale and certify convergence."""


@dataclass(frozen=True)
class ScalingReport:
    """Exponents of the rescaling ``u_k(x,t) = C_k^{-1} u(a_k x, b_k t)``.

    ``gamma1`` governs ``delta_k = C_k^{gamma1}`` under the Sobolev rule
    ``a_k = C_k^{-2/(N-2)}`` and ``gamma2`` under the ``L^{p+1}`` rule
    ``a_k = C_k^{-(p+1)/(alpha+N)}``.  ``gamma1`` is ``None`` when the
    Sobolev rule is undefined (``N <= 2``).
    """

    p: float
    N: int
    alpha: float
    a_k_rule: str
    gamma1: float | None
    gamma2: float
    p_star: float
    p_star_alpha: float
    delta_behavior: str


def _classify(g: float, tol: float = 1e-12) -> str:
    if g < -tol:
        return "vanishes"
    if g > tol:
        return "grows"
    return "unit"


def scaling_exponents(p: float, N: int, alpha: float = 0.0, rule: str | None = None) -> ScalingReport:
    """Exponents ``gamma1``, ``gamma2`` and the ranges ``p*``, ``p*(alpha)``.

    ``gamma1 = p - 1 - 2(alpha+2)/(N-2)`` (``4/(N-2)`` at ``alpha = 0``) and
    ``gamma2 = p - 1 - (p+1)(alpha+2)/(alpha+N)``; both vanish at ``p = p*(alpha)``.
    The default rule is ``sobolev`` for ``N >= 3`` and ``lp1`` otherwise;
    ``delta_behavior`` is classified from the exponent of the chosen rule.
    """
    if not p > 1:
        raise ContractViolation("p must exceed 1")
    if N < 1 or int(N) != N:
        raise ContractViolation("N must be a positive integer")
    if alpha < 0:
        raise ContractViolation("alpha must be non-negative")
    if rule is None:
        rule = "sobolev" if N >= 3 else "lp1"
    if rule not in ("sobolev", "lp1"):
        raise ContractViolation(f"unknown rule {rule!r}")
    if N >= 3:
        gamma1 = p - 1.0 - 2.0 * (alpha + 2.0) / (N - 2.0)
        p_star = 1.0 + 4.0 / (N - 2.0)
        p_star_alpha = 1.0 + 2.0 * (alpha + 2.0) / (N - 2.0)
    else:
        gamma1 = None
        p_star = p_star_alpha = math.inf
    gamma2 = p - 1.0 - (p + 1.0) * (alpha + 2.0) / (alpha + N)
    governing = gamma1 if (rule == "sobolev" and gamma1 is not None) else gamma2
    return ScalingReport(
        p=p,
        N=int(N),
        alpha=alpha,
        a_k_rule=rule,
        gamma1=gamma1,
        gamma2=gamma2,
        p_star=p_star,
        p_star_alpha=p_star_alpha,
        delta_behavior=_classify(governing),
    )


def mass_law_exponent(p: float, N: int) -> float:
    """Exponent ``N(p - p0)/(4(p-1))`` of ``int u_S dx ~ (T-t)^{...}``; zero at ``p0 = 1+2/N``."""
    return N * (p - (1.0 + 2.0 / N)) / (4.0 * (p - 1.0))


@dataclass(frozen=True)
class Rescaled:
    """A rescaled profile on ``y_grid``; ``valid`` marks points inside the data range.

    Points outside the observed range are never extrapolated; their
    values are set to zero and flagged ``False``.
    """

    field: Field
    valid: np.ndarray

    @property
    def y(self) -> np.ndarray:
        return self.field.grid.nodes

    def valid_values(self):
        return self.y[self.valid], self.field.values[self.valid]


def _support_samples(u: Field):
    g = u.grid
    x = g.nodes
    v = u.values
    if g.geometry == "line" and g.bc == "navier":
        x = np.concatenate([[g.x0], x, [g.x0 + g.length]])
        v = np.concatenate([[0.0], v, [0.0]])
    return x, v


def to_similarity(u: Field, p: float, T: float, t: float, y_grid: Grid) -> Rescaled:
    """``v(y) = (T-t)^{1/(2(p-1))} u(y (T-t)^{1/4})`` by cubic interpolation."""
    if not t < T:
        raise ContractViolation(f"need t < T, got t={t}, T={T}")
    if not p > 1:
        raise ContractViolation("p must exceed 1")
    tau = T - t
    ell = tau**0.25
    amp = tau ** (1.0 / (2.0 * (p - 1.0)))
    x, v = _support_samples(u)
    y = y_grid.nodes
    xq = y * ell
    valid = (xq >= x[0]) & (xq <= x[-1])
    out = np.zeros(y.size)
    if np.any(valid):
        out[valid] = amp * CubicSpline(x, v)(xq[valid])
    return Rescaled(Field(y_grid, out), valid)


@dataclass(frozen=True)
class ExtractedProfile:
    """Rescaled final snapshot of a blow-up run with its convergence certificate."""

    f: Rescaled
    convergence_gap: float
    T_est: float
    p: float
    times: tuple[float, ...]


def extract_profile(
    result: SimResult,
    p: float,
    y_grid: Grid | None = None,
    n_snapshots: int = 3,
) -> ExtractedProfile:
    """Rescale the last snapshots of a blow-up run with ``T_est``.

    ``convergence_gap`` is the sup-difference between the last two rescaled
    snapshots over the points valid for both.  The default ``y_grid`` covers
    ``[-10, 10)`` with 400 points.

    Raises
    ------
    NotEnoughData
        If the run did not blow up or fewer than ``n_snapshots`` snapshots
        fall inside the fitted window.
    """
    if result.status != "blowup" or result.T_est is None:
        raise NotEnoughData("extraction needs a run with status 'blowup'")
    if n_snapshots < 3:
        raise ContractViolation("at least 3 snapshots are required")
    start = result.metadata.get("fit_window_start")
    snaps = [
        (t, u) for t, u in result.snapshots if t > 0 and (start is None or t >= start)
    ]
    if len(snaps) < n_snapshots:
        raise NotEnoughData(
            f"{len(snaps)} snapshot(s) in the fitted window, need {n_snapshots}"
        )
    if y_grid is None:
        y_grid = Grid.line(20.0, 400, "periodic", x0=-10.0)
    T = result.T_est
    rescaled = [to_similarity(u, p, T, t, y_grid) for t, u in snaps[-n_snapshots:]]
    a, b = rescaled[-2], rescaled[-1]
    both = a.valid & b.valid
    gap = float(np.max(np.abs(a.field.values[both] - b.field.values[both]))) if both.any() else math.inf
    return ExtractedProfile(
        f=b,
        convergence_gap=gap,
        T_est=T,
        p=p,
        times=tuple(t for t, _ in snaps[-n_snapshots:]),
    )
