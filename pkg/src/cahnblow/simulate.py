"""Time integration of ``u_t = -Delta^2 u + gamma u +/- Delta(|u|^{p-1} u)``.

The ``stable`` sign is ``+Delta(...)`` (an H^{-1} gradient flow for
``gamma = 0``); the ``unstable`` sign is ``-Delta(...)``, whose solutions can
blow up in finite time.

The scheme is first-order IMEX: the bi-Laplacian is implicit, the growth
term and the nonlinear flux are explicit,

    u_k^{n+1} = [u_k^n + dt (gamma u_k^n -/+ kappa_k^2 N_k(u^n))] / (1 + dt kappa_k^4).

Because the nonlinearity enters through a Laplacian, the zero Fourier mode
(the mass) is untouched when ``gamma = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft
from scipy.optimize import minimize_scalar

from .core import (
    ContractViolation,
    Field,
    Grid,
    NonfiniteField,
    dirichlet_integral,
    integrate,
    wavenumbers,
)

__all__ = [
    "SimConfig",
    "Series",
    "SimResult",
    "BlowupFit",
    "FitUnreliable",
    "step_imex",
    "run",
    "energy",
    "mass",
    "fit_blowup_rate",
]

_SIGNS = ("stable", "unstable")


class FitUnreliable(ValueError):
    """The sup-norm tail does not support a power-law blow-up fit."""


@dataclass(frozen=True)
class SimConfig:
    """Full parameterization of a PDE run.

    ``grow_tol``/``shrink_tol`` are the relative sup-change thresholds of
    the step controller (halve above ``grow_tol``, double below
    ``shrink_tol``).  Blow-up is declared when the sup-norm reaches
    ``blowup_threshold`` while ``dt <= collapse_ratio * dt0``.
    """

    p: float
    gamma: float
    sign: str
    grid: Grid
    dt0: float = 1e-3
    dt_min: float = 1e-16
    t_end: float = 1.0
    blowup_threshold: float = 1e3
    snapshot_stride: int = 10
    grow_tol: float = 0.1
    shrink_tol: float = 0.01
    collapse_ratio: float = 0.25
    nonlinear: bool = True

    def __post_init__(self):
        if not self.p > 1:
            raise ContractViolation(f"p must exceed 1, got {self.p}")
        if self.sign not in _SIGNS:
            raise ContractViolation(f"sign must be one of {_SIGNS}, got {self.sign!r}")
        if not self.grid.is_spectral:
            raise ContractViolation("time stepping needs a navier or periodic line grid")
        if not (0 < self.dt_min < self.dt0):
            raise ContractViolation("need 0 < dt_min < dt0")
        if not self.t_end > 0:
            raise ContractViolation("t_end must be positive")
        if not self.blowup_threshold > 0:
            raise ContractViolation("blow-up threshold must be positive")
        if int(self.snapshot_stride) != self.snapshot_stride or self.snapshot_stride < 1:
            raise ContractViolation("snapshot_stride must be a positive integer")
        if not (0 < self.shrink_tol < self.grow_tol):
            raise ContractViolation("need 0 < shrink_tol < grow_tol")

    @property
    def flux_sign(self) -> float:
        """+1 for the stable flux ``+Delta(N)``, -1 for the unstable one."""
        return 1.0 if self.sign == "stable" else -1.0


@dataclass(frozen=True)
class Series:
    """Diagnostic time series, one entry per accepted step (plus t=0)."""

    t: np.ndarray
    sup: np.ndarray
    energy: np.ndarray
    mass: np.ndarray
    h1: np.ndarray

    def rows(self):
        return zip(self.t, self.sup, self.energy, self.mass, self.h1)

    def __len__(self) -> int:
        return self.t.size


@dataclass(frozen=True)
class BlowupFit:
    """Fit of ``log sup = log K - exponent * log(T_est - t)``."""

    T_est: float
    exponent: float
    K: float
    residual_rms: float


@dataclass
class SimResult:
    status: str
    series: Series
    snapshots: list[tuple[float, Field]]
    T_est: float | None = None
    fit: BlowupFit | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def final(self) -> Field:
        return self.snapshots[-1][1]


def _nonlinearity(u: np.ndarray, p: float) -> np.ndarray:
    return np.abs(u) ** (p - 1.0) * u


def step_imex(u: Field, cfg: SimConfig, dt: float) -> Field:
    """Advance one IMEX step of size ``dt``.

    Raises
    ------
    NonfiniteField
        If the new state contains NaN or Inf.
    """
    if not dt > 0:
        raise ContractViolation("dt must be positive")
    g = u.grid
    k2 = wavenumbers(g) ** 2
    s = cfg.flux_sign
    if g.bc == "navier":
        uh = sfft.dst(u.values, type=1)
        rhs = uh * (1.0 + dt * cfg.gamma)
        if cfg.nonlinear:
            rhs -= dt * s * k2 * sfft.dst(_nonlinearity(u.values, cfg.p), type=1)
        new = sfft.dst(rhs / (1.0 + dt * k2**2), type=1) / (2.0 * (g.n + 1))
    else:
        uh = sfft.rfft(u.values)
        rhs = uh * (1.0 + dt * cfg.gamma)
        if cfg.nonlinear:
            rhs -= dt * s * k2 * sfft.rfft(_nonlinearity(u.values, cfg.p))
        new = sfft.irfft(rhs / (1.0 + dt * k2**2), n=g.n)
    return Field(g, new)


def energy(u: Field, p: float, sign: str = "stable") -> float:
    """Lyapunov energy ``1/2 ||grad u||^2 +/- (1/(p+1)) int |u|^{p+1}``.

    The potential term carries ``+`` for the stable sign and ``-`` for the
    unstable one.
    """
    if sign not in _SIGNS:
        raise ContractViolation(f"sign must be one of {_SIGNS}")
    pot = integrate(np.abs(u.values) ** (p + 1.0), u.grid) / (p + 1.0)
    grad = 0.5 * dirichlet_integral(u)
    return grad + pot if sign == "stable" else grad - pot


def mass(u: Field) -> float:
    """Integral of ``u`` over the domain."""
    return integrate(u)


def _diagnostics(u: Field, cfg: SimConfig):
    v = u.values
    return (
        float(np.max(np.abs(v))),
        energy(u, cfg.p, cfg.sign),
        mass(u),
        math.sqrt(max(dirichlet_integral(u), 0.0)),
    )


def run(cfg: SimConfig, u0: Field) -> SimResult:
    """Integrate from ``u0`` with adaptive steps until ``t_end``, blow-up or failure.

    Steps are rejected and halved when the relative sup-change exceeds
    ``cfg.grow_tol`` and doubled (up to ``dt0``) when it is below
    ``cfg.shrink_tol``.  Blow-up requires both the sup-norm threshold and a
    collapsed step (``dt <= collapse_ratio * dt0``); ``T_est`` then comes
    from :func:`fit_blowup_rate` on the trailing half of the series.
    """
    if u0.grid != cfg.grid:
        raise ContractViolation("initial data must live on cfg.grid")
    sup0 = float(np.max(np.abs(u0.values)))
    if not cfg.blowup_threshold > sup0:
        raise ContractViolation("blow-up threshold must exceed ||u0||_inf")

    u = u0
    t = 0.0
    dt = cfg.dt0
    ts, sups, ens, ms, h1s = [0.0], *([x] for x in _diagnostics(u, cfg))
    snapshots = [(0.0, u)]
    status = "completed"
    accepted = rejected = 0

    while t < cfg.t_end * (1.0 - 1e-14):
        dt_try = min(dt, cfg.t_end - t)
        try:
            un = step_imex(u, cfg, dt_try)
        except NonfiniteField:
            status = "nonfinite"
            break
        scale = max(sups[-1], 1e-300)
        change = float(np.max(np.abs(un.values - u.values))) / scale
        if change > cfg.grow_tol:
            rejected += 1
            dt = dt_try / 2.0
            if dt < cfg.dt_min:
                status = "dt_underflow"
                break
            continue
        u = un
        t += dt_try
        accepted += 1
        for lst, val in zip((sups, ens, ms, h1s), _diagnostics(u, cfg)):
            lst.append(val)
        ts.append(t)
        if accepted % cfg.snapshot_stride == 0:
            snapshots.append((t, u))
        if change < cfg.shrink_tol:
            dt = min(2.0 * dt, cfg.dt0)
        if sups[-1] >= cfg.blowup_threshold and dt <= cfg.collapse_ratio * cfg.dt0:
            status = "blowup"
            break

    if snapshots[-1][0] != ts[-1]:
        snapshots.append((ts[-1], u))
    series = Series(*(np.asarray(a, dtype=float) for a in (ts, sups, ens, ms, h1s)))
    result = SimResult(
        status=status,
        series=series,
        snapshots=snapshots,
        metadata={
            "grow_tol": cfg.grow_tol,
            "shrink_tol": cfg.shrink_tol,
            "collapse_ratio": cfg.collapse_ratio,
            "accepted_steps": accepted,
            "rejected_steps": rejected,
            "final_dt": dt,
        },
    )
    if status == "blowup":
        _attach_blowup_time(result, cfg.p)
    return result


def _attach_blowup_time(result: SimResult, p: float) -> None:
    s = result.series
    start = max(0, min(len(s) // 2, len(s) - 10))
    try:
        fit = fit_blowup_rate(s.t[start:], s.sup[start:])
        result.fit = fit
        result.T_est = fit.T_est
        result.metadata["fit_window_start"] = float(s.t[start])
    except FitUnreliable:
        # local log-derivative: sup ~ (T-t)^(-g) gives d log sup/dt = g/(T-t)
        g = 1.0 / (2.0 * (p - 1.0))
        dlog = (math.log(s.sup[-1]) - math.log(s.sup[-2])) / (s.t[-1] - s.t[-2])
        result.T_est = float(s.t[-1] + g / max(dlog, 1e-300))
        result.metadata["fit_window_start"] = None


def fit_blowup_rate(t, sup) -> BlowupFit:
    """Least-squares fit of ``log sup = log K - exponent * log(T - t)``.

    ``T`` is optimized over ``T > t[-1]``; for each trial ``T`` the pair
    ``(log K, exponent)`` solves a linear least-squares problem, so only a
    one-dimensional search in ``log(T - t[-1])`` remains.

    Raises
    ------
    FitUnreliable
        Fewer than 10 samples, a non-increasing tail or a constant series.
    """
    t = np.asarray(t, dtype=float)
    sup = np.asarray(sup, dtype=float)
    if t.size < 10 or t.size != sup.size:
        raise FitUnreliable("need at least 10 samples")
    if np.any(sup <= 0) or np.any(np.diff(t) <= 0):
        raise FitUnreliable("samples must be positive with increasing times")
    if np.any(np.diff(sup) <= 0):
        raise FitUnreliable("sup-norm tail is not strictly increasing")

    ls = np.log(sup)
    t_last = t[-1]
    span = t_last - t[0]

    def solve_linear(s):
        x = -np.log(t_last + math.exp(s) - t)
        A = np.column_stack([np.ones_like(x), x])
        coef, *_ = np.linalg.lstsq(A, ls, rcond=None)
        r = A @ coef - ls
        return float(r @ r), coef

    lo, hi = math.log(span * 1e-12), math.log(span * 1e3)
    grid = np.linspace(lo, hi, 301)
    vals = [solve_linear(s)[0] for s in grid]
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    opt = minimize_scalar(
        lambda s: solve_linear(s)[0], bounds=(a, b), method="bounded",
        options={"xatol": 1e-12},
    )
    s_best = opt.x if opt.fun <= vals[i] else grid[i]
    ssr, (logk, expo) = solve_linear(s_best)
    if not expo > 0:
        raise FitUnreliable("fitted exponent is not positive")
    return BlowupFit(
        T_est=float(t_last + math.exp(s_best)),
        exponent=float(expo),
        K=float(math.exp(logk)),
        residual_rms=float(math.sqrt(ssr / t.size)),
    )
