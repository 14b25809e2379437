"""Command-line front end.

Every subcommand writes a CSV (floats at 17 significant digits) and a JSON
sidecar that embeds the run manifest, so a run can be repeated from its
own output.  Exit codes: 0 success, 2 contract violation or bad input,
3 numerical failure.

Examples
--------
::

    cahnblow exponents --N 3
    cahnblow steady census --gamma 20 --L 3.14159
    cahnblow profile solve --p 2 --out results/
    cahnblow profile solve --config run.cfg --plot
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .core import ContractViolation, Field, Grid

__all__ = ["RunManifest", "ConfigError", "parse_config", "dispatch", "build_parser", "main"]

EXIT_OK, EXIT_CONTRACT, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ContractViolation):
    """A configuration line has an unknown key or a value of the wrong type."""


@dataclass
class RunManifest:
    """Subcommand, resolved parameters, output paths, random seed and tool version."""

    subcommand: str | None = None
    params: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    seed: int = 0
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "params": dict(sorted(self.params.items())),
            "outputs": dict(sorted(self.outputs.items())),
            "seed": self.seed,
            "version": self.version,
        }


@dataclass(frozen=True)
class Option:
    name: str
    type: type
    default: object
    help: str
    choices: tuple | None = None


@dataclass(frozen=True)
class Command:
    name: str
    options: tuple
    run: object
    description: str


# ------------------------------------------------------------------ output


def _fmt(v) -> str:
    if isinstance(v, (str, np.str_)):
        return str(v)
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def _manifest_comment(manifest: RunManifest) -> str:
    return "# manifest " + json.dumps(_jsonable(manifest.to_dict()), sort_keys=True)


def _write_csv(path: Path, manifest: RunManifest, header, columns, preamble=()):
    cols = [np.asarray(c) for c in columns]
    lines = [_manifest_comment(manifest)] + [f"# {line}" for line in preamble]
    lines.append(",".join(header))
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _write_json(path: Path, payload: dict, manifest: RunManifest):
    doc = {"manifest": manifest.to_dict(), **payload}
    path.write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")


class _Outputs:
    """Resolves ``<out>/<prefix>.<ext>`` paths and records them in the manifest."""

    def __init__(self, manifest: RunManifest, default_prefix: str):
        self.manifest = manifest
        prm = manifest.params
        self.dir = Path(prm.get("out") or ".")
        self.prefix = prm.get("prefix") or default_prefix
        self.dir.mkdir(parents=True, exist_ok=True)
        # record every path before anything is written so all sidecars agree
        for ext in ("csv", "json"):
            manifest.outputs[ext] = str(self.dir / f"{self.prefix}.{ext}")

    def path(self, ext: str) -> Path:
        p = self.dir / f"{self.prefix}.{ext}"
        self.manifest.outputs[ext] = str(p)
        return p


def _maybe_plot(prm, kind, csv_path: Path):
    if not prm.get("plot"):
        return
    try:
        from . import plotting
    except ImportError as exc:  # pragma: no cover - depends on the environment
        print(f"warning: plotting unavailable ({exc})", file=sys.stderr)
        return
    try:
        out = plotting.render_csv(kind, csv_path)
    except ImportError as exc:
        print(f"warning: plotting unavailable ({exc})", file=sys.stderr)
        return
    print(f"figure: {out}")


# ------------------------------------------------------------ subcommands


def _initial_data(prm, grid: Grid, seed: int) -> Field:
    x = grid.nodes
    kind = prm["u0"]
    if kind == "gauss":
        return Field(grid, prm["amp"] * np.exp(-((x / prm["width"]) ** 2)))
    if kind == "sine":
        return Field(grid, prm["amp"] * np.sin(2.0 * math.pi * (x - grid.x0) / grid.length))
    # smooth random data: eight lowest modes with decaying random amplitudes
    rng = np.random.default_rng(seed)
    v = np.zeros_like(x)
    for j in range(1, 9):
        a, b = rng.normal(size=2) / j**2
        phase = 2.0 * math.pi * j * (x - grid.x0) / grid.length
        v += a * np.cos(phase) + b * np.sin(phase)
    return Field(grid, prm["amp"] * v / np.max(np.abs(v)))


def _sim_config(prm):
    from .simulate import SimConfig

    x0 = prm["x0"]
    if math.isnan(x0):
        x0 = -prm["L"] / 2.0 if prm["bc"] == "periodic" else 0.0
    grid = Grid.line(prm["L"], prm["n"], prm["bc"], x0=x0)
    cfg = SimConfig(
        p=prm["p"], gamma=prm["gamma"], sign=prm["sign"], grid=grid, dt0=prm["dt0"],
        dt_min=prm["dt_min"], t_end=prm["t_end"], blowup_threshold=prm["M"],
        snapshot_stride=prm["stride"], grow_tol=prm["grow_tol"], shrink_tol=prm["shrink_tol"],
    )
    return cfg, grid


def _run_simulate(m: RunManifest) -> int:
    from .simulate import run

    prm = m.params
    cfg, grid = _sim_config(prm)
    res = run(cfg, _initial_data(prm, grid, m.seed))
    out = _Outputs(m, "simulate")
    snap_path = out.dir / f"{out.prefix}_snapshots.csv"
    m.outputs["snapshots"] = str(snap_path)
    s = res.series
    _write_csv(out.path("csv"), m, ["t", "sup", "energy", "mass", "h1"],
               [s.t, s.sup, s.energy, s.mass, s.h1])
    blocks = [_manifest_comment(m)]
    for t, u in res.snapshots:
        blocks.append(f"# t={_fmt(t)}\nx,u")
        blocks.extend(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(u.grid.nodes, u.values))
    snap_path.write_text("\n".join(blocks) + "\n")
    fit = None
    if res.fit is not None:
        fit = {"T_est": res.fit.T_est, "exponent": res.fit.exponent, "K": res.fit.K,
               "residual_rms": res.fit.residual_rms}
    _write_json(out.path("json"), {"status": res.status, "T_est": res.T_est, "fit": fit,
                                   "steps": len(s.t) - 1}, m)
    print(f"status={res.status} t_last={_fmt(s.t[-1])} sup_last={_fmt(s.sup[-1])}"
          + (f" T_est={_fmt(res.T_est)}" if res.T_est is not None else ""))
    _maybe_plot(prm, "series", out.path("csv"))
    return EXIT_OK


def _profile_outputs(m: RunManifest, prof, default_prefix: str) -> int:
    out = _Outputs(m, default_prefix)
    _write_csv(out.path("csv"), m, ["y", "f", "fp", "fpp", "fppp"],
               [prof.y, prof.f, prof.fp, prof.fpp, prof.fppp])
    par = prof.params
    _write_json(out.path("json"), {
        "p": prof.p, "N": prof.N, "A": par.A, "B": par.B, "C": par.C, "mu": par.mu,
        "residual": list(prof.residual), "mass": prof.mass, "f0": float(prof.f[0]),
        "sign_changes": prof.sign_changes(),
    }, m)
    print(f"A={_fmt(par.A)} C={_fmt(par.C)} f(0)={_fmt(prof.f[0])} "
          f"residual=({_fmt(prof.residual[0])}, {_fmt(prof.residual[1])})")
    _maybe_plot(m.params, "profile", out.path("csv"))
    return EXIT_OK


def _run_profile_shoot(m: RunManifest) -> int:
    from .profiles import profile_mass, shoot, NonIntegrableTail

    prm = m.params
    res = shoot(prm["p"], prm["A"], prm["C"], y_max=prm["y_max"], N=prm["N"], mu=prm["mu"],
                B=prm["B"])
    prof = res.trajectory
    try:
        prof.mass = profile_mass(prof)
    except NonIntegrableTail:
        prof.mass = None
    return _profile_outputs(m, prof, "profile_shoot")


def _run_profile_solve(m: RunManifest) -> int:
    from .profiles import BundleParams, solve_profile

    prm = m.params
    seed = None
    if prm["A"] is not None and prm["C"] is not None and not (math.isnan(prm["A"]) or math.isnan(prm["C"])):
        seed = BundleParams(A=prm["A"], C=prm["C"], p=prm["p"], mu=prm["mu"])
    prof = solve_profile(prm["p"], prm["N"], seed=seed, y_max=prm["y_max"], mu=prm["mu"],
                         tol=prm["tol"])
    return _profile_outputs(m, prof, "profile_solve")


def _run_profile_continue(m: RunManifest) -> int:
    from .profiles import mu_continuation

    prm = m.params
    branch = mu_continuation(prm["p"], prm["N"], steps=prm["steps"], y_max=prm["y_max"],
                             tol=prm["tol"])
    out = _Outputs(m, "profile_continue")
    mus = [mu for mu, _ in branch]
    f0 = [float(pr.f[0]) for _, pr in branch]
    res = [max(abs(r) for r in pr.residual) for _, pr in branch]
    _write_csv(out.path("csv"), m, ["mu", "f0", "max_residual"], [mus, f0, res])
    end = branch[-1][1]
    _write_json(out.path("json"), {
        "p": prm["p"], "N": prm["N"], "steps": len(branch),
        "endpoint": {"A": end.params.A, "C": end.params.C, "f0": float(end.f[0])},
    }, m)
    print(f"branch of {len(branch)} points, endpoint A={_fmt(end.params.A)} C={_fmt(end.params.C)}")
    _maybe_plot(prm, "branch", out.path("csv"))
    return EXIT_OK


def _fraction_pair(q: Fraction):
    return [q.numerator, q.denominator]


def _run_spectral_hermite(m: RunManifest) -> int:
    from .spectral import adjoint_eigenfunction, multi_indices

    prm = m.params
    out = _Outputs(m, "spectral_hermite")
    rows, items = [], []
    for beta in multi_indices(prm["order"], prm["N"]):
        psi = adjoint_eigenfunction(beta)
        comps = list(beta.components)
        terms = [{"powers": list(k), "coefficient": _fraction_pair(c)}
                 for k, c in sorted(psi.poly.items())]
        items.append({"beta": comps, "eigenvalue": _fraction_pair(Fraction(psi.eigenvalue)),
                      "norm_sq": psi.norm_sq, "terms": terms,
                      "identity_residual_zero": not psi.residual()})
        rows.append((beta.order, "-".join(map(str, comps)), len(terms)))
    _write_csv(out.path("csv"), m, ["order", "beta", "terms"],
               [[r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows]])
    _write_json(out.path("json"), {"N": prm["N"], "order": prm["order"], "eigenfunctions": items}, m)
    bad = sum(1 for it in items if not it["identity_residual_zero"])
    print(f"{len(items)} eigenfunctions, exact eigen-identity failures: {bad}")
    return EXIT_OK


def _run_spectral_kernel(m: RunManifest) -> int:
    from .spectral import kernel_F

    prm = m.params
    grid = Grid.line(2.0 * prm["y_max"], prm["n"], "periodic", x0=-prm["y_max"])
    ks = kernel_F(grid, orders=4)
    out = _Outputs(m, "spectral_kernel")
    _write_csv(out.path("csv"), m, ["y", "F", "F1", "F2", "F3", "F4"], [ks.y, *ks.table])
    _write_json(out.path("json"), {"integral_F": ks.integral(0), "y_max": prm["y_max"],
                                   "n": prm["n"]}, m)
    print(f"int F = {_fmt(ks.integral(0))} on [-{prm['y_max']}, {prm['y_max']})")
    _maybe_plot(prm, "kernel", out.path("csv"))
    return EXIT_OK


def _run_spectral_biortho(m: RunManifest) -> int:
    from .spectral import biorthonormality_check, multi_indices

    prm = m.params
    betas = multi_indices(prm["order"], 1)
    gram = np.array([[biorthonormality_check(a, b, method=prm["method"]) for b in betas]
                     for a in betas])
    out = _Outputs(m, "spectral_biortho")
    orders = [b.order for b in betas]
    _write_csv(out.path("csv"), m, ["order", *[f"m{o}" for o in orders]], [orders, *gram.T])
    dev = float(np.max(np.abs(gram - np.eye(len(betas)))))
    _write_json(out.path("json"), {"gram": gram, "max_deviation": dev, "method": prm["method"]}, m)
    print(f"max |G - I| = {_fmt(dev)}")
    return EXIT_OK


def _steady_seed(prm, grid):
    from .steady import fibering_seed

    k = prm["mode"]
    v = Field(grid, np.sin(k * math.pi * grid.nodes / grid.length))
    return v, fibering_seed(v, prm["gamma"], prm["p"])


def _run_steady_solve(m: RunManifest) -> int:
    from .steady import EllipticConfig, solve_steady

    prm = m.params
    cfg = EllipticConfig(prm["L"], prm["p"], prm["gamma"], modes=prm["modes"], n=prm["n"])
    _, seed = _steady_seed(prm, cfg.grid)
    st = solve_steady(cfg, seed)
    out = _Outputs(m, "steady_solve")
    _write_csv(out.path("csv"), m, ["x", "u"], [st.u.grid.nodes, st.u.values])
    _write_json(out.path("json"), {
        "gamma": st.gamma, "p": st.p, "residual": st.residual_norm,
        "critical_value": st.critical_value, "F_value": st.F_value,
        "sign_changes": st.sign_changes, "fibering_class": st.fibering_class,
    }, m)
    print(f"residual={_fmt(st.residual_norm)} F={_fmt(st.F_value)} "
          f"sign_changes={st.sign_changes} class={st.fibering_class}")
    _maybe_plot(prm, "steady", out.path("csv"))
    return EXIT_OK


def _run_steady_census(m: RunManifest) -> int:
    from .steady import category_census

    prm = m.params
    c = category_census(prm["gamma"], prm["L"], max_k=prm["max_k"])
    out = _Outputs(m, "steady_census")
    shown = c.nu_values[: max(c.count + 3, 5)]
    print(f"{'k':>4}  {'nu_k':>24}")
    for k, nu in enumerate(shown, start=1):
        print(f"{k:>4}  {_fmt(nu):>24}")
    print(f"count={c.count}")
    _write_csv(out.path("csv"), m, ["k", "nu"], [np.arange(1, c.nu_values.size + 1), c.nu_values])
    _write_json(out.path("json"), {"gamma": c.gamma, "L": c.L, "count": c.count}, m)
    return EXIT_OK


def _run_steady_fibering(m: RunManifest) -> int:
    from .steady import fibering_map

    prm = m.params
    grid = Grid.line(prm["L"], prm["n"], "navier")
    v, _ = _steady_seed({**prm, "gamma": 0.0}, grid)
    r = np.linspace(0.0, prm["r_max"], prm["n_r"])
    curve = fibering_map(v, prm["gamma"], prm["p"], r)
    out = _Outputs(m, "steady_fibering")
    _write_csv(out.path("csv"), m, ["r", "phi"], [curve.r, curve.phi])
    _write_json(out.path("json"), {"Q": curve.Q, "R": curve.R, "r1": curve.r1,
                                   "shape": curve.shape}, m)
    print(f"Q={_fmt(curve.Q)} R={_fmt(curve.R)} shape={curve.shape}"
          + (f" r1={_fmt(curve.r1)}" if curve.r1 is not None else ""))
    _maybe_plot(prm, "fibering", out.path("csv"))
    return EXIT_OK


def _run_rescale_extract(m: RunManifest) -> int:
    from .rescale import extract_profile
    from .simulate import run

    prm = m.params
    cfg, grid = _sim_config(prm)
    res = run(cfg, _initial_data(prm, grid, m.seed))
    ext = extract_profile(res, prm["p"])
    out = _Outputs(m, "rescale_extract")
    y, f = ext.f.valid_values()
    _write_csv(out.path("csv"), m, ["y", "f"], [y, f])
    _write_json(out.path("json"), {"p": prm["p"], "N": 1, "T_est": ext.T_est,
                                   "convergence_gap": ext.convergence_gap,
                                   "status": res.status}, m)
    print(f"T_est={_fmt(ext.T_est)} convergence_gap={_fmt(ext.convergence_gap)}")
    _maybe_plot(prm, "profile", out.path("csv"))
    return EXIT_OK


def _run_exponents(m: RunManifest) -> int:
    from .patterns import exponent_report

    prm = m.params
    rep = exponent_report(prm["N"], prm["alpha"]).as_dict()
    out = _Outputs(m, "exponents")
    keys = [k for k in rep if k not in ("undefined",)]
    width = max(len(k) for k in keys)
    for k in keys:
        v = rep[k]
        shown = "undefined" if v is None else (_fmt(v) if isinstance(v, (int, float)) else str(v))
        print(f"{k:<{width}}  {shown}")
    _write_csv(out.path("csv"), m, ["name", "value"],
               [keys, [rep[k] if isinstance(rep[k], (int, float)) else math.nan for k in keys]])
    _write_json(out.path("json"), {"report": rep}, m)
    return EXIT_OK


# ------------------------------------------------------------ option tables

_OUT = (
    Option("out", str, ".", "output directory"),
    Option("prefix", str, "", "file prefix; empty means the subcommand name"),
    Option("plot", bool, False, "also render a PNG (needs matplotlib)"),
)
_SIM = (
    Option("p", float, 3.0, "nonlinearity exponent, p > 1"),
    Option("gamma", float, 0.0, "coefficient of the linear term gamma u"),
    Option("sign", str, "unstable", "sign of the flux", ("stable", "unstable")),
    Option("L", float, 8.0, "interval length"),
    Option("n", int, 4096, "grid points"),
    Option("bc", str, "periodic", "boundary conditions", ("periodic", "navier")),
    Option("x0", float, math.nan, "left end (default -L/2 periodic, 0 navier)"),
    Option("u0", str, "gauss", "initial data", ("gauss", "sine", "random")),
    Option("amp", float, 10.0, "sup-norm (random, sine) or peak (gauss) of u0"),
    Option("width", float, 1.0, "Gaussian width of u0"),
    Option("dt0", float, 1e-3, "initial and largest step"),
    Option("dt_min", float, 1e-16, "smallest step before dt_underflow"),
    Option("t_end", float, 1.0, "final time"),
    Option("M", float, 100.0, "blow-up threshold on the sup-norm"),
    Option("stride", int, 10, "keep every stride-th accepted step as a snapshot"),
    Option("grow_tol", float, 0.1, "halve dt above this relative sup change"),
    Option("shrink_tol", float, 0.01, "double dt below this relative sup change"),
    Option("seed", int, 0, "random seed for u0=random"),
)
_PROFILE = (
    Option("p", float, 3.0, "nonlinearity exponent, p > 1"),
    Option("N", int, 1, "space dimension"),
    Option("y_max", float, 15.0, "outer shooting point (>= 10)"),
    Option("mu", float, 0.25, "drift parameter (1/4 for blow-up profiles)"),
)
_TOL = Option("tol", float, 1e-8, "Newton tolerance on max|f'(0)|, |f'''(0)|")


def _with_overrides(opts, **defaults):
    return tuple(
        Option(o.name, o.type, defaults.get(o.name, o.default), o.help, o.choices) for o in opts
    )


COMMANDS = {
    "simulate": Command("simulate", _SIM + _OUT, _run_simulate,
                        "IMEX spectral run of u_t = -D^4 u + gamma u +- D^2(|u|^{p-1}u). "
                        "Blow-up: sup >= M while dt <= dt0/4; T_est from a variable-projection "
                        "fit on the trailing half of the series."),
    "profile shoot": Command("profile shoot", _PROFILE + (
        Option("A", float, 0.0, "algebraic tail amplitude"),
        Option("B", float, 0.0, "second oscillatory amplitude (mu = 0)"),
        Option("C", float, 1.7322824359863074, "exponential tail amplitude"),
    ) + _OUT, _run_profile_shoot,
        "One backward shot from the corrected tail bundle (DOP853, rtol 1e-10, "
        "atol min(1e-14, 1e-10 |state|))."),
    "profile solve": Command("profile solve", _PROFILE + (
        _TOL,
        Option("A", float, math.nan, "seed A (default: tabulated/continued seed)"),
        Option("C", float, math.nan, "seed C"),
    ) + _OUT, _run_profile_solve,
        "Damped Newton on (A, C) (finite-difference step 1e-6(1+|x|), steps capped at "
        "0.25(1+|x|)), nested sweep fallback. ODE: DOP853 rtol 1e-10."),
    "profile continue": Command("profile continue", _PROFILE[:3] + (
        _TOL, Option("steps", int, 11, "grid points in mu from 0 to 1/4"),
    ) + _OUT, _run_profile_continue,
        "Continuation in mu from 0 to 1/4 by collocation (solve_bvp tol = --tol), "
        "endpoint re-solved by shooting."),
    "spectral hermite": Command("spectral hermite", (
        Option("order", int, 4, "largest |beta|"),
        Option("N", int, 1, "space dimension"),
    ) + _OUT, _run_spectral_hermite,
        "Exact rational eigenpolynomials of the adjoint operator, identity checked exactly."),
    "spectral kernel": Command("spectral kernel", (
        Option("y_max", float, 40.0, "half-width of the sample interval"),
        Option("n", int, 1601, "sample points"),
    ) + _OUT, _run_spectral_kernel,
        "Kernel F and four derivatives by weighted QUADPACK on [0, 4] "
        "(epsabs 1e-14, epsrel 1e-13)."),
    "spectral biortho": Command("spectral biortho", (
        Option("order", int, 4, "largest order"),
        Option("method", str, "quadrature", "pairing evaluation", ("quadrature", "moments")),
    ) + _OUT, _run_spectral_biortho,
        "Gram matrix <psi*_mu, psi_nu> for N = 1 (quadrature on [-40, 40], 4001 points, "
        "or exact moments)."),
    "steady solve": Command("steady solve", (
        Option("L", float, math.pi, "interval length"),
        Option("p", float, 3.0, "nonlinearity exponent, p > 1"),
        Option("gamma", float, 0.0, "nonlocal coefficient"),
        Option("modes", int, 64, "Galerkin modes"),
        Option("n", int, 255, "interior grid points"),
        Option("mode", int, 1, "seed sin(k pi x/L) scaled to its fibering maximum"),
    ) + _OUT, _run_steady_solve,
        "Newton on the sine-Galerkin residual, success at residual <= 1e-10 (L2)."),
    "steady census": Command("steady census", (
        Option("gamma", float, 20.0, "nonlocal coefficient"),
        Option("L", float, math.pi, "interval length"),
        Option("max_k", int, 1000, "modes examined"),
    ) + _OUT, _run_steady_census,
        "Exact count of nu_k = mu_k - gamma/mu_k < 1, mu_k = (k pi/L)^2."),
    "steady fibering": Command("steady fibering", (
        Option("L", float, math.pi, "interval length"),
        Option("p", float, 3.0, "nonlinearity exponent, p > 1"),
        Option("gamma", float, 0.0, "nonlocal coefficient"),
        Option("mode", int, 1, "direction v = sin(k pi x/L)"),
        Option("n", int, 255, "interior grid points"),
        Option("r_max", float, 3.0, "largest r"),
        Option("n_r", int, 301, "samples in r"),
    ) + _OUT, _run_steady_fibering,
        "Fibering map phi_v(r) = r^2 Q/2 - r^{p+1} R/(p+1)."),
    "rescale extract": Command("rescale extract", _with_overrides(
        _SIM, n=16384, M=300.0, grow_tol=0.01, shrink_tol=0.001, stride=1,
    ) + _OUT, _run_rescale_extract,
        "Blow-up run followed by similarity rescaling of the last three snapshots "
        "in the fitted window (cubic interpolation, no extrapolation)."),
    "exponents": Command("exponents", (
        Option("N", int, 3, "space dimension"),
        Option("alpha", float, 0.0, "weight exponent"),
    ) + _OUT, _run_exponents,
        "Critical exponents p0, p_S, p*, p*(alpha), p_N, p_JL."),
}

_KEY_TYPES: dict[str, type] = {}
for _cmd in COMMANDS.values():
    for _o in _cmd.options:
        _KEY_TYPES.setdefault(_o.name, _o.type)
_KEY_TYPES["subcommand"] = str


# ------------------------------------------------------------ config


def _convert(raw: str, typ: type):
    if typ is bool:
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError(raw)
    if typ is int:
        return int(raw)
    if typ is float:
        return float(raw)
    return raw


def parse_config(text: str) -> RunManifest:
    """Parse ``key = value`` lines (``#`` comments) into a manifest.

    Values are typed by the key; keys valid for no subcommand are rejected.
    An empty text gives a manifest with no overrides (all defaults).

    Raises
    ------
    ConfigError
        With the offending line number.
    """
    params: dict = {}
    sub = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in _KEY_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            value = _convert(raw, _KEY_TYPES[key])
        except ValueError:
            raise ConfigError(
                f"line {lineno}: {key} expects {_KEY_TYPES[key].__name__}, got {raw!r}"
            ) from None
        if key == "subcommand":
            sub = value
        else:
            params[key] = value
    seed = params.get("seed", 0)
    return RunManifest(subcommand=sub, params=params, seed=seed)


# ------------------------------------------------------------ dispatch


def _numeric_errors():
    from .profiles import ContinuationLost, IntegrationStalled, NoProfileFound
    from .rescale import NotEnoughData
    from .simulate import FitUnreliable
    from .steady import NoTurningPoint, NotConverged, TrivialLimit

    return (ContinuationLost, IntegrationStalled, NoProfileFound, NotEnoughData, FitUnreliable,
            NotConverged, TrivialLimit, NoTurningPoint, ArithmeticError, np.linalg.LinAlgError)


def _resolve(manifest: RunManifest) -> Command:
    cmd = COMMANDS.get(manifest.subcommand or "")
    if cmd is None:
        raise ContractViolation(f"unknown subcommand {manifest.subcommand!r}")
    names = {o.name: o for o in cmd.options}
    unknown = sorted(set(manifest.params) - set(names))
    if unknown:
        raise ConfigError(f"keys not used by '{cmd.name}': {', '.join(unknown)}")
    for o in cmd.options:
        manifest.params.setdefault(o.name, o.default)
        if o.choices and manifest.params[o.name] not in o.choices:
            raise ContractViolation(f"{o.name} must be one of {o.choices}")
    if "seed" in names:
        manifest.seed = int(manifest.params["seed"])
    return cmd


def dispatch(manifest: RunManifest) -> int:
    """Run the manifest's subcommand; returns the exit code (never raises on bad input)."""
    try:
        cmd = _resolve(manifest)
        return cmd.run(manifest)
    except _numeric_errors() as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ContractViolation, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


# ------------------------------------------------------------ argparse


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_options(sub: argparse.ArgumentParser, cmd: Command):
    for o in cmd.options:
        default = "nan" if isinstance(o.default, float) and math.isnan(o.default) else o.default
        if o.type is bool:
            sub.add_argument(_flag(o.name), dest=o.name, action="store_true", default=argparse.SUPPRESS,
                             help=f"{o.help} (default: {default})")
            continue
        sub.add_argument(_flag(o.name), dest=o.name, type=o.type, choices=o.choices,
                         default=argparse.SUPPRESS, metavar=o.name.upper() if not o.choices else None,
                         help=f"{o.help} (default: {default})")
    sub.add_argument("--config", dest="config", default=argparse.SUPPRESS,
                     help="file of 'key = value' lines; flags override it")
    sub.set_defaults(_command=cmd.name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cahnblow",
        description="Blow-up simulation, similarity profiles, Hermite spectra and steady states.",
    )
    parser.add_argument("--version", action="version", version=f"cahnblow {__version__}")
    top = parser.add_subparsers(dest="group", metavar="command")
    groups: dict[str, argparse._SubParsersAction] = {}
    parser.group_parsers = {}
    for name, cmd in COMMANDS.items():
        parts = name.split()
        if len(parts) == 1:
            sub = top.add_parser(parts[0], help=cmd.description.split(".")[0],
                                 description=cmd.description)
        else:
            if parts[0] not in groups:
                grp = top.add_parser(parts[0], help=f"{parts[0]} subcommands")
                parser.group_parsers[parts[0]] = grp
                groups[parts[0]] = grp.add_subparsers(dest="action", metavar="action")
            sub = groups[parts[0]].add_parser(parts[1], help=cmd.description.split(".")[0],
                                              description=cmd.description)
        _add_options(sub, cmd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args = vars(ns)
    name = args.pop("_command", None)
    group = args.pop("group", None)
    args.pop("action", None)
    if name is None:
        parser.group_parsers.get(group, parser).print_help()
        return EXIT_CONTRACT
    manifest = RunManifest(subcommand=name)
    try:
        cfg_path = args.pop("config", None)
        if cfg_path is not None:
            base = parse_config(Path(cfg_path).read_text())
            if base.subcommand not in (None, name):
                raise ConfigError(f"config is for '{base.subcommand}', not '{name}'")
            manifest.params.update(base.params)
    except (ContractViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    manifest.params.update(args)
    return dispatch(manifest)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
