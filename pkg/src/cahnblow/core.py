"""Grids, fields, spectral/finite-difference operators and norms.

Three discretizations are supported:

* ``line`` + ``navier``: interior nodes ``x_j = x0 + j h``, ``j = 1..n``,
  ``h = L/(n+1)``.  Functions are expanded in ``sin(k pi (x - x0)/L)``,
  which satisfies ``u = u'' = 0`` at both ends term by term.
* ``line`` + ``periodic``: nodes ``x_j = x0 + j h``, ``j = 0..n-1``,
  ``h = L/n``, Fourier (rfft) representation.
* ``radial``: nodes ``r_j = j h``, ``j = 0..n-1``, ``h = R/(n-1)``, second
  order finite differences for ``f'' + (N-1) f'/r`` with ghost-point
  symmetry at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma as gamma_fn
from math import pi

import numpy as np
from scipy import fft as sfft

__all__ = [
    "ContractViolation",
    "NonInvertible",
    "NonfiniteField",
    "Grid",
    "Field",
    "Norms",
    "sphere_area",
    "wavenumbers",
    "sine_coefficients",
    "sine_synthesis",
    "laplacian",
    "inverse_laplacian",
    "biharmonic",
    "integrate",
    "dirichlet_integral",
    "inner",
    "norms",
]


class ContractViolation(ValueError):
    """An input violates a documented precondition."""


class NonInvertible(ContractViolation):
    """The requested inverse does not exist (e.g. periodic data with nonzero mean)."""


class NonfiniteField(ArithmeticError):
    """A field contains NaN or infinite values."""


_GEOMETRIES = ("line", "radial")
_BCS = ("navier", "periodic", "symmetric")


@dataclass(frozen=True)
class Grid:
    """Spatial discretization of an interval or of a radial half-line.

    Use the constructors :meth:`line` and :meth:`radial` rather than the
    raw dataclass signature.
    """

    geometry: str
    n: int
    bc: str
    length: float
    dim: int = 1
    x0: float = 0.0

    def __post_init__(self):
        if self.geometry not in _GEOMETRIES:
            raise ContractViolation(f"unknown geometry {self.geometry!r}")
        if self.bc not in _BCS:
            raise ContractViolation(f"unknown boundary condition {self.bc!r}")
        if int(self.n) != self.n or self.n < 8:
            raise ContractViolation(f"need at least 8 grid points, got {self.n}")
        if not (np.isfinite(self.length) and self.length > 0):
            raise ContractViolation(f"length must be positive and finite, got {self.length}")
        if self.dim < 1:
            raise ContractViolation(f"dimension must be >= 1, got {self.dim}")
        if self.geometry == "radial" and self.bc != "symmetric":
            raise ContractViolation("radial grids use symmetry conditions at r=0")
        if self.geometry == "line" and self.bc == "symmetric":
            raise ContractViolation("line grids take 'navier' or 'periodic'")

    @classmethod
    def line(cls, L: float, n: int, bc: str = "periodic", x0: float = 0.0) -> "Grid":
        """Interval ``[x0, x0 + L]`` with ``navier`` or ``periodic`` conditions."""
        return cls("line", int(n), bc, float(L), 1, float(x0))

    @classmethod
    def radial(cls, R: float, n: int, N: int = 1) -> "Grid":
        """Radial half-line ``[0, R]`` in dimension ``N`` (``n`` nodes incl. both ends)."""
        return cls("radial", int(n), "symmetric", float(R), int(N), 0.0)

    @property
    def h(self) -> float:
        if self.geometry == "radial":
            return self.length / (self.n - 1)
        if self.bc == "navier":
            return self.length / (self.n + 1)
        return self.length / self.n

    @property
    def nodes(self) -> np.ndarray:
        j = np.arange(self.n, dtype=float)
        if self.geometry == "radial":
            return j * self.h
        if self.bc == "navier":
            return self.x0 + (j + 1.0) * self.h
        return self.x0 + j * self.h

    @property
    def is_spectral(self) -> bool:
        return self.geometry == "line"


@dataclass(frozen=True, eq=False)
class Field:
    """Real samples of a function on a :class:`Grid`.

    The values are copied into a read-only array; NaN/Inf raise
    :class:`NonfiniteField` at construction.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        if v.shape != (self.grid.n,):
            raise ContractViolation(
                f"field has shape {v.shape}, grid expects ({self.grid.n},)"
            )
        if not np.all(np.isfinite(v)):
            raise NonfiniteField("field contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "Field":
        return cls(grid, func(grid.nodes))

    def with_values(self, values) -> "Field":
        return Field(self.grid, values)

    def __len__(self) -> int:
        return self.grid.n


@dataclass(frozen=True)
class Norms:
    """Norm family of a field.

    ``lp1`` is the integral ``int |f|^(p+1)`` (not its root), which is the
    quantity that enters the energy and the fibering functional.
    ``hminus1`` is ``None`` when the inverse Laplacian is unavailable.
    """

    l2: float
    linf: float
    h1_semi: float
    lp1: float
    hminus1: float | None


def sphere_area(N: int) -> float:
    """Surface area of the unit sphere in R^N (2 for N = 1)."""
    return 2.0 * pi ** (N / 2.0) / gamma_fn(N / 2.0)


def wavenumbers(grid: Grid) -> np.ndarray:
    """Mode wavenumbers: ``k pi / L`` (navier, k=1..n) or ``2 pi k / L`` (periodic rfft)."""
    if grid.geometry != "line":
        raise ContractViolation("wavenumbers are defined for line grids only")
    if grid.bc == "navier":
        return np.arange(1, grid.n + 1) * (pi / grid.length)
    return 2.0 * pi * np.arange(grid.n // 2 + 1) / grid.length


def _require_navier(grid: Grid):
    if grid.geometry != "line" or grid.bc != "navier":
        raise ContractViolation("sine transform requires a navier line grid")


def sine_coefficients(f: Field) -> np.ndarray:
    """Coefficients ``c_k`` with ``f(x_j) = sum_k c_k sin(k pi (x_j - x0)/L)``."""
    _require_navier(f.grid)
    return sfft.dst(f.values, type=1) / (f.grid.n + 1)


def sine_synthesis(grid: Grid, coeffs) -> Field:
    """Inverse of :func:`sine_coefficients`; short coefficient lists are zero padded."""
    _require_navier(grid)
    c = np.zeros(grid.n)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size > grid.n:
        raise ContractViolation("more coefficients than grid modes")
    c[: coeffs.size] = coeffs
    return Field(grid, sfft.dst(c, type=1) / 2.0)


def _spectral_multiply(f: Field, symbol) -> np.ndarray:
    """Apply a diagonal multiplier given as a function of the wavenumber array."""
    g = f.grid
    k = wavenumbers(g)
    if g.bc == "navier":
        return sfft.dst(sfft.dst(f.values, type=1) * symbol(k), type=1) / (2.0 * (g.n + 1))
    return sfft.irfft(sfft.rfft(f.values) * symbol(k), n=g.n)


def _radial_laplacian(v: np.ndarray, h: float, N: int) -> np.ndarray:
    n = v.size
    r = np.arange(n) * h
    out = np.empty(n)
    out[0] = 2.0 * N * (v[1] - v[0]) / h**2
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h**2 + (N - 1) * (v[2:] - v[:-2]) / (
        2.0 * h * r[1:-1]
    )
    d2 = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h**2
    d1 = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    out[-1] = d2 + (N - 1) * d1 / r[-1]
    return out


def laplacian(f: Field) -> Field:
    """Laplacian: spectral on line grids, second-order finite differences on radial grids."""
    g = f.grid
    if g.geometry == "radial":
        return Field(g, _radial_laplacian(f.values, g.h, g.dim))
    return Field(g, _spectral_multiply(f, lambda k: -(k**2)))


def biharmonic(f: Field) -> Field:
    """Bi-Laplacian; on line grids the multiplier ``k^4`` is applied in one pass."""
    g = f.grid
    if g.geometry == "radial":
        return laplacian(laplacian(f))
    return Field(g, _spectral_multiply(f, lambda k: k**4))


def inverse_laplacian(f: Field) -> Field:
    """``(-Delta)^{-1} f``: coefficients divided by the squared wavenumber.

    Periodic data must have zero mean (within ``1e-12 ||f||``); the
    zero mode of the result is set to zero.
    """
    g = f.grid
    if g.geometry != "line":
        raise ContractViolation("inverse Laplacian is implemented for line grids")
    if g.bc == "periodic":
        scale = max(np.max(np.abs(f.values)), 1e-300)
        if abs(np.mean(f.values)) > 1e-12 * scale:
            raise NonInvertible("periodic inverse Laplacian needs zero-mean data")

    def symbol(k):
        out = np.zeros_like(k)
        nz = k != 0
        out[nz] = 1.0 / k[nz] ** 2
        return out

    return Field(g, _spectral_multiply(f, symbol))


def _radial_weights(grid: Grid) -> np.ndarray:
    w = np.full(grid.n, grid.h)
    w[0] = w[-1] = grid.h / 2.0
    if grid.dim > 1:
        w *= sphere_area(grid.dim) * grid.nodes ** (grid.dim - 1)
    return w


def integrate(f: Field | np.ndarray, grid: Grid | None = None) -> float:
    """Composite trapezoid integral over the domain.

    Navier grids include the zero boundary values; periodic grids use the
    rectangle rule (exact trapezoid for periodic data); radial grids weight
    by ``|S^{N-1}| r^{N-1}`` (for ``N = 1`` the half-line integral).
    """
    if isinstance(f, Field):
        grid, v = f.grid, f.values
    else:
        v = np.asarray(f, dtype=float)
    if grid.geometry == "radial":
        return float(np.dot(_radial_weights(grid), v))
    return float(grid.h * np.sum(v))


def inner(f: Field, g: Field) -> float:
    """L2 inner product by the grid quadrature."""
    if f.grid != g.grid:
        raise ContractViolation("fields live on different grids")
    return integrate(f.values * g.values, f.grid)


def dirichlet_integral(f: Field) -> float:
    """``int |grad f|^2`` (spectral Parseval on line grids, FD gradient on radial ones)."""
    g = f.grid
    if g.geometry == "radial":
        d = np.gradient(f.values, g.h, edge_order=2)
        d[0] = 0.0
        return integrate(d**2, g)
    k = wavenumbers(g)
    if g.bc == "navier":
        c = sine_coefficients(f)
        return float(0.5 * g.length * np.sum(k**2 * c**2))
    c = sfft.rfft(f.values) / g.n
    w = np.full(k.size, 2.0)
    w[0] = 1.0
    if g.n % 2 == 0:
        w[-1] = 1.0
    return float(g.length * np.sum(w * k**2 * np.abs(c) ** 2))


def _hminus1_sq(f: Field) -> float | None:
    g = f.grid
    if g.geometry == "radial":
        return None
    try:
        return inner(inverse_laplacian(f), f)
    except NonInvertible:
        return None


def norms(f: Field, p: float = 3.0) -> Norms:
    """L2, sup, H1-seminorm, ``int |f|^(p+1)`` and H^{-1} norm of a field."""
    v = f.values
    l2 = np.sqrt(max(integrate(v**2, f.grid), 0.0))
    linf = float(np.max(np.abs(v))) if v.size else 0.0
    h1 = np.sqrt(max(dirichlet_integral(f), 0.0))
    lp1 = integrate(np.abs(v) ** (p + 1.0), f.grid)
    hm = _hminus1_sq(f)
    return Norms(
        l2=float(l2),
        linf=linf,
        h1_semi=float(h1),
        lp1=float(lp1),
        hminus1=None if hm is None else float(np.sqrt(max(hm, 0.0))),
    )
