"""Space-time grids and discrete calculus for fields on a periodic box.

Fields live on a uniform spatial grid over [x_min, x_max) (the right
endpoint is identified with the left one and excluded) crossed with
n_t + 1 uniform time nodes covering the unit interval. Two flavours of
spatial derivative coexist on purpose:

* ``spectral_gradient`` differentiates through the FFT and is accurate
  to machine precision, but only for fields that decay below the grid's
  boundary tolerance at the box edges. It refuses anything else by
  raising :class:`BoundaryLeak`.
* ``fd_gradient`` uses second order finite differences with one sided
  stencils at the edges. It has no decay requirement and is exact on
  quadratic profiles, which makes it the right tool for phases and log
  densities of Gaussian type fields. Those grow like x^2 and would be
  destroyed by a periodic transform.

Quadrature over the box is the plain rectangle rule (it is spectrally
accurate for smooth decaying integrands on a periodic grid) and carries
the same decay guard. Time quadrature is the trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BoundaryLeak, Unsupported


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the space-time lattice.

    Parameters
    ----------
    x_min, x_max:
        Edges of the periodic box. Sample points are
        ``x_min + i * dx`` for ``i = 0 .. n_x - 1``; ``x_max`` itself is
        excluded because it aliases ``x_min``.
    n_x:
        Number of spatial samples, a power of two of at least 8 so the
        FFT based operators stay fast and unambiguous.
    n_t:
        Number of time steps. Fields carry ``n_t + 1`` nodes on [0, 1].
    d:
        Spatial dimension of vector values. Storage supports any d >= 1
        but the calculus routines are implemented for d = 1 only.
    boundary_tol:
        Relative magnitude a decaying field may show at the box edges
        before spectral operations refuse it.
    """

    x_min: float
    x_max: float
    n_x: int
    n_t: int
    d: int = 1
    boundary_tol: float = 1e-12

    def __post_init__(self) -> None:
        if not self.x_max > self.x_min:
            raise ValueError(f"empty box: [{self.x_min}, {self.x_max})")
        if self.n_x < 8 or (self.n_x & (self.n_x - 1)) != 0:
            raise ValueError(f"n_x must be a power of two >= 8, got {self.n_x}")
        if self.n_t < 2:
            raise ValueError(f"need at least 2 time steps, got {self.n_t}")
        if self.d < 1:
            raise ValueError(f"dimension must be positive, got {self.d}")
        if not 0.0 < self.boundary_tol < 1.0:
            raise ValueError(f"boundary_tol out of range: {self.boundary_tol}")

    @cached_property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @cached_property
    def dt(self) -> float:
        return 1.0 / self.n_t

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_x)

    @cached_property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_t + 1)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_x, d=self.dx)

    def require_1d(self, operation: str) -> None:
        if self.d != 1:
            raise Unsupported(f"{operation} is implemented for d = 1, grid has d = {self.d}")

    def coarsen(self) -> "GridSpec":
        """Grid with every second node removed in both directions."""
        if self.n_x < 16 or self.n_t % 2 or self.n_t < 4:
            raise ValueError("grid too small to coarsen")
        return GridSpec(self.x_min, self.x_max, self.n_x // 2, self.n_t // 2,
                        d=self.d, boundary_tol=self.boundary_tol)


def _checked_values(values: np.ndarray, shape: tuple, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{what} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class ScalarField:
    """Real scalar samples, one row per time node."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        g = self.grid
        object.__setattr__(self, "values",
                           _checked_values(self.values, (g.n_t + 1, g.n_x), "scalar field"))

    def coarsen(self) -> "ScalarField":
        return ScalarField(self.grid.coarsen(), self.values[::2, ::2])


@dataclass(frozen=True)
class VectorField:
    """Vector valued samples with a trailing component axis."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        g = self.grid
        object.__setattr__(self, "values",
                           _checked_values(self.values, (g.n_t + 1, g.n_x, g.d), "vector field"))

    def component(self, axis: int = 0) -> np.ndarray:
        """Samples of one Cartesian component, shape (n_t + 1, n_x)."""
        return self.values[..., axis]

    def coarsen(self) -> "VectorField":
        return VectorField(self.grid.coarsen(), self.values[::2, ::2, :])


def edge_leak(values: np.ndarray, grid: GridSpec) -> float:
    """Largest edge magnitude relative to the same time slice's peak.

    Works on any array whose last axis is the spatial one. Slices that
    vanish identically contribute zero.
    """
    flat = np.abs(np.asarray(values, dtype=float))
    flat = flat.reshape(-1, grid.n_x)
    peak = flat.max(axis=1)
    edge = np.maximum(flat[:, 0], flat[:, -1])
    safe = np.where(peak > 0.0, peak, 1.0)
    return float(np.max(np.where(peak > 0.0, edge / safe, 0.0)))


def ensure_decaying(values: np.ndarray, grid: GridSpec, what: str) -> None:
    leak = edge_leak(values, grid)
    if leak > grid.boundary_tol:
        raise BoundaryLeak(
            f"{what} has relative boundary magnitude {leak:.3e}, "
            f"above the tolerance {grid.boundary_tol:.1e}")


def fd_dx(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Open-boundary second order d/dx along the last axis."""
    return np.gradient(values, grid.dx, axis=-1, edge_order=2)


def fd_dt(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Open-boundary second order d/dt along the first axis."""
    return np.gradient(values, grid.dt, axis=0, edge_order=2)


def spectral_dx(values: np.ndarray, grid: GridSpec, what: str = "field") -> np.ndarray:
    """Fourier d/dx along the last axis for boundary-decaying fields.

    The Nyquist mode is annihilated; its derivative has no consistent
    real representation on the grid.
    """
    ensure_decaying(values, grid, what)
    vhat = np.fft.fft(values, axis=-1)
    vhat *= 1j * grid.wavenumbers
    vhat[..., grid.n_x // 2] = 0.0
    return np.real(np.fft.ifft(vhat, axis=-1))


def spectral_antiderivative(values: np.ndarray, grid: GridSpec,
                            what: str = "field") -> np.ndarray:
    """Primitive of a decaying field along x, anchored to 0 at x_min.

    The mean and Nyquist modes are dropped before inversion: a nonzero
    mean has no periodic primitive, and for fields that integrate to
    zero over the box (the only intended inputs) the mean mode is noise
    at rounding level anyway.
    """
    ensure_decaying(values, grid, what)
    vhat = np.fft.fft(values, axis=-1)
    vhat[..., 0] = 0.0
    k = grid.wavenumbers.copy()
    k[0] = 1.0
    vhat = vhat / (1j * k)
    vhat[..., grid.n_x // 2] = 0.0
    prim = np.real(np.fft.ifft(vhat, axis=-1))
    return prim - prim[..., :1]


def spectral_gradient(field: ScalarField, t_index: int | None = None):
    """Spatial gradient of a decaying scalar field via the FFT.

    With ``t_index`` given, returns one slice as an array of shape
    (n_x, d). Otherwise differentiates every time node and returns a
    :class:`VectorField`.
    """
    grid = field.grid
    grid.require_1d("spectral_gradient")
    if t_index is not None:
        slice_d = spectral_dx(field.values[t_index], grid, "gradient input")
        return slice_d[:, np.newaxis]
    out = spectral_dx(field.values, grid, "gradient input")
    return VectorField(grid, out[..., np.newaxis])


def fd_gradient(field: ScalarField, t_index: int | None = None):
    """Finite difference counterpart of :func:`spectral_gradient`.

    No decay requirement: intended for phases, log densities and other
    fields with polynomial growth across the box.
    """
    grid = field.grid
    grid.require_1d("fd_gradient")
    if t_index is not None:
        return fd_dx(field.values[t_index], grid)[:, np.newaxis]
    return VectorField(grid, fd_dx(field.values, grid)[..., np.newaxis])


def box_integral(values: np.ndarray, grid: GridSpec, what: str = "integrand") -> float:
    """Rectangle rule integral of one decaying spatial slice."""
    ensure_decaying(values, grid, what)
    return float(grid.dx * np.sum(values, axis=-1))


def integrate(field: ScalarField, t_index: int | None = None):
    """Box integral of a decaying scalar field, per slice or for one node."""
    ensure_decaying(field.values, field.grid, "integrand")
    sums = field.grid.dx * field.values.sum(axis=-1)
    if t_index is not None:
        return float(sums[t_index])
    return sums


def time_integrate(series: np.ndarray, grid: GridSpec) -> float:
    """Trapezoid rule over the n_t + 1 time nodes of the unit interval."""
    series = np.asarray(series, dtype=float)
    if series.shape[0] != grid.n_t + 1:
        raise ValueError(f"series has {series.shape[0]} nodes, grid has {grid.n_t + 1}")
    return float(grid.dt * (series.sum(axis=0) - 0.5 * (series[0] + series[-1])))
