"""Hydrodynamic decomposition of wave fields and the associated drifts.

A node free wave field factors as sqrt(rho) * exp(i S). The couple
(rho, dS/dx) obeys the continuity equation, and S itself obeys a
Hamilton-Jacobi equation with the curvature of sqrt(rho) as potential.
``madelung_residuals`` measures how well sampled fields satisfy both,
which is the certificate that a couple really came from a wave field.

Derivative conventions: rho weighted fluxes decay at the box edges and
are differentiated spectrally. Phases and log densities grow
polynomially across the box, so they use the open boundary finite
difference rule (exact on quadratics, hence on every Gaussian case).

The drift b = v + (1/2) d(log rho)/dx steers the diffusion ensembles in
:mod:`madelung_lab.nelson_sde`; its interpolation rule for off grid
evaluation is part of the contract and recorded on the field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NodeDetected, NormDrift, UnwrapInconsistent
from .grid_fields import (GridSpec, ScalarField, VectorField, ensure_decaying,
                          fd_dt, fd_dx, spectral_dx, time_integrate)
from .schrodinger import (NODE_FLOOR, GaussianPacketSpec, WaveField,
                          packet_density, packet_osmotic)

MASS_TOL = 1e-8

# Post-unwrap neighbour increments above this (in radians) mean the grid
# cannot distinguish a fast phase from a wrap; just below pi.
UNWRAP_STEP_LIMIT = 2.8


@dataclass(frozen=True)
class FluidCouple:
    """A normalized positive density and its current velocity field.

    ``log_density_gradient`` optionally carries a higher quality sampling
    of d(log rho)/dx than the default finite difference one; constructors
    attach it when they know a better route (analytic or spectral).
    The finite action integral of the couple is evaluated once at
    construction and recorded, mostly as an admissibility guard.
    """

    rho: ScalarField
    v: VectorField
    provenance: str = "synthetic"
    log_density_gradient: VectorField | None = None
    finite_action: float = field(init=False, default=0.0)

    def __post_init__(self) -> None:
        if self.rho.grid != self.v.grid:
            raise ValueError("density and velocity live on different grids")
        if self.log_density_gradient is not None \
                and self.log_density_gradient.grid != self.rho.grid:
            raise ValueError("log density gradient on a different grid")
        grid = self.rho.grid
        dens = self.rho.values
        if dens.min() <= 0.0:
            raise ValueError(f"density must be strictly positive, "
                             f"min = {dens.min():.3e}")
        mass = grid.dx * dens.sum(axis=-1)
        worst = float(np.max(np.abs(mass - 1.0)))
        if worst > MASS_TOL:
            raise NormDrift(f"density mass off by {worst:.3e} at some time node")
        object.__setattr__(self, "finite_action", self._finite_action())

    def _finite_action(self) -> float:
        grid = self.rho.grid
        u = 0.5 * self.log_gradient_values()
        speed_sq = np.sum(self.v.values**2, axis=-1)
        integrand = (speed_sq + u**2) * self.rho.values
        ensure_decaying(integrand, grid, "finite action integrand")
        return time_integrate(grid.dx * integrand.sum(axis=-1), grid)

    def log_gradient_values(self) -> np.ndarray:
        """Samples of d(log rho)/dx, preferring the attached field."""
        if self.log_density_gradient is not None:
            return self.log_density_gradient.component(0)
        return fd_dx(np.log(self.rho.values), self.rho.grid)


@dataclass(frozen=True)
class DriftField:
    """A vector field plus the rule for evaluating it off the lattice."""

    b: VectorField
    name: str = "drift"
    interpolation: str = "linear-x,left-t"

    def evaluate(self, positions: np.ndarray, t: float) -> np.ndarray:
        """Drift at arbitrary positions, frozen at the time node <= t.

        Linear interpolation in x; outside the box the boundary value
        extends constantly (trajectories essentially never get there).
        """
        grid = self.b.grid
        grid.require_1d("drift evaluation")
        node = min(int(np.floor(t * grid.n_t + 1e-9)), grid.n_t)
        return np.interp(positions, grid.x, self.b.values[node, :, 0])

    def divergence(self) -> ScalarField:
        """d(b)/dx by open boundary differences (drifts grow linearly)."""
        grid = self.b.grid
        grid.require_1d("drift divergence")
        return ScalarField(grid, fd_dx(self.b.component(0), grid))


def osmotic(rho: ScalarField) -> VectorField:
    """Half the log density gradient, u = (1/2) d(log rho)/dx."""
    if rho.values.min() <= 0.0:
        raise ValueError("osmotic velocity needs a strictly positive density")
    grid = rho.grid
    grid.require_1d("osmotic")
    u = 0.5 * fd_dx(np.log(rho.values), grid)
    return VectorField(grid, u[..., np.newaxis])


def drift(couple: FluidCouple) -> DriftField:
    """Forward drift b = v + (1/2) d(log rho)/dx of the couple."""
    grid = couple.rho.grid
    grid.require_1d("drift")
    b = couple.v.component(0) + 0.5 * couple.log_gradient_values()
    return DriftField(VectorField(grid, b[..., np.newaxis]),
                      name=f"drift[{couple.provenance}]")


def constant_drift(grid: GridSpec, value: float, name: str | None = None) -> DriftField:
    values = np.full((grid.n_t + 1, grid.n_x, grid.d), float(value))
    return DriftField(VectorField(grid, values),
                      name=name or f"constant({value:g})")


def decompose(psi: WaveField, node_floor: float = NODE_FLOOR):
    """Split a wave field into (rho, S, couple) with v = dS/dx.

    The phase comes from unwrapping the principal argument along x for
    every time slice, then shifting whole slices by multiples of 2 pi so
    the centre column is continuous in time (it is anchored to the
    principal value at t = 0). Only the gradient of S is contractual;
    the couple's velocity is that gradient.
    """
    grid = psi.grid
    grid.require_1d("decompose")
    dens = psi.density()
    floor = float(dens.min())
    if floor < node_floor:
        raise NodeDetected(f"min |psi|^2 = {floor:.3e} below floor {node_floor:.1e}")

    raw = np.angle(psi.values)
    phase = np.unwrap(raw, axis=-1)
    step = float(np.max(np.abs(np.diff(phase, axis=-1))))
    if step > UNWRAP_STEP_LIMIT:
        raise UnwrapInconsistent(
            f"phase increment {step:.3f} rad between adjacent samples; "
            f"the grid cannot resolve this phase (limit {UNWRAP_STEP_LIMIT})")

    centre = grid.n_x // 2
    phase += raw[0, centre] - phase[0, centre]
    column = phase[:, centre]
    phase -= (column - np.unwrap(column))[:, np.newaxis]

    rho = ScalarField(grid, dens)
    s_field = ScalarField(grid, phase)
    v = VectorField(grid, fd_dx(phase, grid)[..., np.newaxis])
    log_grad = VectorField(grid, fd_dx(np.log(dens), grid)[..., np.newaxis])
    couple = FluidCouple(rho, v, provenance="schrodinger",
                         log_density_gradient=log_grad)
    return rho, s_field, couple


def madelung_residuals(rho: ScalarField, phase: ScalarField) -> tuple[float, float]:
    """Sup norms of the two fluid equation residuals on interior time nodes.

    r1 checks d(rho)/dt + d(rho v)/dx with v = dS/dx (mass transport),
    r2 checks dS/dt + v^2/2 - (1/2) (d^2 sqrt(rho)/dx^2) / sqrt(rho).
    The curvature term is evaluated through log rho, which keeps it
    exact for Gaussian slices:

        (d^2 sqrt(rho)/dx^2) / sqrt(rho)
            = (1/2) L'' + (1/4) (L')^2,   L = log rho.

    Time derivatives are centered; endpoints are excluded from the sup.
    """
    if rho.grid != phase.grid:
        raise ValueError("fields live on different grids")
    grid = rho.grid
    grid.require_1d("madelung_residuals")

    v = fd_dx(phase.values, grid)
    flux = spectral_dx(rho.values * v, grid, "density flux")
    cont = fd_dt(rho.values, grid) + flux
    r1 = float(np.max(np.abs(cont[1:-1])))

    log_rho = np.log(rho.values)
    lx = fd_dx(log_rho, grid)
    lxx = fd_dx(lx, grid)
    curvature = 0.5 * lxx + 0.25 * lx**2
    hj = fd_dt(phase.values, grid) + 0.5 * v**2 - 0.5 * curvature
    r2 = float(np.max(np.abs(hj[1:-1])))
    return r1, r2


# ---------------------------------------------------------------------------
# Synthetic couples used as fixtures and negative controls.

def _gaussian_density(grid: GridSpec, mean, variance: float) -> np.ndarray:
    x = grid.x[np.newaxis, :]
    mean = np.asarray(mean, dtype=float).reshape(-1, 1)
    return np.exp(-(x - mean) ** 2 / (2.0 * variance)) / np.sqrt(2.0 * np.pi * variance)


def static_gaussian_couple(grid: GridSpec, variance: float = 1.0,
                           mean: float = 0.0) -> FluidCouple:
    """Time independent normal density with zero velocity."""
    grid.require_1d("static_gaussian_couple")
    means = np.full(grid.n_t + 1, float(mean))
    rho = _gaussian_density(grid, means, variance)
    x = grid.x[np.newaxis, :]
    log_grad = -(x - means[:, np.newaxis]) / variance
    return FluidCouple(
        ScalarField(grid, rho),
        VectorField(grid, np.zeros((grid.n_t + 1, grid.n_x, 1))),
        provenance="synthetic",
        log_density_gradient=VectorField(grid, log_grad[..., np.newaxis]))


def translating_gaussian_couple(grid: GridSpec, speed: float,
                                variance: float = 1.0,
                                start: float = 0.0) -> FluidCouple:
    """Rigidly moving normal density with the matching constant velocity.

    Solves the continuity equation exactly, so it is a legitimate couple;
    it is not a wave field couple unless the width also spreads.
    """
    grid.require_1d("translating_gaussian_couple")
    means = start + speed * grid.t
    rho = _gaussian_density(grid, means, variance)
    x = grid.x[np.newaxis, :]
    log_grad = -(x - means[:, np.newaxis]) / variance
    v = np.full((grid.n_t + 1, grid.n_x, 1), float(speed))
    return FluidCouple(ScalarField(grid, rho), VectorField(grid, v),
                       provenance="synthetic",
                       log_density_gradient=VectorField(grid, log_grad[..., np.newaxis]))


def spreading_mismatched_couple(spec: GaussianPacketSpec, grid: GridSpec) -> FluidCouple:
    """Packet density paired with the constant velocity v = p.

    The density spreads but the velocity ignores that, so continuity
    fails by construction. Deliberate negative control: it is not the
    hydrodynamic couple of any wave field evolution.
    """
    grid.require_1d("spreading_mismatched_couple")
    x = grid.x[np.newaxis, :]
    t = grid.t[:, np.newaxis]
    rho = packet_density(spec, x, t)
    log_grad = 2.0 * packet_osmotic(spec, x, t)
    v = np.full((grid.n_t + 1, grid.n_x, 1), float(spec.p))
    return FluidCouple(ScalarField(grid, rho), VectorField(grid, v),
                       provenance="synthetic",
                       log_density_gradient=VectorField(grid, log_grad[..., np.newaxis]))


def plateau_density(grid: GridSpec, center: float = 0.0,
                    top_half_width: float = 2.0,
                    ramp_width: float = 2.0,
                    pedestal: float = 1e-13) -> ScalarField:
    """Normalized flat top profile, constant in time.

    Quintic smoothstep ramps join the plateau to a tiny uniform pedestal
    (strict positivity everywhere without tripping the boundary guard).
    On the plateau itself log rho is constant, so the osmotic velocity
    vanishes there identically.
    """
    if top_half_width <= 0.0 or ramp_width <= 0.0:
        raise ValueError("plateau widths must be positive")
    u = (np.abs(grid.x - center) - top_half_width) / ramp_width
    u = np.clip(u, 0.0, 1.0)
    ramp = 1.0 - u**3 * (u * (6.0 * u - 15.0) + 10.0)
    profile = pedestal + (1.0 - pedestal) * ramp
    profile = profile / (grid.dx * profile.sum())
    values = np.broadcast_to(profile, (grid.n_t + 1, grid.n_x)).copy()
    return ScalarField(grid, values)


def plateau_couple(grid: GridSpec, speed: float = 0.0, **kwargs) -> FluidCouple:
    rho = plateau_density(grid, **kwargs)
    v = np.full((grid.n_t + 1, grid.n_x, 1), float(speed))
    return FluidCouple(rho, VectorField(grid, v), provenance="synthetic")
