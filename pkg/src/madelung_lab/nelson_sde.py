"""Diffusion ensembles with unit diffusion matrix and Markovian drifts.

Trajectories follow

    q_t = X0 + integral of b(q_s, s) ds + W_t

by Euler-Maruyama with ``substeps`` internal steps per partition
interval, so the SDE integration error is decoupled from the partition
size n that defines the discrete action

    F_n = n * E[ sum over i of (q_{t_{i+1}} - q_{t_i})^2 ].

Subtracting n*d (the expected quadratic variation of the noise alone)
renormalizes F_n; for a Markovian drift the renormalized value
estimates the expected time integral of b^2 + div b, hence the quantum
action of the underlying couple.

Determinism: initial samples come from a Philox stream keyed by
(seed, 1); trajectory noise is keyed by (seed, 2 + block) where blocks
are fixed runs of 8192 consecutive trajectories. Every estimate is
therefore reproducible bit for bit regardless of scheduling, and
trajectory k's noise does not depend on N.

Mixtures: convex combinations of drifts share one X0 and one Brownian
path per trajectory. The component diffusions q^{b_j} are co-evolved on
that common noise, the mixture velocity is the weighted sum of the
components' drifts evaluated each along its own component, and the
recorded process integrates that velocity against the shared noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Diverged, NormDrift
from .grid_fields import GridSpec, ScalarField
from .madelung import DriftField

BLOCK = 8192
_INIT_STREAM = 1
_NOISE_STREAM_BASE = 2


@dataclass(frozen=True)
class Ensemble:
    """Partition node positions and per-interval Brownian sums.

    ``paths`` has shape (N, n + 1, d); ``w_sums`` (float32, shape
    (N, n, d)) stores each interval's summed noise so an interval
    increment splits into drift part plus noise part for diagnostics.
    """

    paths: np.ndarray
    w_sums: np.ndarray
    n: int
    N: int
    seed: int
    drift_id: str
    grid: GridSpec

    def __post_init__(self) -> None:
        if self.paths.shape != (self.N, self.n + 1, self.grid.d):
            raise ValueError(f"paths shape {self.paths.shape} does not match "
                             f"(N, n + 1, d) = {(self.N, self.n + 1, self.grid.d)}")
        if self.w_sums.shape != (self.N, self.n, self.grid.d):
            raise ValueError("w_sums shape does not match (N, n, d)")
        if not np.all(np.isfinite(self.paths)):
            raise ValueError("ensemble contains non-finite positions")

    @property
    def times(self) -> np.ndarray:
        """The equipartition nodes i/n of the unit interval."""
        return np.arange(self.n + 1) / self.n


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    N: int

    def __post_init__(self) -> None:
        if self.std_error < 0.0:
            raise ValueError("std_error must be nonnegative")

    def as_dict(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error, "N": self.N}


def sample_initial(rho0: np.ndarray, grid: GridSpec, n_samples: int,
                   seed: int) -> np.ndarray:
    """Inverse-CDF samples from a density given on the spatial grid.

    The CDF comes from the cumulative trapezoid rule and is inverted by
    linear interpolation, so samples never leave the box.
    """
    grid.require_1d("sample_initial")
    rho0 = np.asarray(rho0, dtype=float)
    if rho0.shape != (grid.n_x,):
        raise ValueError(f"density slice has shape {rho0.shape}, "
                         f"expected ({grid.n_x},)")
    cdf = np.concatenate([[0.0],
                          np.cumsum(0.5 * grid.dx * (rho0[1:] + rho0[:-1]))])
    if abs(cdf[-1] - 1.0) > 1e-8:
        raise NormDrift(f"initial density mass is {cdf[-1]!r}, expected 1")
    cdf = cdf / cdf[-1]
    rng = np.random.Generator(np.random.Philox(key=[seed, _INIT_STREAM]))
    return np.interp(rng.random(n_samples), cdf, grid.x)


def _check_inside(positions: np.ndarray, grid: GridSpec, t: float) -> None:
    width = grid.x_max - grid.x_min
    low, high = grid.x_min - 0.2 * width, grid.x_max + 0.2 * width
    worst = float(np.max(np.abs(positions)))
    if np.min(positions) < low or np.max(positions) > high:
        raise Diverged(f"trajectory reached |q| = {worst:.3f} at t = {t:.4f}, "
                       f"outside the 20% margin around the box")


def mixture_ensemble(drifts: list[DriftField], weights, rho0, grid: GridSpec,
                     N: int, n: int, substeps: int, seed: int) -> Ensemble:
    """Simulate the convex mixture of drifts on common (X0, W).

    ``rho0`` is the initial density sampled on ``grid.x``; pass None to
    start every trajectory at the origin.
    """
    grid.require_1d("mixture_ensemble")
    if not drifts:
        raise ValueError("need at least one drift")
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(drifts),):
        raise ValueError("one weight per drift required")
    if np.any(weights < 0.0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError(f"weights must be convex, got {weights.tolist()}")
    for b in drifts:
        if b.b.grid != grid:
            raise ValueError(f"drift {b.name} lives on a different grid")
    if n < 1 or substeps < 1 or N < 1:
        raise ValueError("N, n and substeps must be positive")

    if rho0 is None:
        x0 = np.zeros(N)
    else:
        x0 = sample_initial(rho0, grid, N, seed)

    h = 1.0 / (n * substeps)
    root_h = np.sqrt(h)
    paths = np.empty((N, n + 1, 1))
    w_sums = np.empty((N, n, 1), dtype=np.float32)

    for block_index, start in enumerate(range(0, N, BLOCK)):
        stop = min(start + BLOCK, N)
        rng = np.random.Generator(
            np.random.Philox(key=[seed, _NOISE_STREAM_BASE + block_index]))
        components = [x0[start:stop].copy() for _ in drifts]
        mixed = x0[start:stop].copy()
        paths[start:stop, 0, 0] = mixed
        for i in range(n):
            w_acc = np.zeros(stop - start)
            for sub in range(i * substeps, (i + 1) * substeps):
                t_left = sub * h
                dw = rng.normal(0.0, root_h, stop - start)
                pulls = [b.evaluate(q, t_left)
                         for b, q in zip(drifts, components)]
                beta = sum(w * pull for w, pull in zip(weights, pulls))
                for j, pull in enumerate(pulls):
                    components[j] = components[j] + (pull * h + dw)
                mixed = mixed + (beta * h + dw)
                w_acc += dw
            t_node = (i + 1) / n
            _check_inside(mixed, grid, t_node)
            for q in components:
                _check_inside(q, grid, t_node)
            paths[start:stop, i + 1, 0] = mixed
            w_sums[start:stop, i, 0] = w_acc

    if len(drifts) == 1:
        drift_id = drifts[0].name
    else:
        parts = [f"{w:.6g}*{b.name}" for w, b in zip(weights, drifts)]
        drift_id = "mixture[" + " + ".join(parts) + "]"
    return Ensemble(paths, w_sums, n, N, seed, drift_id, grid)


def simulate_ensemble(b: DriftField, rho0, grid: GridSpec, N: int, n: int,
                      substeps: int, seed: int) -> Ensemble:
    """Single-drift ensemble; the degenerate weight-one mixture."""
    return mixture_ensemble([b], [1.0], rho0, grid, N, n, substeps, seed)


def discrete_action(ens: Ensemble) -> MCEstimate:
    """n times the mean summed squared partition increment."""
    dq = np.diff(ens.paths, axis=1)
    per_path = ens.n * np.einsum("ijk,ijk->i", dq, dq)
    std_error = float(per_path.std(ddof=1) / np.sqrt(ens.N)) if ens.N > 1 else 0.0
    return MCEstimate(float(per_path.mean()), std_error, ens.N)


def renormalized_action(ens: Ensemble) -> MCEstimate:
    """Discrete action minus its pure-noise expectation n*d."""
    raw = discrete_action(ens)
    return MCEstimate(raw.mean - ens.n * ens.grid.d, raw.std_error, ens.N)


def _time_node(t: float, grid: GridSpec) -> int:
    return min(int(np.floor(t * grid.n_t + 1e-9)), grid.n_t)


def estimate_I(ens: Ensemble, b: DriftField, div_b: ScalarField) -> MCEstimate:
    """Path average of the time integral of b^2 + div b.

    The integrand is read along each trajectory at the partition nodes
    (same interpolation rule as the drift itself) and integrated by the
    trapezoid rule. Independent of the renormalized action estimator,
    which never looks at b.
    """
    if div_b.grid != ens.grid:
        raise ValueError("divergence field lives on a different grid")
    grid = ens.grid
    totals = np.zeros(ens.N)
    for i in range(ens.n + 1):
        t_i = i / ens.n
        q = ens.paths[:, i, 0]
        node = _time_node(t_i, grid)
        values = (b.evaluate(q, t_i) ** 2
                  + np.interp(q, grid.x, div_b.values[node]))
        weight = 0.5 if i in (0, ens.n) else 1.0
        totals += weight * values
    totals /= ens.n
    std_error = float(totals.std(ddof=1) / np.sqrt(ens.N)) if ens.N > 1 else 0.0
    return MCEstimate(float(totals.mean()), std_error, ens.N)


def marginal_histogram(ens: Ensemble, fraction: float):
    """Histogram density at a partition time, bins centred on grid points."""
    node = fraction * ens.n
    i = int(round(node))
    if abs(node - i) > 1e-9:
        raise ValueError(f"t = {fraction} is not a partition node for n = {ens.n}")
    grid = ens.grid
    edges = np.concatenate([grid.x - 0.5 * grid.dx,
                            [grid.x[-1] + 0.5 * grid.dx]])
    counts, _ = np.histogram(ens.paths[:, i, 0], bins=edges)
    return grid.x, counts / (ens.N * grid.dx)


def marginal_l1(ens: Ensemble, rho: ScalarField,
                fractions=(0.0, 0.25, 0.5, 0.75, 1.0)) -> dict:
    """L1 distance between histogram estimates and a reference density."""
    if rho.grid != ens.grid:
        raise ValueError("reference density lives on a different grid")
    grid = ens.grid
    out = {}
    for frac in fractions:
        _, est = marginal_histogram(ens, frac)
        j = int(round(frac * grid.n_t))
        if abs(frac * grid.n_t - j) > 1e-9:
            raise ValueError(f"t = {frac} is not a grid time node")
        out[float(frac)] = float(grid.dx * np.abs(est - rho.values[j]).sum())
    return out


def ensemble_summary(ens: Ensemble) -> dict:
    """Compact JSON-friendly description (no paths)."""
    q0 = ens.paths[:, 0, 0]
    q1 = ens.paths[:, -1, 0]
    return {
        "N": ens.N, "n": ens.n, "seed": ens.seed, "drift_id": ens.drift_id,
        "mean_t0": float(q0.mean()), "var_t0": float(q0.var()),
        "mean_t1": float(q1.mean()), "var_t1": float(q1.var()),
    }
