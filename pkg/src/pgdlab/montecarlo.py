"""Particle simulation of the perturbed characteristics and kernel estimators.

Velocities are frozen along paths, so positions at time ``t`` are sampled
exactly: ``X = s + u0(s) t + sigma sqrt(t) xi``. An Euler-Maruyama mode is kept
to show that the step count does not matter.

Random streams: particles are cut into blocks of ``BLOCK`` consecutive
indices, and block ``b`` draws from a Philox generator keyed by
``SeedSequence(seed, spawn_key=(b,))``. An ensemble is therefore the same
whatever the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exact_fields import VacuumError
from .model import SampledProfile

BLOCK = 1 << 16
_KERNEL_REACH = 8.0


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


@dataclass(frozen=True)
class ParticleEnsemble:
    s: np.ndarray
    u: np.ndarray
    X: np.ndarray
    w: np.ndarray
    seed: int
    sigma: float
    t: float
    mass: float
    window: tuple[float, float]

    @property
    def n(self) -> int:
        return len(self.s)

    def __post_init__(self):
        order = np.argsort(self.X, kind="stable")
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_Xs", self.X[order])

    def local(self, x: float, h: float):
        """Indices of particles within the kernel reach of ``x``."""
        lo = np.searchsorted(self._Xs, x - _KERNEL_REACH * h, side="left")
        hi = np.searchsorted(self._Xs, x + _KERNEL_REACH * h, side="right")
        return self._order[lo:hi]

    def export(self, path) -> None:
        """Write the columns ``s u X w`` as whitespace-separated text."""
        np.savetxt(path, np.column_stack([self.s, self.u, self.X, self.w]),
                   header="s u X w", fmt="%.17g")


def _inverse_cdf_grid(profile, window, cells):
    a, b = window
    nodes = np.linspace(a, b, cells + 1)
    bps = [p for p in profile.breakpoints if a < p < b]
    nodes = np.unique(np.concatenate([nodes, bps]))
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    dens = np.asarray(profile.eval(mids)[0], dtype=float)
    if np.any(dens < 0):
        raise ValueError("density must be non-negative")
    cell_mass = dens * np.diff(nodes)
    cdf = np.cumsum(cell_mass)
    return nodes, dens, cdf, math.fsum(cell_mass)


def _simulate_block(profile, grid, sampling, window, sigma, t, n, seed, block, steps):
    nodes, dens, cdf, mass = grid
    start = block * BLOCK
    m = min(BLOCK, n - start)
    rng = block_generator(seed, block)
    q = (np.arange(start, start + m) + rng.random(m)) / n
    if sampling == "stratified":
        target = q * mass
        idx = np.minimum(np.searchsorted(cdf, target, side="right"), len(dens) - 1)
        left = np.where(idx > 0, cdf[idx - 1], 0.0)
        s = nodes[idx] + (target - left) / dens[idx]
        s = np.minimum(s, nodes[idx + 1])
        w = np.full(m, mass / n)
    else:
        a, b = window
        s = a + q * (b - a)
        w = np.asarray(profile.eval(s)[0], dtype=float) * (b - a) / n
    u = np.asarray(profile.eval(s)[1], dtype=float)
    if steps is None:
        X = s + u * t + sigma * math.sqrt(t) * rng.standard_normal(m)
    else:
        dt = t / steps
        X = s.copy()
        for _ in range(steps):
            X += u * dt + sigma * math.sqrt(dt) * rng.standard_normal(m)
    return s, u, X, w


def simulate(profile: SampledProfile, sigma: float, t: float, n: int, seed: int,
             window: tuple[float, float] | None = None, sampling: str = "stratified",
             euler_steps: int | None = None, workers: int = 1,
             cells: int = 1 << 16) -> ParticleEnsemble:
    """Draw ``n`` particles on ``window`` and move them to time ``t``.

    ``sampling="stratified"`` inverts the cumulative mass on a fine grid at the
    points ``(i + U_i)/n`` (equal weights); ``"importance"`` places particles
    uniformly and weights them by ``f0``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if sigma < 0 or t < 0:
        raise ValueError("sigma and t must be non-negative")
    if sampling not in ("stratified", "importance"):
        raise ValueError(f"unknown sampling {sampling!r}")
    if euler_steps is not None and euler_steps < 1:
        raise ValueError("euler_steps must be positive")
    window = window or profile.sample_window()
    grid = _inverse_cdf_grid(profile, window, cells)
    blocks = range((n + BLOCK - 1) // BLOCK)

    def run(b):
        return _simulate_block(profile, grid, sampling, window, sigma, t, n, seed, b, euler_steps)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    s, u, X, w = (np.concatenate(c) for c in zip(*parts))
    return ParticleEnsemble(s, u, X, w, seed, sigma, t, grid[3], window)


def _kernel(y):
    return np.exp(-0.5 * y * y) / math.sqrt(2 * math.pi)


def estimate_rho(ens: ParticleEnsemble, x: float, h: float) -> float:
    """Kernel density estimate; its integral over the line is the window mass."""
    idx = ens.local(x, h)
    return math.fsum(ens.w[idx] * _kernel((ens.X[idx] - x) / h)) / h


def estimate_uhat(ens: ParticleEnsemble, x: float, h: float) -> float:
    """Nadaraya-Watson estimate of the conditional mean velocity at ``x``."""
    idx = ens.local(x, h)
    k = ens.w[idx] * _kernel((ens.X[idx] - x) / h)
    den = math.fsum(k)
    if not den > 0:
        raise VacuumError(f"no particles near x={x}", ens.t, x)
    return math.fsum(k * ens.u[idx]) / den


def bootstrap_se(ens: ParticleEnsemble, x: float, h: float, n_boot: int = 200,
                 seed: int = 0) -> tuple[float, float]:
    """Bootstrap standard errors of ``(estimate_rho, estimate_uhat)``.

    Resampling uses independent Poisson(1) multiplicities per particle, the
    large-n form of the multinomial bootstrap; only particles inside the
    kernel reach can change the estimates, so only those are resampled.
    """
    idx = ens.local(x, h)
    k = ens.w[idx] * _kernel((ens.X[idx] - x) / h)
    ku = k * ens.u[idx]
    rng = np.random.default_rng(seed)
    rho_b = np.empty(n_boot)
    u_b = np.empty(n_boot)
    for i in range(n_boot):
        c = rng.poisson(1.0, len(idx))
        den = c @ k
        rho_b[i] = den / h
        u_b[i] = (c @ ku) / den if den > 0 else np.nan
    return float(np.std(rho_b, ddof=1)), float(np.nanstd(u_b, ddof=1))


def effective_sigma(sigma: float, t: float, h: float) -> float:
    """Noise level whose exact fields equal the expectation of the kernel estimates.

    Smoothing the positions with a Gaussian of width ``h`` adds ``h**2`` to the
    position variance ``sigma**2 t``.
    """
    return math.sqrt(sigma * sigma + h * h / t)
