"""Density, mean velocity and velocity variance of the stochastically perturbed flow.

Every field is an integral over the initial position ``s`` against the
Gaussian kernel

    K(s) = exp(-(u0(s) t + s - x)^2 / (2 sigma^2 t)) / (sqrt(2 pi t) sigma).

The integrals are restricted to the set where the kernel is not negligible and
are evaluated with a log-shift (the smallest exponent is factored out), so the
ratios defining the velocity stay finite when the raw exponentials underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .model import SampledProfile
from .quadrature import AccuracyError, integrate

__all__ = [
    "AccuracyError", "VacuumError", "QuadratureSpec", "KernelWindow", "kernel_window",
    "density_rho", "velocity_uhat", "velocity_uhat_bounded", "velocity", "second_moment_R",
    "fields", "moment_residuals",
]

VACUUM_FLOOR = 1e-300


class VacuumError(ArithmeticError):
    """The kernel-weighted density vanishes; the mean velocity is undefined."""

    def __init__(self, message, t=None, x=None):
        super().__init__(message)
        self.t = t
        self.x = x


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-14
    truncation_radius: float = 8.0
    max_subdivisions: int = 4000
    samples: int = 64

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.truncation_radius < 6:
            raise ValueError("truncation_radius must be at least 6")
        if self.max_subdivisions < 64:
            raise ValueError("max_subdivisions must be at least 64")


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class KernelWindow:
    """Where the kernel lives for one (t, x): integration panels and the log-shift."""

    intervals: tuple[tuple[float, ...], ...]
    shift: float
    tau: float


def _check(sigma, t):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def kernel_window(profile: SampledProfile, t: float, x: float, tau: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> KernelWindow:
    """Locate the initial positions whose characteristics pass within reach of ``x``.

    ``tau`` is the kernel width ``sigma*sqrt(t)``. The returned intervals carry
    seeded breakpoints at every characteristic root of ``u0(s) t + s = x``.
    """
    lo_u, hi_u = profile.velocity_bounds
    a, b = profile.window
    radius = spec.truncation_radius

    def z(s):
        return (profile.eval(s)[1] * t + s - x) / tau

    # distance from the characteristic bracket to the data window
    gap = max(a - (x - t * lo_u), (x - t * hi_u) - b, 0.0)
    delta = gap + radius * tau
    for _ in range(2):
        lo, hi = max(a, x - t * hi_u - delta), min(b, x - t * lo_u + delta)
        s = _sample_grid(profile, lo, hi, spec.samples)
        zs = z(s)
        zmin, minima = _minimum(z, s, zs)
        thr = math.hypot(zmin, radius)
        if thr * tau <= delta * (1 + 1e-12):
            break
        delta = thr * tau

    roots = []
    cross = np.nonzero((zs[:-1] * zs[1:] < 0) | (zs[:-1] == 0))[0]
    for i in cross:
        if zs[i] == 0:
            r = s[i]
        else:
            r = brentq(lambda q: float(z(q)), s[i], s[i + 1], xtol=1e-15 * max(1.0, abs(s[i])),
                       rtol=4 * np.finfo(float).eps)
        roots.append((i, r))
    if zs[-1] == 0:
        roots.append((len(s) - 2, s[-1]))

    az = np.abs(zs)
    active = (np.minimum(az[:-1], az[1:]) <= thr)
    active[cross] = True
    for i, _ in minima:
        active[max(i - 1, 0):i + 1] = True

    intervals = []
    i = 0
    n = len(active)
    while i < n:
        if not active[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and active[j + 1]:
            j += 1
        c, d = s[i], s[j + 1]
        pts = [c, d]
        pts.extend(bp for bp in profile.breakpoints if c < bp < d)
        pts.extend(s[i + 1:j + 1])
        for _, r in [rt for rt in roots if i <= rt[0] <= j]:
            w = _kernel_width(z, r, c, d)
            for k in (0.0, 1.0, 3.0, 6.0, radius):
                pts.extend((r - k * w, r + k * w))
        pts.extend(m for k, m in minima if i <= k <= j + 1)
        pts = np.unique(np.clip(pts, c, d))
        intervals.append(tuple(pts))
        i = j + 1
    return KernelWindow(tuple(intervals), 0.5 * zmin * zmin, tau)


def _sample_grid(profile, lo, hi, samples):
    parts = [np.linspace(lo, hi, samples + 1)]
    bps = [bp for bp in profile.breakpoints if lo < bp < hi]
    parts.append(bps)
    if profile.scale:
        for bp in profile.breakpoints:
            fine = np.linspace(bp - 50 * profile.scale, bp + 50 * profile.scale, 401)
            parts.append(fine[(fine > lo) & (fine < hi)])
    return np.unique(np.concatenate([np.atleast_1d(np.asarray(p, dtype=float)) for p in parts]))


def _minimum(z, s, zs):
    """Smallest |z| on the sampled bracket, with refined interior local minima."""
    if np.any(zs[:-1] * zs[1:] <= 0):
        return 0.0, []
    az = np.abs(zs)
    minima = []
    best = float(az.min())
    idx = [i for i in range(1, len(s) - 1) if az[i] <= az[i - 1] and az[i] <= az[i + 1]]
    for i in idx:
        res = minimize_scalar(lambda q: abs(float(z(q))), bounds=(s[i - 1], s[i + 1]),
                              method="bounded", options={"xatol": 1e-14 * max(1.0, abs(s[i]))})
        minima.append((i, float(res.x)))
        best = min(best, float(res.fun))
    return best, minima


def _kernel_width(z, r, c, d):
    """Width of the kernel bump around a root, ``tau / |g'(r)|`` in s-units."""
    h = max((d - c) * 1e-7, 1e-12 * max(1.0, abs(r)))
    lo, hi = max(c, r - h), min(d, r + h)
    slope = abs(float(z(hi)) - float(z(lo))) / (hi - lo)
    if slope == 0:
        return d - c
    return min(1.0 / slope, d - c)


def _kernel_integrals(profile, sigma, t, x, spec, weights):
    """Shifted integrals of ``weights(f0, u0) * K``; returns (values, shift)."""
    tau = sigma * math.sqrt(t)
    win = kernel_window(profile, t, x, tau, spec)
    norm = 1.0 / (math.sqrt(2.0 * math.pi) * tau)

    def integrand(s):
        f, u = profile.eval(s)
        zz = (u * t + s - x) / tau
        k = norm * np.exp(win.shift - 0.5 * zz * zz)
        return np.asarray(weights(f, u)) * k

    total = None
    for pts in win.intervals:
        try:
            val, _ = integrate(integrand, pts, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
        except AccuracyError as exc:
            exc.context.update(t=t, x=x, sigma=sigma)
            raise
        total = val if total is None else total + val
    if total is None:
        total = np.zeros(np.shape(weights(np.zeros(1), np.zeros(1)))[0])
    return total, win.shift


def density_rho(profile: SampledProfile, sigma: float, t: float, x: float,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Density of the perturbed flow at ``(t, x)``."""
    _check(sigma, t)
    vals, shift = _kernel_integrals(profile, sigma, t, x, spec, lambda f, u: np.vstack([f]))
    return max(float(vals[0]) * math.exp(-shift), 0.0)


def fields(profile: SampledProfile, sigma: float, t: float, x: float,
           spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """``(rho, uhat)`` from one pass over the kernel."""
    _check(sigma, t)
    vals, shift = _kernel_integrals(profile, sigma, t, x, spec,
                                    lambda f, u: np.vstack([f, f * u]))
    den, num = float(vals[0]), float(vals[1])
    if not den > VACUUM_FLOOR:
        raise VacuumError(f"vacuum at t={t}, x={x}", t, x)
    return max(den * math.exp(-shift), 0.0), num / den


def velocity_uhat(profile: SampledProfile, sigma: float, t: float, x: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Conditional mean velocity at ``(t, x)``; ``u0(x)`` at ``t == 0``."""
    if t == 0:
        return float(profile.eval(x)[1])
    return fields(profile, sigma, t, x, spec)[1]


def velocity_uhat_bounded(profile: SampledProfile, sigma: float, t: float, x: float,
                          L: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Mean velocity with the data truncated to ``[-L, L]`` (for non-integrable ``f0``)."""
    if not L > 0:
        raise ValueError(f"L must be positive, got {L}")
    return velocity_uhat(profile.restricted(-L, L), sigma, t, x, spec)


def velocity(profile: SampledProfile, sigma: float, t: float, x: float,
             spec: QuadratureSpec = DEFAULT_SPEC, L: float | None = None) -> float:
    """Dispatch on ``profile.integrable``: plain ratio, or the truncated-window ratio."""
    if profile.integrable and L is None:
        return velocity_uhat(profile, sigma, t, x, spec)
    if L is None:
        a, b = profile.window
        L = max(abs(a), abs(b))
        if not math.isfinite(L):
            raise ValueError("a window half-width L is required for non-integrable data")
    return velocity_uhat_bounded(profile, sigma, t, x, L, spec)


def second_moment_R(profile: SampledProfile, sigma: float, t: float, x: float,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Velocity variance flux ``R = int f0 (u0 - uhat)^2 K ds``.

    Its x-derivative is the integral term of the momentum balance, because the
    first central moment of ``u`` vanishes by definition of ``uhat``.
    """
    _check(sigma, t)
    try:
        uh = fields(profile, sigma, t, x, spec)[1]
    except VacuumError:
        return 0.0
    vals, shift = _kernel_integrals(profile, sigma, t, x, spec,
                                    lambda f, u: np.vstack([f * (u - uh) ** 2]))
    return max(float(vals[0]) * math.exp(-shift), 0.0)


def moment_residuals(profile: SampledProfile, sigma: float, t: float, x: float,
                     spec: QuadratureSpec = DEFAULT_SPEC, h: float | None = None):
    """Central-difference residuals of the continuity and momentum equations.

    Returns ``(continuity, momentum)`` as absolute values; both vanish like
    ``h**2``. The default step is ``sigma/10``.
    """
    _check(sigma, t)
    if h is None:
        h = sigma / 10.0
    if not 0 < h < t:
        raise ValueError(f"need 0 < h < t, got h={h}, t={t}")

    cache = {}

    def q(tt, xx):
        key = (tt, xx)
        if key not in cache:
            rho, uh = fields(profile, sigma, tt, xx, spec)
            r = second_moment_R(profile, sigma, tt, xx, spec)
            cache[key] = np.array([rho, rho * uh, rho * uh * uh + r])
        return cache[key]

    c = q(t, x)
    tp, tm = q(t + h, x), q(t - h, x)
    xp, xm = q(t, x + h), q(t, x - h)
    dt = (tp - tm) / (2 * h)
    dx = (xp - xm) / (2 * h)
    dxx = (xp - 2 * c + xm) / (h * h)
    half_var = 0.5 * sigma * sigma
    cont = dt[0] + dx[1] - half_var * dxx[0]
    mom = dt[1] + dx[2] - half_var * dxx[1]
    return abs(float(cont)), abs(float(mom))
