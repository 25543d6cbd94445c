"""Classical Burgers solution by backward characteristics.

Before the breakdown time the foot point ``s0`` of the characteristic through
``(t, x)`` is the unique root of ``u0(s) t + s - x = 0`` and ``u(t, x) = u0(s0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SampledProfile


class BreakdownError(ValueError):
    """Requested time is at or beyond the first crossing of characteristics."""


@dataclass(frozen=True)
class CharacteristicSolve:
    s0: float
    jacobian: float
    iterations: int


def _slope(profile, s, h=None):
    if h is None:
        h = 1e-6 * max(1.0, abs(s))
    up, um = profile.eval(np.array([s + h, s - h]))[1]
    return float((up - um) / (2 * h))


def breakdown_time(profile: SampledProfile, samples: int = 4096) -> float:
    """``-1/min u0'`` over the sampled window, or ``inf`` if ``u0`` never decreases."""
    a, b = profile.sample_window()
    s = np.linspace(a, b, samples)
    du = np.gradient(profile.eval(s)[1], s)
    m = float(du.min())
    return -1.0 / m if m < 0 else math.inf


def solve_implicit_s0(profile: SampledProfile, t: float, x: float, tol: float = 1e-13,
                      t_star: float | None = None, max_iter: int = 200) -> CharacteristicSolve:
    """Foot point of the characteristic through ``(t, x)``.

    Newton iteration from ``x - t u0(x)``, falling back to bisection whenever a
    step leaves the current bracket ``[x - t sup u0, x - t inf u0]`` or fails
    to halve the residual.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t_star is None:
        t_star = breakdown_time(profile)
    if t >= t_star:
        raise BreakdownError(f"t={t} is beyond the breakdown time {t_star}")
    if t == 0:
        return CharacteristicSolve(float(x), 1.0, 0)

    def g(s):
        return float(profile.eval(s)[1]) * t + s - x

    lo_u, hi_u = profile.velocity_bounds
    lo, hi = x - t * hi_u, x - t * lo_u
    glo, ghi = g(lo), g(hi)
    if glo > 0 or ghi < 0:
        raise RuntimeError(f"characteristic bracket [{lo}, {hi}] does not contain a root")
    if glo == 0:
        return CharacteristicSolve(lo, 1 + t * _slope(profile, lo), 0)
    if ghi == 0:
        return CharacteristicSolve(hi, 1 + t * _slope(profile, hi), 0)

    s = min(max(x - t * float(profile.eval(x)[1]), lo), hi)
    r = g(s)
    if abs(r) < tol:
        return CharacteristicSolve(s, 1 + t * _slope(profile, s), 0)
    for it in range(1, max_iter + 1):
        if r < 0:
            lo = s
        else:
            hi = s
        jac = 1 + t * _slope(profile, s)
        step_ok = False
        if jac > 0:
            cand = s - r / jac
            if lo < cand < hi:
                rc = g(cand)
                if abs(rc) <= 0.5 * abs(r):
                    s, r, step_ok = cand, rc, True
        if not step_ok:
            s = 0.5 * (lo + hi)
            r = g(s)
        if abs(r) < tol or hi - lo < 4 * np.finfo(float).eps * max(1.0, abs(s)):
            return CharacteristicSolve(s, 1 + t * _slope(profile, s), it)
    raise RuntimeError(f"no convergence for t={t}, x={x}: residual {r}")


def classical_solution(profile: SampledProfile, t: float, x: float, tol: float = 1e-13,
                       t_star: float | None = None) -> float:
    if t == 0:
        return float(profile.eval(x)[1])
    return float(profile.eval(solve_implicit_s0(profile, t, x, tol, t_star).s0)[1])
