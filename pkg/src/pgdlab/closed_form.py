"""Gauss-CDF expressions for the fields generated by piecewise-linear Riemann data.

The two constant half-lines give the ``Phi`` terms. The ramp ``|s - x0| < eps``
carries linear density and velocity, so its contributions ``I1`` (density)
and ``I2`` (momentum relative to ``u1``) are Gaussian moments of low-degree
polynomials over a finite interval and are also evaluated in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .exact_fields import VacuumError, VACUUM_FLOOR
from .model import SmoothedRiemannData, gauss_cdf

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
# Gauss-Legendre rule for ramps whose image is narrow compared to the kernel
_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


@dataclass(frozen=True)
class RampCorrection:
    """Contribution of the ramp particles at one ``(t, x)``.

    ``ratio_N_over_F`` is the small-noise velocity offset inside the ramp image,
    ``u2/2 + u2 (x - (u1 + u2/2) t) / (u2 t + 2 eps)``.
    """

    I1: float
    I2: float
    ratio_N_over_F: float


def _phi(y):
    return _INV_SQRT_2PI * math.exp(-0.5 * y * y)


def _mass_between(lo, hi):
    """``Phi(hi) - Phi(lo)`` without cancellation in the upper tail."""
    if lo > 0:
        return float(ndtr(-lo) - ndtr(-hi))
    return float(ndtr(hi) - ndtr(lo))


def _centered_moments(lo, hi, c):
    """``int_lo^hi (y - c)^n phi(y) dy`` for n = 0, 1, 2, 3."""
    m0 = _mass_between(lo, hi)
    plo, phi_ = _phi(lo), _phi(hi)
    m1 = plo - phi_
    m2 = m0 + lo * plo - hi * phi_
    m3 = (lo * lo + 2) * plo - (hi * hi + 2) * phi_
    return (m0, m1 - c * m0, m2 - 2 * c * m1 + c * c * m0,
            m3 - 3 * c * m2 + 3 * c * c * m1 - c ** 3 * m0)


def _ramp_parts(data: SmoothedRiemannData, sigma, t, x, center=None):
    """Ramp integrals of ``f K`` and ``f (u - u1) K``.

    With ``center`` given, a third value ``int f (u - center)^2 K`` is appended.
    """
    b, eps = data.base, data.eps
    tau = sigma * math.sqrt(t)
    xr = x - b.x0
    af, bf = b.f1 + 0.5 * b.f2, b.f2 / (2 * eps)
    au, bu = b.u1 + 0.5 * b.u2, b.u2 / (2 * eps)
    c = au * t - xr
    k = 1.0 + bu * t

    ylo, yhi = sorted(((c - k * eps) / tau, (c + k * eps) / tau))
    if yhi - ylo < 0.1:
        s = eps * _GL_X
        f = af + bf * s
        du = (au - b.u1) + bu * s
        w = _GL_W * eps * np.exp(-0.5 * ((c + k * s) / tau) ** 2) * _INV_SQRT_2PI / tau
        out = [float(w @ f), float(w @ (f * du))]
        if center is not None:
            out.append(float(w @ (f * (du + b.u1 - center) ** 2)))
        return tuple(out)

    # expand around the point of the image closest to the kernel centre
    yr = min(max(0.0, ylo), yhi)
    sr = (tau * yr - c) / k
    f_r = af + bf * sr
    g_r = (au - b.u1) + bu * sr
    df = bf * tau / k
    dg = bu * tau / k
    m0, m1, m2, m3 = _centered_moments(ylo, yhi, yr)
    ak = abs(k)
    i1 = (f_r * m0 + df * m1) / ak
    i2 = (f_r * g_r * m0 + (f_r * dg + df * g_r) * m1 + df * dg * m2) / ak
    if center is None:
        return i1, i2
    h_r = g_r + b.u1 - center
    i3 = (f_r * h_r * h_r * m0 + (2 * f_r * h_r * dg + df * h_r * h_r) * m1
          + (f_r * dg * dg + 2 * df * h_r * dg) * m2 + df * dg * dg * m3) / ak
    return i1, i2, i3


def ramp_correction(data: SmoothedRiemannData, sigma: float, t: float, x: float) -> RampCorrection:
    _check(data, sigma, t)
    i1, i2 = _ramp_parts(data, sigma, t, x)
    b = data.base
    ratio = 0.5 * b.u2 + b.u2 / (b.u2 * t + 2 * data.eps) * (x - b.x0 - (b.u1 + 0.5 * b.u2) * t)
    return RampCorrection(i1, i2, ratio)


def _check(data, sigma, t):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if not data.eps > 0:
        raise ValueError("eps must be positive")


def _stream_terms(data, sigma, t, x):
    b, eps = data.base, data.eps
    tau = sigma * math.sqrt(t)
    xr = x - b.x0
    c_minus = b.u1 * t - xr - eps
    c_plus = (b.u1 + b.u2) * t - xr + eps
    left = b.f1 * gauss_cdf(c_minus / tau)
    right = (b.f1 + b.f2) * gauss_cdf(-c_plus / tau)
    return left, right


def rho_eps(data: SmoothedRiemannData, sigma: float, t: float, x: float) -> float:
    """Density for piecewise-linear data: two Gauss-CDF stream terms plus the ramp term."""
    _check(data, sigma, t)
    left, right = _stream_terms(data, sigma, t, x)
    i1, _ = _ramp_parts(data, sigma, t, x)
    return left + right + i1


def uhat_eps(data: SmoothedRiemannData, sigma: float, t: float, x: float) -> float:
    """Mean velocity for piecewise-linear data."""
    _check(data, sigma, t)
    left, right = _stream_terms(data, sigma, t, x)
    i1, i2 = _ramp_parts(data, sigma, t, x)
    den = left + right + i1
    if not den > VACUUM_FLOOR:
        raise VacuumError(f"vacuum at t={t}, x={x}", t, x)
    return data.base.u1 + (data.base.u2 * right + i2) / den


def R_eps(data: SmoothedRiemannData, sigma: float, t: float, x: float) -> float:
    """Velocity variance flux ``int f0 (u0 - uhat)^2 K ds`` for piecewise-linear data."""
    uh = uhat_eps(data, sigma, t, x)
    left, right = _stream_terms(data, sigma, t, x)
    b = data.base
    _, _, i3 = _ramp_parts(data, sigma, t, x, center=uh)
    return left * (b.u1 - uh) ** 2 + right * (b.u1 + b.u2 - uh) ** 2 + i3


def limit_sigma_fields(data: SmoothedRiemannData, t: float, x: float) -> tuple[float, float]:
    """Small-noise limit ``(density, velocity)`` at fixed ``eps``.

    Each of the three particle families (left half-line, ramp, right half-line)
    contributes where its characteristics land; at the edge of a family's image
    it contributes half. Where the ramp image collapses to a point the density
    there is infinite.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    b, eps = data.base, data.eps
    xr = x - b.x0
    x1 = b.u1 * t - eps
    x2 = (b.u1 + b.u2) * t + eps

    mass = mom = 0.0
    w = 1.0 if xr < x1 else 0.5 if xr == x1 else 0.0
    mass += w * b.f1
    mom += w * b.f1 * b.u1
    w = 1.0 if xr > x2 else 0.5 if xr == x2 else 0.0
    mass += w * (b.f1 + b.f2)
    mom += w * (b.f1 + b.f2) * (b.u1 + b.u2)

    k = 1.0 + b.u2 * t / (2 * eps)
    au = b.u1 + 0.5 * b.u2
    if k == 0.0:
        if xr == au * t:
            return math.inf, au
    else:
        s = (xr - au * t) / k
        w = 1.0 if abs(s) < eps else 0.5 if abs(s) == eps else 0.0
        if w:
            f = b.f1 + b.f2 * (s / (2 * eps) + 0.5)
            u = au + b.u2 * s / (2 * eps)
            mass += w * f / abs(k)
            mom += w * f * u / abs(k)
    if mass == 0.0:
        raise VacuumError(f"vacuum at t={t}, x={x}", t, x)
    return mass, mom / mass
