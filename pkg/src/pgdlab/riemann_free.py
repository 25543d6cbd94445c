"""Free-particle (non-interacting streams) solution of the Riemann problem.

Obtained as the double limit: noise to zero first, then the smoothing width.
Diverging data (``u2 > 0``) opens a vacuum filled by the rarefaction ``u = x/t``;
converging data (``u2 < 0``) makes the two streams overlap on a plateau that
carries an effective pressure.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

from .model import FieldSample, Provenance, RiemannData


class FanCase(str, enum.Enum):
    RAREFACTION = "rarefaction"
    CONTACT = "contact"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class RegionState:
    """Constant state of one region; ``fan=True`` means the velocity is ``x/t``."""

    rho: float
    u: float
    p: float = 0.0
    fan: bool = False

    def velocity(self, xi: float) -> float:
        return xi if self.fan else self.u

    def to_json(self) -> dict:
        return {"rho": self.rho, "u": "x/t" if self.fan else self.u, "p": self.p}


@dataclass(frozen=True)
class WaveFan:
    """Self-similar piecewise solution: ``states[i]`` lies between ``loci[i-1]`` and ``loci[i]``."""

    data: RiemannData
    case: FanCase
    loci: tuple[float, ...]
    states: tuple[RegionState, ...]
    limit_order: str = "sigma_first"

    def __post_init__(self):
        if len(self.states) != len(self.loci) + 1:
            raise ValueError("need one more state than loci")
        if any(b <= a for a, b in zip(self.loci, self.loci[1:])):
            raise ValueError(f"loci must be strictly increasing: {self.loci}")

    def to_json(self) -> str:
        return json.dumps({
            "case": self.case.value,
            "limit_order": self.limit_order,
            "data": self.data.to_config(),
            "loci": list(self.loci),
            "states": [s.to_json() for s in self.states],
        }, indent=2)


def overlap_plateau(data: RiemannData) -> RegionState:
    """Density, velocity and pressure where the two streams overlap."""
    f1, f2, u1, u2 = data.f1, data.f2, data.u1, data.u2
    rho = 2 * f1 + f2
    return RegionState(rho, u1 + (f1 + f2) / rho * u2, f1 * (f1 + f2) * u2 * u2 / rho)


def solve_free(data: RiemannData, eps_first: bool = False) -> WaveFan:
    """Wave fan of the free-particle solution.

    ``eps_first=True`` takes the smoothing limit before the noise limit. For
    diverging data this yields a single velocity jump at ``u1 + u2/2`` inside
    the vacuum, which is not stable under perturbation of the data; it is
    provided only to contrast the two limit orders.
    """
    f1, f2, u1, u2 = data.f1, data.f2, data.u1, data.u2
    left = RegionState(f1, u1)
    right = RegionState(f1 + f2, u1 + u2)
    if u1 + u2 == u1:
        # |u2| below the spacing of floats at u1: the two loci coincide
        u2 = 0.0
    if u2 > 0:
        if eps_first:
            mid = u1 + 0.5 * u2
            return WaveFan(data, FanCase.RAREFACTION, (u1, mid, u1 + u2),
                           (left, RegionState(0.0, u1), RegionState(0.0, u1 + u2), right),
                           limit_order="eps_first")
        return WaveFan(data, FanCase.RAREFACTION, (u1, u1 + u2),
                       (left, RegionState(0.0, math.nan, fan=True), right))
    if u2 < 0:
        return WaveFan(data, FanCase.OVERLAP, (u1 + u2, u1), (left, overlap_plateau(data), right),
                       limit_order="eps_first" if eps_first else "sigma_first")
    return WaveFan(data, FanCase.CONTACT, (u1,), (left, right),
                   limit_order="eps_first" if eps_first else "sigma_first")


def eval_wavefan(fan: WaveFan, t: float, x: float) -> FieldSample:
    """Evaluate the fan at ``(t, x)``.

    Exactly on a locus, density, momentum and pressure are averaged over the
    two sides and the velocity is momentum over density; this is the small-noise
    limit of the kernel fields there.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    xi = (x - fan.data.x0) / t
    for i, speed in enumerate(fan.loci):
        if xi < speed:
            st = fan.states[i]
            return FieldSample(t, x, st.rho, st.velocity(xi), st.p, Provenance.LIMIT)
        if xi == speed:
            a, b = fan.states[i], fan.states[i + 1]
            ua, ub = a.velocity(xi), b.velocity(xi)
            rho = 0.5 * (a.rho + b.rho)
            u = (0.5 * (a.rho * ua + b.rho * ub) / rho) if rho > 0 else 0.5 * (ua + ub)
            return FieldSample(t, x, rho, u, 0.5 * (a.p + b.p), Provenance.LIMIT)
    st = fan.states[-1]
    return FieldSample(t, x, st.rho, st.velocity(xi), st.p, Provenance.LIMIT)


def spurious_pressure(data: RiemannData, t: float, x: float) -> float:
    """Effective pressure of the overlap region (half its value on either edge)."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if data.u2 >= 0:
        return 0.0

    def step(y):
        return 1.0 if y > 0 else 0.5 if y == 0 else 0.0

    xr = x - data.x0
    coef = overlap_plateau(data).p
    return coef * (step(xr - (data.u1 + data.u2) * t) - step(xr - data.u1 * t))
