"""Rankine-Hugoniot balances across a discontinuity.

Brackets are right minus left: ``[h] = h(y+0) - h(y-0)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

from .riemann_free import WaveFan

PASS_TOL = 1e-12


class State(NamedTuple):
    rho: float
    u: float
    p: float = 0.0


@dataclass(frozen=True)
class JumpStates:
    left: State
    right: State
    speed: float

    def __post_init__(self):
        if self.left.rho < 0 or self.right.rho < 0:
            raise ValueError("densities must be non-negative")


class RHResiduals(NamedTuple):
    """``[f]D - [fu]``, ``[fu]D - [fu^2]`` and ``[fu]D - [fu^2 + p]``."""

    mass: float
    momentum: float
    momentum_with_p: float
    scale: float = 1.0

    def relative(self) -> "RHResiduals":
        s = self.scale
        return RHResiduals(self.mass / s, self.momentum / s, self.momentum_with_p / s, 1.0)


def rh_residuals(j: JumpStates, mass_rate: float = 0.0, momentum_rate: float = 0.0) -> RHResiduals:
    """Mass and momentum balances across the jump.

    For a jump carrying a point mass ``m(t)`` pass ``mass_rate = dm/dt`` and
    ``momentum_rate = d(m D)/dt``; they are subtracted from the bracket
    balances. ``scale`` is ``max(1, |[fu^2]|)``.
    """
    L, R, D = j.left, j.right, j.speed
    df = R.rho - L.rho
    dfu = R.rho * R.u - L.rho * L.u
    dfu2 = R.rho * R.u ** 2 - L.rho * L.u ** 2
    dp = R.p - L.p
    return RHResiduals(
        df * D - dfu - mass_rate,
        dfu * D - dfu2 - momentum_rate,
        dfu * D - (dfu2 + dp) - momentum_rate,
        max(1.0, abs(dfu2)),
    )


def lax_entropy(j: JumpStates) -> bool:
    """Characteristics run into the jump from both sides: ``u_R <= D <= u_L``."""
    return j.right.u <= j.speed <= j.left.u


@dataclass(frozen=True)
class LocusCheck:
    speed: float
    residuals: RHResiduals
    relative: RHResiduals
    lax: bool
    passed: bool
    passed_without_p: bool


@dataclass(frozen=True)
class HugoniotReport:
    rows: tuple[LocusCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def passed_without_p(self) -> bool:
        return all(r.passed_without_p for r in self.rows)

    def to_json(self) -> str:
        return json.dumps([{
            "speed": r.speed,
            "mass": r.residuals.mass,
            "momentum": r.residuals.momentum,
            "momentum_with_p": r.residuals.momentum_with_p,
            "relative_mass": r.relative.mass,
            "relative_momentum": r.relative.momentum,
            "relative_momentum_with_p": r.relative.momentum_with_p,
            "lax": r.lax,
            "pass": r.passed,
        } for r in self.rows], indent=2)


def fan_jumps(fan: WaveFan) -> list[JumpStates]:
    """One-sided states at every locus of a fan (the fan velocity is taken at the edge)."""
    jumps = []
    for i, D in enumerate(fan.loci):
        a, b = fan.states[i], fan.states[i + 1]
        jumps.append(JumpStates(State(a.rho, a.velocity(D), a.p), State(b.rho, b.velocity(D), b.p), D))
    return jumps


def check_fan(fan: WaveFan, tol: float = PASS_TOL) -> HugoniotReport:
    rows = []
    for j in fan_jumps(fan):
        res = rh_residuals(j)
        rel = res.relative()
        rows.append(LocusCheck(
            j.speed, res, rel, lax_entropy(j),
            passed=abs(rel.mass) < tol and abs(rel.momentum_with_p) < tol,
            passed_without_p=abs(rel.mass) < tol and abs(rel.momentum) < tol,
        ))
    return HugoniotReport(tuple(rows))
