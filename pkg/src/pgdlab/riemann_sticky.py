"""Sticky-particle (adhesion) solution of the Riemann problem for converging data.

Particles meeting on the jump stick together, so the overlapped mass of the
free-particle plateau is concentrated in a point moving at constant speed.
With ``x(t) = c t`` the position equation reduces to the quadratic

    [f] c^2 - 2 [uf] c + [u^2 f] = 0,

whose discriminant is ``f1 (f1 + f2) u2^2 >= 0``. Exactly one root lies in the
window ``(u1 + u2, u1)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .hugoniot import JumpStates, State, rh_residuals
from .model import FieldSample, Provenance, RiemannData


def brackets(data: RiemannData) -> tuple[float, float, float]:
    """``([f], [uf], [u^2 f])`` across the initial jump."""
    fl, ul = data.left
    fr, ur = data.right
    return fr - fl, fr * ur - fl * ul, fr * ur * ur - fl * ul * ul


def jump_roots(data: RiemannData) -> dict[str, float]:
    """Both roots of the speed quadratic, keyed by the sign in front of the square root.

    Uses the cancellation-free pairing ``q = [uf] + sign([uf]) sqrt(disc)``,
    ``roots = q/[f], [u^2 f]/q``. When ``[f] = 0`` only the finite root exists.
    """
    df, duf, du2f = brackets(data)
    disc = duf * duf - df * du2f
    if disc < -1e-12 * max(1.0, duf * duf):
        raise ArithmeticError(f"negative discriminant {disc} for {data}")
    root = math.sqrt(max(disc, 0.0))
    sign = 1.0 if duf >= 0 else -1.0
    q = duf + sign * root
    if q == 0.0:
        # u2 == 0 and no jump in momentum: every speed is a double root
        return {"plus": duf / df if df else data.u1, "minus": duf / df if df else data.u1}
    small = du2f / q
    if df == 0:
        # the surviving root is the limit of the branch whose numerator vanishes
        return {"plus" if duf < 0 else "minus": small}
    # q carries sign(duf): q/[f] is the '+' root when duf >= 0
    big = q / df
    return {"plus": big, "minus": small} if sign > 0 else {"plus": small, "minus": big}


def check_lax(data: RiemannData, speed: float) -> bool:
    """The point mass moves strictly between the two characteristic speeds."""
    if not data.u2 < 0:
        raise ValueError("the Lax window is defined only for converging data (u2 < 0)")
    return data.u1 + data.u2 < speed < data.u1


@dataclass(frozen=True)
class DeltaShockSolution:
    data: RiemannData
    speed: float
    sign_choice: str
    mass_rate: float

    def position(self, t):
        return self.data.x0 + self.speed * np.asarray(t, dtype=float)

    def to_json(self) -> str:
        return json.dumps({"speed": self.speed, "mass_rate": self.mass_rate,
                           "sign_choice": self.sign_choice, "inputs": self.data.to_config()},
                          indent=2)


def _solution(data, speed, sign):
    df, duf, _ = brackets(data)
    return DeltaShockSolution(data, speed, sign, -duf + df * speed)


def solve_sticky(data: RiemannData, branch: str | None = None) -> DeltaShockSolution:
    """Delta shock for converging data.

    Both roots are computed and the one passing :func:`check_lax` is kept.
    ``branch`` forces a root regardless of admissibility. When ``[f] = 0`` the
    quadratic degenerates to a linear equation; its root ``[u^2 f]/(2[uf])`` is
    the regular limit of the '+' branch (``[uf] < 0`` there).
    """
    if not data.u2 < 0:
        raise ValueError("no delta shock for u2 >= 0; use riemann_free.solve_free")
    roots = jump_roots(data)
    if branch is not None:
        return _solution(data, roots[branch], branch)
    admissible = [(k, v) for k, v in roots.items() if check_lax(data, v)]
    if len(admissible) != 1:
        raise ArithmeticError(f"expected one admissible root, got {roots} for {data}")
    sign, speed = admissible[0]
    return _solution(data, speed, sign)


def shock_mass(sol: DeltaShockSolution, t: float) -> float:
    """Mass concentrated in the jump, ``m(t) = -[uf] t + [f] x(t)``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return sol.mass_rate * t


def verify_jump_ode(sol: DeltaShockSolution, t_grid) -> float:
    """Largest residual of ``([f] x - [uf] t) x' = [uf] x - [u^2 f] t`` on the grid."""
    df, duf, du2f = brackets(sol.data)
    t = np.asarray(t_grid, dtype=float)
    x = sol.speed * t
    res = (df * x - duf * t) * sol.speed - (duf * x - du2f * t)
    return float(np.max(np.abs(res)))


def singular_jump(sol: DeltaShockSolution) -> tuple[JumpStates, float, float]:
    """The jump with its point-mass source terms ``(dm/dt, d(m D)/dt)``."""
    (fl, ul), (fr, ur) = sol.data.left, sol.data.right
    j = JumpStates(State(fl, ul), State(fr, ur), sol.speed)
    return j, sol.mass_rate, sol.mass_rate * sol.speed


def generalized_rh(sol: DeltaShockSolution):
    """Balances with the point-mass terms included; all zero for the exact solution."""
    j, dm, dmom = singular_jump(sol)
    return rh_residuals(j, dm, dmom)


def material_window_balance(sol: DeltaShockSolution, t: float, half_width: float):
    """Mass and momentum in a window whose edges move with the outer states.

    Returns ``((mass_t, mass_0), (momentum_t, momentum_0))``. The window starts
    as ``[x0 - A, x0 + A]``; its edges travel at ``u1`` and ``u1 + u2`` so no
    flux crosses them and both quantities are conserved.
    """
    d = sol.data
    A = half_width
    if A <= 0:
        raise ValueError("half_width must be positive")
    (fl, ul), (fr, ur) = d.left, d.right
    x = sol.speed * t
    lo, hi = -A + ul * t, A + ur * t
    if not lo <= x <= hi:
        raise ValueError("window too small to contain the shock")
    m = shock_mass(sol, t)
    mass_t = math.fsum([fl * (x - lo), fr * (hi - x), m])
    mom_t = math.fsum([fl * ul * (x - lo), fr * ur * (hi - x), m * sol.speed])
    return (mass_t, (fl + fr) * A), (mom_t, (fl * ul + fr * ur) * A)


def eval_sticky(data: RiemannData, t: float, x: float) -> FieldSample:
    """Regular part of the sticky solution; the point mass is reported by :func:`shock_mass`.

    Diverging and contact data never collide, so the free-particle fan applies.
    """
    if data.u2 >= 0:
        from .riemann_free import eval_wavefan, solve_free

        s = eval_wavefan(solve_free(data), t, x)
        return FieldSample(t, x, s.rho, s.u, 0.0, Provenance.CLOSED_FORM)
    sol = solve_sticky(data)
    xi = (x - data.x0) / t
    (fl, ul), (fr, ur) = data.left, data.right
    if xi < sol.speed:
        return FieldSample(t, x, fl, ul, 0.0, Provenance.CLOSED_FORM)
    if xi > sol.speed:
        return FieldSample(t, x, fr, ur, 0.0, Provenance.CLOSED_FORM)
    return FieldSample(t, x, 0.5 * (fl + fr), sol.speed, 0.0, Provenance.CLOSED_FORM)
