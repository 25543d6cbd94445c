"""Acceptance suite: twelve end-to-end checks with fixed tolerances.

Each ``criterion_N`` returns a :class:`CriterionResult`; :func:`run_all`
evaluates them in order. Both ``pgdlab acceptance`` and the test suite use
these functions, so the printed table and the tests cannot drift apart.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .characteristics import breakdown_time, classical_solution
from .closed_form import rho_eps, uhat_eps
from .exact_fields import fields, moment_residuals, second_moment_R
from .hugoniot import check_fan
from .model import RiemannData, SampledProfile, SmoothedRiemannData, tanh_smoothing
from .riemann_free import eval_wavefan, solve_free
from .riemann_sticky import check_lax, eval_sticky, jump_roots, solve_sticky, verify_jump_ode

RAREFACTION = RiemannData(1.0, 1.0, 1.0, 1.0, 0.0)
OVERLAP = RiemannData(1.0, 1.0, 0.0, -1.0, 0.0)
# floor below which two errors count as equal (both at roundoff)
ROUNDOFF = 1e-12


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.name}: {self.detail}"


def _off_locus(xs, loci, margin):
    return [x for x in xs if min(abs(x - c) for c in loci) > margin]


def _decreasing(errs, floor=ROUNDOFF):
    return all(b < a or (a <= floor and b <= floor) for a, b in zip(errs, errs[1:]))


def criterion_1() -> CriterionResult:
    sigma, eps, t = 1e-3, 1e-4, 1.0
    prof = SmoothedRiemannData(RAREFACTION, eps).profile()
    xs = _off_locus(np.linspace(-0.5, 3.5, 60), (1.0, 2.0), 10 * sigma)[:50]
    fan = solve_free(RAREFACTION)
    du = drho = 0.0
    for x in xs:
        rho, u = fields(prof, sigma, t, x)
        du = max(du, abs(u - eval_wavefan(fan, t, x).u))
        if 1.0 < x < 2.0:
            drho = max(drho, rho)
    ok = len(xs) == 50 and du < 5e-2 and drho < 5e-2
    return CriterionResult(1, "rarefaction fan", ok,
                           f"{len(xs)} points, max|u - fan| = {du:.2e}, max fan density = {drho:.2e}")


def criterion_2() -> CriterionResult:
    sigma, eps, t = 1e-3, 1e-4, 1.0
    prof = SmoothedRiemannData(OVERLAP, eps).profile()
    cases = [(np.linspace(-0.9, -0.1, 9), (3.0, -2.0 / 3.0)),
             (np.linspace(-2.0, -1.1, 5), (1.0, 0.0)),
             (np.linspace(0.1, 1.0, 5), (2.0, -1.0))]
    worst = 0.0
    for xs, (rho_ref, u_ref) in cases:
        for x in xs:
            rho, u = fields(prof, sigma, t, float(x))
            worst = max(worst, abs(rho - rho_ref), abs(u - u_ref))
    return CriterionResult(2, "overlap plateau and outer states", worst < 5e-2,
                           f"max deviation = {worst:.2e}")


def criterion_3() -> CriterionResult:
    rep = check_fan(solve_free(OVERLAP))
    mass = max(abs(r.residuals.mass) for r in rep.rows)
    without = min(abs(r.residuals.momentum) for r in rep.rows)
    with_p = max(abs(r.residuals.momentum_with_p) for r in rep.rows)
    ok = len(rep.rows) == 2 and mass < 1e-12 and without >= 0.1 and with_p < 1e-12
    return CriterionResult(3, "jump conditions need the overlap pressure", ok,
                           f"mass {mass:.1e}, momentum without p >= {without:.4f}, "
                           f"with p {with_p:.1e}")


def criterion_4() -> CriterionResult:
    # int over [c - 0.1, c + 0.1] of d_x R equals R(c + 0.1) - R(c - 0.1)
    prof, t, target = OVERLAP.profile(), 1.0, 2.0 / 3.0
    errs = []
    for sigma in (0.03, 0.01, 0.003):
        jumps = [second_moment_R(prof, sigma, t, c - 0.1) - second_moment_R(prof, sigma, t, c + 0.1)
                 for c in (0.0, -1.0)]
        # R drops by 2/3 across the right locus and rises by 2/3 across the left one
        errs.append(max(abs(jumps[0] - target), abs(jumps[1] + target)))
    ok = _decreasing(errs) and errs[-1] < 5e-2
    return CriterionResult(4, "pressure jump from the variance flux", ok,
                           "errors " + ", ".join(f"{e:.1e}" for e in errs))


def criterion_5(draws: int = 10_000, seed: int = 5) -> CriterionResult:
    sol = solve_sticky(OVERLAP)
    speed_err = abs(sol.speed - (-2.0 + math.sqrt(2.0)))
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(draws):
        f1 = rng.uniform(0.05, 5.0)
        f2 = rng.uniform(-f1 + 0.05, 5.0)
        u1 = rng.uniform(-3.0, 3.0)
        u2 = -rng.uniform(0.05, 5.0)
        d = RiemannData(f1, f2, u1, u2, 0.0)
        if sum(check_lax(d, v) for v in jump_roots(d).values()) != 1:
            bad += 1
    ode = verify_jump_ode(sol, np.linspace(0.0, 10.0, 101))
    ok = speed_err < 1e-12 and bad == 0 and ode < 1e-12
    return CriterionResult(5, "sticky delta shock", ok,
                           f"speed error {speed_err:.1e}, {bad}/{draws} draws without a unique "
                           f"admissible root, ODE residual {ode:.1e}")


def criterion_6() -> CriterionResult:
    speed = solve_sticky(RiemannData(1.0, 0.0, 1.0, -1.0, 0.0)).speed
    d = RiemannData(1.0, 0.0, 1.0, 1.0, 0.0)
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        for x in np.linspace(-1.0, 5.0, 61):
            xi = x / t
            ref = 1.0 if xi < 1.0 else 2.0 if xi > 2.0 else xi
            if xi in (1.0, 2.0):
                continue
            worst = max(worst, abs(eval_sticky(d, t, float(x)).u - ref))
    ok = abs(speed - 0.5) < 1e-12 and worst < 1e-12
    return CriterionResult(6, "Burgers case (f2 = 0)", ok,
                           f"shock speed {speed!r}, rarefaction max error {worst:.1e}")


def sine_profile() -> SampledProfile:
    return SampledProfile(np.sin, lambda s: 1.0, window=(-20.0, 20.0))


def criterion_7() -> CriterionResult:
    prof, t = sine_profile(), 0.5
    t_star = breakdown_time(prof)
    xs = np.linspace(-3.0, 3.0, 10)
    ref = [classical_solution(prof, t, float(x), t_star=t_star) for x in xs]
    errs = []
    for sigma in (0.3, 0.1, 0.03, 0.01):
        errs.append(max(abs(fields(prof, sigma, t, float(x))[1] - r) for x, r in zip(xs, ref)))
    ok = _decreasing(errs) and errs[-1] < 1e-2
    return CriterionResult(7, "smooth data converge to the classical solution", ok,
                           "errors " + ", ".join(f"{e:.1e}" for e in errs))


def criterion_8() -> CriterionResult:
    data = RiemannData(1.0, 1.0, 1.0, -1.0, 0.0)  # loci at 0 and 1
    t = 1.0
    xs = _off_locus(np.linspace(-0.95, 1.95, 20), (0.0, 1.0), 0.02)
    diffs = []
    for eps in (1e-2, 1e-3, 1e-4):
        sigma = eps / 10
        lin = SmoothedRiemannData(data, eps).profile()
        tnh = tanh_smoothing(data, eps)
        d = 0.0
        for x in xs:
            a, b = fields(lin, sigma, t, float(x)), fields(tnh, sigma, t, float(x))
            d = max(d, abs(a[0] - b[0]), abs(a[1] - b[1]))
        diffs.append(d)
    ok = len(xs) == 20 and diffs[-1] < 1e-3
    return CriterionResult(8, "limit does not depend on the smoothing", ok,
                           f"{len(xs)} points, max difference by eps: "
                           + ", ".join(f"{e:.1e}" for e in diffs))


def criterion_9() -> CriterionResult:
    prof = SmoothedRiemannData(RiemannData(1.0, 1.0, 1.0, -1.0, 0.0), 0.2).profile()
    sigma, t, h = 0.5, 1.0, 0.1
    ratios = []
    for x in (-1.0, 0.0, 0.5, 1.0, 2.0):
        coarse = moment_residuals(prof, sigma, t, x, h=h)
        fine = moment_residuals(prof, sigma, t, x, h=h / 2)
        ratios.extend(c / f for c, f in zip(coarse, fine))
    worst = min(ratios)
    return CriterionResult(9, "moment equations hold to second order", worst >= 3.5,
                           f"smallest residual ratio on halving the step = {worst:.2f}")


def _mc_case(data, probes, n, seed, sigma=0.05, eps=0.05, t=1.0, h=0.02, win=(-5.0, 5.0)):
    from .montecarlo import bootstrap_se, effective_sigma, estimate_rho, estimate_uhat, simulate

    prof = SmoothedRiemannData(data, eps).profile()
    ens = simulate(prof, sigma, t, n, seed, window=win)
    ref_prof = prof.restricted(*win)
    s_eff = effective_sigma(sigma, t, h)
    ok_rho = ok_u = 0
    for x in probes:
        x = float(x)
        rho_ref, u_ref = fields(ref_prof, s_eff, t, x)
        se_rho, se_u = bootstrap_se(ens, x, h, seed=seed)
        ok_rho += abs(estimate_rho(ens, x, h) - rho_ref) <= 3 * se_rho + 1e-10
        ok_u += abs(estimate_uhat(ens, x, h) - u_ref) <= 3 * se_u + 1e-10
    return ok_rho, ok_u


def criterion_10(n: int = 1_000_000, seed: int = 12345) -> CriterionResult:
    cases = {
        "rarefaction": _mc_case(RAREFACTION, np.linspace(-1.3, 2.4, 10), n, seed),
        "overlap": _mc_case(OVERLAP, np.linspace(-1.8, 0.8, 10), n, seed),
    }
    ok = all(r >= 9 and u >= 9 for r, u in cases.values())
    detail = "; ".join(f"{k}: rho {r}/10, u {u}/10" for k, (r, u) in cases.items())
    return CriterionResult(10, "Monte Carlo agrees with quadrature", ok, detail)


def criterion_11(sets: int = 5, seed: int = 11) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sets):
        f1 = rng.uniform(0.5, 2.0)
        data = SmoothedRiemannData(
            RiemannData(f1, rng.uniform(-0.4, 1.5), rng.uniform(-1.0, 1.0), rng.uniform(-1.5, 1.5),
                        rng.uniform(-0.5, 0.5)),
            rng.uniform(0.02, 0.3))
        sigma = rng.uniform(0.05, 0.5)
        prof = data.profile()
        for t in np.linspace(0.2, 2.0, 20):
            for x in np.linspace(-3.0, 3.0, 20):
                rho, u = fields(prof, sigma, float(t), float(x))
                worst = max(worst, abs(rho - rho_eps(data, sigma, float(t), float(x))),
                            abs(u - uhat_eps(data, sigma, float(t), float(x))))
    return CriterionResult(11, "closed form matches quadrature", worst < 1e-6,
                           f"max difference = {worst:.1e} over {sets} x 400 points")


DETERMINISM_SCENARIOS = {
    "det-quadrature": """
[scenario]
name = det-quadrature
solver = quadrature
[data]
kind = smoothed
f1 = 1
f2 = 1
u1 = 0
u2 = -1
eps = 0.05
[grid]
t = 0.5, 1
x_min = -2
x_max = 1
x_count = 13
[sweep]
sigma = 0.1
""",
    "det-montecarlo": """
[scenario]
name = det-montecarlo
solver = montecarlo
seed = 7
[data]
kind = smoothed
f1 = 1
f2 = 1
u1 = 1
u2 = 1
eps = 0.05
[grid]
t = 1
x_min = -1
x_max = 3
x_count = 9
[sweep]
sigma = 0.05
n = 20000
bandwidth = 0.05
""",
}


def criterion_12(threads=(1, 2)) -> CriterionResult:
    from .scenario import parse_scenario, run_scenario

    same = True
    count = 0
    with tempfile.TemporaryDirectory() as tmp:
        for key, text in DETERMINISM_SCENARIOS.items():
            sc = parse_scenario(text, key)
            outputs = []
            for i, th in enumerate(threads):
                out = Path(tmp) / f"{key}-{i}"
                run_scenario(sc, out_dir=out, threads=th)
                outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
            same &= all(o == outputs[0] for o in outputs[1:])
            count += sum(1 for name in outputs[0] if name.endswith(".csv"))
    return CriterionResult(12, "reruns are byte-identical", same,
                           f"{count} CSV files compared across thread counts {threads}")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12)


def run_all(echo=None) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        r = crit()
        results.append(r)
        if echo is not None:
            echo(r.line())
    return results
