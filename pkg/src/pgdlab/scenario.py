"""Scenario files, grid evaluation and the CSV/JSON artifacts written by ``pgdlab run``.

Scenario grammar (INI style, one ``key = value`` per line, ``;`` or ``#``
comments, lists are comma separated)::

    [scenario]
    name = rarefaction-limit        ; used in output file names
    solver = free                   ; quadrature | closed_form | free | sticky
                                    ; | characteristics | montecarlo
    seed = 1                        ; optional, default 0

    [data]
    kind = riemann                  ; riemann | smoothed | profile
    f1 = 1
    f2 = 1
    u1 = 1
    u2 = 1
    x0 = 0                          ; optional, default 0
    eps = 0.01                      ; smoothed only
    profile = sine                  ; profile only, see PROFILES

    [grid]
    t = 0.5, 1.0
    x_min = -1
    x_max = 3
    x_count = 41

    [sweep]                         ; optional
    sigma = 0.1, 0.03, 0.01         ; quadrature, closed_form, montecarlo
    eps = 0.01, 0.001               ; overrides [data] eps
    n = 100000                      ; montecarlo particle counts
    bandwidth = 0.02                ; montecarlo kernel width

    [output]                        ; optional
    dir = out
"""

from __future__ import annotations

import configparser
import csv
import itertools
import json
import math
import platform
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .characteristics import BreakdownError, breakdown_time, solve_implicit_s0
from .closed_form import R_eps, rho_eps, uhat_eps
from .exact_fields import AccuracyError, VacuumError, fields, second_moment_R
from .model import (FieldSample, Provenance, RiemannData, SampledProfile, SmoothedRiemannData)
from .riemann_free import eval_wavefan, solve_free
from .riemann_sticky import eval_sticky

SOLVERS = ("quadrature", "closed_form", "free", "sticky", "characteristics", "montecarlo")
COLUMNS = ("t", "x", "rho", "u", "p", "provenance", "error")

PROFILES = {
    "sine": lambda: SampledProfile(np.sin, lambda s: 1.0, window=(-20.0, 20.0)),
    "gaussian_bump": lambda: SampledProfile(lambda s: np.exp(-np.square(s)),
                                            lambda s: 1.0 + 0.5 * np.exp(-np.square(s)),
                                            window=(-20.0, 20.0)),
    "tanh_compression": lambda: SampledProfile(lambda s: -0.5 * np.tanh(s), lambda s: 1.0,
                                               window=(-20.0, 20.0)),
}


class ScenarioError(ValueError):
    """Invalid scenario file; the message names the section, field and line."""


@dataclass(frozen=True)
class Scenario:
    name: str
    solver: str
    data_kind: str
    data: dict
    t: tuple[float, ...]
    x_min: float
    x_max: float
    x_count: int
    sigma: tuple[float, ...] = ()
    eps: tuple[float, ...] = ()
    n: tuple[int, ...] = ()
    bandwidth: float = 0.02
    out_dir: str = "out"
    seed: int = 0
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def x_grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.x_count)


def _line_of(text: str, section: str, key: str | None) -> int | None:
    current = None
    for no, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return no
            continue
        if current == section and key is not None:
            if re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
                return no
    return None


def load_scenario(path) -> Scenario:
    text = Path(path).read_text()
    return parse_scenario(text, str(path))


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ScenarioError(f"{source}: {exc}") from None

    def fail(section, key, msg):
        line = _line_of(text, section, key)
        where = f"{source}:{line}" if line else source
        raise ScenarioError(f"{where}: [{section}] {key or ''}: {msg}".replace(" : ", ": "))

    def get(section, key, default=None, required=True):
        if cp.has_option(section, key):
            return cp.get(section, key).strip()
        if required and default is None:
            fail(section, key, "missing required field")
        return default

    def num(section, key, default=None, required=True, cast=float):
        raw = get(section, key, default, required)
        if raw is None:
            return None
        try:
            return cast(raw)
        except ValueError:
            fail(section, key, f"not a number: {raw!r}")

    def nums(section, key, cast=float, positive=True):
        raw = get(section, key, "", required=False)
        if not raw:
            return ()
        try:
            vals = tuple(cast(v) for v in raw.split(",") if v.strip())
        except ValueError:
            fail(section, key, f"not a list of numbers: {raw!r}")
        if positive and any(not v > 0 for v in vals):
            fail(section, key, "all entries must be positive")
        return vals

    for section in ("scenario", "data", "grid"):
        if not cp.has_section(section):
            raise ScenarioError(f"{source}: missing section [{section}]")

    solver = get("scenario", "solver")
    if solver not in SOLVERS:
        fail("scenario", "solver", f"unknown solver {solver!r}; expected one of {', '.join(SOLVERS)}")
    kind = get("data", "kind", "riemann")
    if kind not in ("riemann", "smoothed", "profile"):
        fail("data", "kind", f"unknown kind {kind!r}")

    data: dict = {}
    if kind == "profile":
        name = get("data", "profile")
        if name not in PROFILES:
            fail("data", "profile", f"unknown profile {name!r}; expected one of {', '.join(PROFILES)}")
        data["profile"] = name
    else:
        for key in ("f1", "f2", "u1", "u2"):
            data[key] = num("data", key)
        data["x0"] = num("data", "x0", 0.0)
        try:
            RiemannData.from_config(data)
        except ValueError as exc:
            fail("data", None, str(exc))
        if kind == "smoothed":
            data["eps"] = num("data", "eps", None, required=False)

    t = nums("grid", "t")
    if not t:
        fail("grid", "t", "missing required field")
    x_count = num("grid", "x_count", cast=int)
    if x_count < 2:
        fail("grid", "x_count", f"grid count must be at least 2, got {x_count}")
    x_min, x_max = num("grid", "x_min"), num("grid", "x_max")
    if not x_min < x_max:
        fail("grid", "x_max", "x_max must exceed x_min")

    sigma = nums("sweep", "sigma") if cp.has_section("sweep") else ()
    eps = nums("sweep", "eps") if cp.has_section("sweep") else ()
    n = nums("sweep", "n", cast=int) if cp.has_section("sweep") else ()
    bandwidth = num("sweep", "bandwidth", 0.02) if cp.has_section("sweep") else 0.02
    if not bandwidth > 0:
        fail("sweep", "bandwidth", "must be positive")

    if solver in ("quadrature", "closed_form", "montecarlo") and not sigma:
        fail("sweep", "sigma", f"solver {solver!r} needs a sigma list")
    if solver == "montecarlo" and not n:
        fail("sweep", "n", "solver 'montecarlo' needs particle counts")
    if solver == "closed_form" and kind == "profile":
        fail("data", "kind", "closed_form needs riemann or smoothed data")
    if solver in ("closed_form",) and not (eps or data.get("eps")):
        fail("sweep", "eps", "closed_form needs a smoothing width")
    if solver == "characteristics" and kind != "profile":
        fail("data", "kind", "characteristics needs a smooth named profile")
    if solver in ("free", "sticky") and kind == "profile":
        fail("data", "kind", f"{solver} needs riemann or smoothed data")
    if kind == "smoothed" and not (eps or data.get("eps")):
        fail("data", "eps", "smoothed data needs eps")

    raw = {s: dict(cp.items(s)) for s in cp.sections()}
    return Scenario(
        name=get("scenario", "name"),
        solver=solver,
        data_kind=kind,
        data=data,
        t=t,
        x_min=x_min,
        x_max=x_max,
        x_count=x_count,
        sigma=sigma,
        eps=eps,
        n=n,
        bandwidth=bandwidth,
        out_dir=get("output", "dir", "out") if cp.has_section("output") else "out",
        seed=num("scenario", "seed", 0, cast=int),
        raw=raw,
    )


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def sweep_points(sc: Scenario) -> list[dict]:
    """Every (sigma, eps, n) combination the solver actually depends on."""
    uses_sigma = sc.solver in ("quadrature", "closed_form", "montecarlo")
    uses_eps = sc.data_kind != "profile" and sc.solver in ("quadrature", "closed_form", "montecarlo")
    sigmas = sc.sigma if uses_sigma else (None,)
    if uses_eps:
        epss = sc.eps or ((sc.data.get("eps"),) if sc.data.get("eps") else (None,))
    else:
        epss = (None,)
    ns = sc.n if sc.solver == "montecarlo" else (None,)
    pts = []
    for s, e, n in itertools.product(sigmas, epss, ns):
        p = {}
        if s is not None:
            p["sigma"] = s
        if e is not None:
            p["eps"] = e
        if n is not None:
            p["n"] = n
        pts.append(p)
    return pts


def _riemann(sc: Scenario) -> RiemannData | None:
    if sc.data_kind == "profile":
        return None
    return RiemannData.from_config(sc.data)


def _profile(sc: Scenario, point: dict) -> SampledProfile:
    if sc.data_kind == "profile":
        return PROFILES[sc.data["profile"]]()
    base = _riemann(sc)
    if "eps" in point:
        return SmoothedRiemannData(base, point["eps"]).profile()
    return base.profile()


def _row(sample: FieldSample, error: str = "") -> dict:
    row = sample.as_row()
    row["error"] = error
    return row


def _error_row(t, x, provenance, exc) -> dict:
    return {"t": t, "x": x, "rho": math.nan, "u": math.nan, "p": math.nan,
            "provenance": provenance.value, "error": f"{type(exc).__name__}: {exc}"}


def _mc_window(sc: Scenario, profile: SampledProfile, sigma: float) -> tuple[float, float]:
    lo_u, hi_u = profile.velocity_bounds
    tmax = max(sc.t)
    reach = 10 * sigma * math.sqrt(tmax) + 10 * sc.bandwidth + 1.0
    lo = sc.x_min - tmax * hi_u - reach
    hi = sc.x_max - tmax * lo_u + reach
    a, b = profile.window
    return max(a, lo), min(b, hi)


def evaluate(sc: Scenario, point: dict, threads: int = 1) -> list[dict]:
    """Rows for one sweep point, in (t, x) grid order."""
    xs = sc.x_grid
    grid = [(float(t), float(x)) for t in sc.t for x in xs]
    solver = sc.solver

    if solver == "montecarlo":
        from .montecarlo import estimate_rho, estimate_uhat, simulate, _kernel

        profile = _profile(sc, point)
        window = _mc_window(sc, profile, point["sigma"])
        rows = []
        h = sc.bandwidth
        for t in sc.t:
            ens = simulate(profile, point["sigma"], float(t), point["n"], sc.seed,
                           window=window, workers=threads)
            for x in xs:
                x = float(x)
                try:
                    rho = estimate_rho(ens, x, h)
                    u = estimate_uhat(ens, x, h)
                    idx = ens.local(x, h)
                    k = ens.w[idx] * _kernel((ens.X[idx] - x) / h)
                    var = math.fsum(k * (ens.u[idx] - u) ** 2) / h
                    rows.append(_row(FieldSample(float(t), x, rho, u, var, Provenance.MONTE_CARLO)))
                except VacuumError as exc:
                    rows.append(_error_row(float(t), x, Provenance.MONTE_CARLO, exc))
        return rows

    if solver == "quadrature":
        profile = _profile(sc, point)
        sigma = point["sigma"]

        def one(tx):
            t, x = tx
            try:
                rho, u = fields(profile, sigma, t, x)
                p = second_moment_R(profile, sigma, t, x)
                return _row(FieldSample(t, x, rho, u, p, Provenance.QUADRATURE))
            except (VacuumError, AccuracyError) as exc:
                return _error_row(t, x, Provenance.QUADRATURE, exc)

    elif solver == "closed_form":
        data = SmoothedRiemannData(_riemann(sc), point["eps"])
        sigma = point["sigma"]

        def one(tx):
            t, x = tx
            try:
                return _row(FieldSample(t, x, rho_eps(data, sigma, t, x), uhat_eps(data, sigma, t, x),
                                        R_eps(data, sigma, t, x), Provenance.CLOSED_FORM))
            except VacuumError as exc:
                return _error_row(t, x, Provenance.CLOSED_FORM, exc)

    elif solver == "free":
        fan = solve_free(_riemann(sc))

        def one(tx):
            return _row(eval_wavefan(fan, *tx))

    elif solver == "sticky":
        data = _riemann(sc)

        def one(tx):
            return _row(eval_sticky(data, *tx))

    else:
        profile = _profile(sc, point)
        t_star = breakdown_time(profile)

        def one(tx):
            t, x = tx
            try:
                sol = solve_implicit_s0(profile, t, x, t_star=t_star)
                f0, u0 = profile.eval(sol.s0)
                return _row(FieldSample(t, x, float(f0) / sol.jacobian, float(u0), 0.0,
                                        Provenance.LIMIT))
            except BreakdownError as exc:
                return _error_row(t, x, Provenance.LIMIT, exc)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, grid))
    return [one(tx) for tx in grid]


def fan_margin(sc: Scenario) -> float:
    """Distance from the fan loci inside which points are left out of the fan comparison.

    One margin serves the whole sweep, so every sweep point is scored on the
    same set of grid points: three kernel widths at the largest noise level
    plus twice the largest smoothing width.
    """
    sigma = max(sc.sigma, default=0.0)
    eps = max(sc.eps or ((sc.data.get("eps"),) if sc.data.get("eps") else (0.0,)))
    return 3 * sigma * math.sqrt(max(sc.t)) + 2 * eps


def summarize(sc: Scenario, point: dict, rows: list[dict]) -> dict:
    """Error counts and, for Riemann data, the deviation from the free-particle fan."""
    out = {"rows": len(rows), "errors": sum(1 for r in rows if r["error"])}
    data = _riemann(sc)
    if data is None or sc.solver in ("free",):
        return out
    fan = solve_free(data)
    margin = fan_margin(sc)
    du = drho = 0.0
    used = 0
    for r in rows:
        if r["error"]:
            continue
        xi_pos = [data.x0 + s * r["t"] for s in fan.loci]
        if min(abs(r["x"] - p) for p in xi_pos) <= margin:
            continue
        ref = eval_wavefan(fan, r["t"], r["x"])
        du = max(du, abs(r["u"] - ref.u))
        drho = max(drho, abs(r["rho"] - ref.rho))
        used += 1
    out.update(max_abs_u_vs_fan=du, max_abs_rho_vs_fan=drho, points_vs_fan=used,
               locus_margin=margin)
    return out


def _tag(point: dict) -> str:
    if not point:
        return "limit"
    return "_".join(f"{k}={_fmt(v)}" for k, v in point.items())


def write_csv(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in COLUMNS])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for c in ("t", "x", "rho", "u", "p"):
            r[c] = float(r[c])
    return rows


def versions() -> dict:
    import scipy

    return {"pgdlab": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def run_scenario(sc: Scenario, out_dir=None, seed=None, threads: int = 1) -> dict:
    """Evaluate every sweep point and write CSVs plus ``<name>__manifest.json``."""
    if seed is not None:
        sc = Scenario(**{**sc.__dict__, "seed": int(seed)})
    out = Path(out_dir or sc.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for point in sweep_points(sc):
        rows = evaluate(sc, point, threads)
        fname = f"{sc.name}__{sc.solver}__{_tag(point)}.csv"
        write_csv(out / fname, rows)
        files.append({"path": fname, "sweep": point, "summary": summarize(sc, point, rows)})
    manifest = {
        "sweep_summary": _sweep_summary(files),
        "name": sc.name,
        "solver": sc.solver,
        "seed": sc.seed,
        "inputs": sc.raw,
        "versions": versions(),
        "files": files,
    }
    with open(out / f"{sc.name}__manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_fmt)
        fh.write("\n")
    return manifest


def _sweep_summary(files: list[dict]) -> dict:
    errs = [f["summary"].get("max_abs_u_vs_fan") for f in files]
    if len(errs) < 2 or any(e is None for e in errs):
        return {}
    return {"max_abs_u_vs_fan": errs,
            "decreasing": all(b < a for a, b in zip(errs, errs[1:]))}


class GridMismatch(ValueError):
    pass


def compare(path_a, path_b, tol: float) -> dict:
    """Per-column max/mean absolute differences between two result files."""
    a, b = read_csv(path_a), read_csv(path_b)
    if len(a) != len(b):
        raise GridMismatch(f"row counts differ: {len(a)} vs {len(b)}")
    for i, (ra, rb) in enumerate(zip(a, b)):
        if ra["t"] != rb["t"] or ra["x"] != rb["x"]:
            raise GridMismatch(f"grid differs at row {i + 1}: "
                               f"({ra['t']}, {ra['x']}) vs ({rb['t']}, {rb['x']})")
    report = {}
    for col in ("rho", "u", "p"):
        diffs = []
        for ra, rb in zip(a, b):
            va, vb = ra[col], rb[col]
            if math.isnan(va) and math.isnan(vb):
                continue
            if va == vb:
                diffs.append(0.0)
            else:
                d = abs(va - vb)
                diffs.append(math.inf if math.isnan(d) else d)
        report[col] = {
            "max": max(diffs) if diffs else 0.0,
            "mean": (math.fsum(diffs) / len(diffs)) if diffs else 0.0,
        }
    report["exceeds"] = [c for c in ("rho", "u", "p") if report[c]["max"] > tol]
    return report
