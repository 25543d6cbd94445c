"""Command line entry point: ``pgdlab run | compare | acceptance``.

Flags ``--seed``, ``--out-dir`` and ``--threads`` may also be set through the
environment variables ``PGDLAB_SEED``, ``PGDLAB_OUT_DIR`` and
``PGDLAB_THREADS``; an explicit flag wins over the environment.

Exit codes: 0 success, 1 comparison over tolerance or failed acceptance
criterion, 2 usage error (bad arguments, invalid scenario, mismatched grids).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__

ENV_PREFIX = "PGDLAB_"


def _env(name, cast):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return None
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"pgdlab: error: {ENV_PREFIX}{name}={raw!r} is not a valid value") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--out-dir", default=None, help="directory for CSV and manifest files")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default 1)")

    p = argparse.ArgumentParser(prog="pgdlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pgdlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="evaluate a scenario file")
    run.add_argument("scenario", help="path to the scenario file")

    cmp_ = sub.add_parser("compare", help="column-wise differences between two result CSVs")
    cmp_.add_argument("a")
    cmp_.add_argument("b")
    cmp_.add_argument("--tol", type=float, default=1e-6)

    sub.add_parser("acceptance", parents=[common], help="run the acceptance criteria")
    return p


def _resolve(args):
    seed = args.seed if args.seed is not None else _env("SEED", int)
    out_dir = args.out_dir if args.out_dir is not None else _env("OUT_DIR", str)
    threads = args.threads if args.threads is not None else _env("THREADS", int)
    threads = threads or 1
    if threads < 1:
        raise SystemExit("pgdlab: error: --threads must be at least 1")
    return seed, out_dir, threads


def cmd_run(args) -> int:
    from .scenario import ScenarioError, load_scenario, run_scenario

    seed, out_dir, threads = _resolve(args)
    try:
        sc = load_scenario(args.scenario)
    except (ScenarioError, OSError) as exc:
        print(f"pgdlab: usage error: {exc}", file=sys.stderr)
        return 2
    manifest = run_scenario(sc, out_dir=out_dir, seed=seed, threads=threads)
    for f in manifest["files"]:
        s = f["summary"]
        extra = ""
        if "max_abs_u_vs_fan" in s:
            extra = f"  max|u - fan| = {s['max_abs_u_vs_fan']:.3e}"
        print(f"{f['path']}: {s['rows']} rows, {s['errors']} errors{extra}")
    return 0


def cmd_compare(args) -> int:
    from .scenario import GridMismatch, compare

    try:
        rep = compare(args.a, args.b, args.tol)
    except (GridMismatch, OSError, KeyError, ValueError) as exc:
        print(f"pgdlab: structural error: {exc}", file=sys.stderr)
        return 2
    for col in ("rho", "u", "p"):
        print(f"{col:>4}: max {rep[col]['max']:.3e}  mean {rep[col]['mean']:.3e}")
    if rep["exceeds"]:
        print(f"over tolerance {args.tol:g}: {', '.join(rep['exceeds'])}")
        return 1
    print(f"within tolerance {args.tol:g}")
    return 0


def cmd_acceptance(args) -> int:
    from .acceptance import run_all

    _, out_dir, _ = _resolve(args)
    results = run_all(echo=lambda line: print(line, flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "acceptance.json"), "w") as fh:
            json.dump([r.__dict__ for r in results], fh, indent=2)
            fh.write("\n")
    return 0 if passed == len(results) else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return {"run": cmd_run, "compare": cmd_compare, "acceptance": cmd_acceptance}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
