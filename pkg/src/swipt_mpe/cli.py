"""Command-line entry point.

Exit codes: 0 success, 1 validation failure or non-converged sweep cell,
2 usage, configuration or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import __version__
from .errors import IoError, ParseError, RangeError, SwiptError
from .montecarlo import McSettings
from .quadrature import DEFAULT_OPTIONS, QuadratureOptions
from .scenarios import load_config, preset, preset_names
from .sweep import VALIDATED_METRICS, run_sweep, validate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swipt-mpe", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate a parameter sweep and write CSV")
    sw.add_argument("--config", required=True, help="scenario/sweep config file")
    sw.add_argument("--out", required=True, help="output CSV path")
    sw.add_argument("--trials", type=int, help="add or override Monte Carlo trials")
    sw.add_argument("--seed", type=int, help="add or override the Monte Carlo seed")
    sw.add_argument("--workers", type=int, help="threads for grid points")
    sw.add_argument("--abs-tol", type=float, default=DEFAULT_OPTIONS.abs_tol, help="quadrature tolerance")
    sw.add_argument("--max-panels", type=int, default=DEFAULT_OPTIONS.max_panels, help="quadrature panel budget")

    va = sub.add_parser("validate", help="analytic-vs-Monte-Carlo check over a P_t grid")
    va.add_argument("--scenario", required=True, choices=preset_names())
    va.add_argument("--trials", type=int, default=100_000)
    va.add_argument("--seed", type=int, default=McSettings.seed)
    va.add_argument("--out", required=True, help="output JSON path")
    va.add_argument("--parallel", action="store_true", help="simulate blocks on threads")
    # test hook: add OFFSET to every analytic value of METRIC before comparison
    va.add_argument("--tamper", metavar="METRIC=OFFSET", help=argparse.SUPPRESS)

    pr = sub.add_parser("preset", help="list or show built-in scenarios")
    g = pr.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true", help="print preset names")
    g.add_argument("--show", metavar="NAME", help="print a preset's parameters in linear units")
    return ap


def _cmd_sweep(args) -> int:
    scenario, spec = load_config(args.config)
    if args.trials is not None or args.seed is not None:
        base = spec.mc or McSettings()
        changes = {k: v for k, v in (("trials", args.trials), ("seed", args.seed)) if v is not None}
        try:
            mc = dataclasses.replace(base, **changes)
        except SwiptError as exc:
            raise RangeError(str(exc)) from None
        spec = dataclasses.replace(spec, mc=mc)
    try:
        opts = QuadratureOptions(abs_tol=args.abs_tol, max_panels=args.max_panels)
    except SwiptError as exc:
        raise RangeError(str(exc)) from None
    result = run_sweep(spec, scenario, args.out, opts=opts, workers=args.workers)
    for msg in result.failures:
        print(f"swipt-mpe: no convergence at {msg}", file=sys.stderr)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return EXIT_OK if result.ok else EXIT_FAIL


def _parse_tamper(spec: str):
    metric, _, offset = spec.partition("=")
    if metric not in VALIDATED_METRICS:
        raise ParseError(f"--tamper: unknown metric {metric!r}")
    try:
        delta = float(offset)
    except ValueError:
        raise ParseError(f"--tamper: bad offset {offset!r}") from None
    return lambda m, x, v: v + delta if m == metric else v


def _cmd_validate(args) -> int:
    try:
        mc = McSettings(trials=args.trials, seed=args.seed, parallel=args.parallel)
    except SwiptError as exc:
        raise RangeError(str(exc)) from None
    tamper = _parse_tamper(args.tamper) if args.tamper else None
    report = validate(preset(args.scenario), mc, args.out, tamper=tamper)
    failed = [
        (m, e["x"]) for m, entries in report["metrics"].items() for e in entries if not e["pass"]
    ]
    for m, x in failed:
        print(f"swipt-mpe: {m} disagrees with simulation at P_t={x:g} W", file=sys.stderr)
    total = sum(len(v) for v in report["metrics"].values())
    print(f"{total - len(failed)}/{total} points pass; report in {args.out}")
    return EXIT_OK if report["all_pass"] else EXIT_FAIL


def _cmd_preset(args) -> int:
    if args.list:
        print("\n".join(preset_names()))
        return EXIT_OK
    p = preset(args.show).params
    rows = [
        ("lambda", p.lam), ("p_L", p.p_L), ("alpha", p.alpha), ("mu", p.mu), ("d0", p.d0),
        ("P_t", p.P_t), ("omega", p.antenna.omega), ("M", p.antenna.M), ("m", p.antenna.m),
        ("N0", p.N0), ("N_C", p.N_C), ("rho", p.rho),
    ]
    for k, v in rows:
        print(f"{k:8s} {v:.12g}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"sweep": _cmd_sweep, "validate": _cmd_validate, "preset": _cmd_preset}[args.command]
    try:
        return handler(args)
    except (ParseError, RangeError, IoError) as exc:
        print(f"swipt-mpe: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SwiptError as exc:
        # e.g. a threshold that is invalid for the chosen scenario
        print(f"swipt-mpe: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
