"""Parameter sweeps to CSV and analytic-vs-simulation validation reports.

CSV layout (format tag ``csv-v1``)::

    # swipt-mpe <version> csv-v1
    # scenario=<name> seed=<seed|none> trials=<n|none> variable=<v> tau=.. gamma=.. eps=..
    <variable>,<metric>...,mc_<metric>,mc_<metric>_ci...

Metrics appear in the fixed order ``p_s, p_o, p_e, p_J, joint_mpe``
(restricted to those requested) and the simulation columns only when the
sweep carries Monte Carlo settings. Numbers are written with 12 significant
digits. A cell whose quadrature failed to converge is left empty.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .analytic import METRICS, CoverageThresholds
from .errors import ConvergenceError, IoError
from .montecarlo import McSettings, apply_sweep_value, sweep_estimates
from .quadrature import DEFAULT_OPTIONS, QuadratureOptions
from .scenarios import DEFAULT_THRESHOLDS, METRIC_ORDER, Scenario, SweepSpec

CSV_FORMAT = "csv-v1"
VALIDATED_METRICS = ("p_s", "p_o", "p_e", "p_J")
VALIDATION_GRID = tuple(float(f"{v:.12g}") for v in np.linspace(0.5, 20.0, 10))


def fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def csv_columns(spec: SweepSpec) -> list[str]:
    cols = [spec.variable, *spec.metrics]
    if spec.mc is not None:
        for m in spec.metrics:
            cols += [f"mc_{m}", f"mc_{m}_ci"]
    return cols


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[list[float | None]]
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _check_writable(path: Path):
    try:
        with path.open("a"):
            pass
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None


def _analytic_row(spec: SweepSpec, scenario: Scenario, x: float, opts: QuadratureOptions):
    p, th = apply_sweep_value(scenario.params, spec.thresholds, spec.variable, x)
    values, errors = [], []
    for m in spec.metrics:
        try:
            values.append(METRICS[m](th, p, opts))
        except ConvergenceError as exc:
            values.append(None)
            errors.append(f"{spec.variable}={x:.12g} {m}: {exc}")
    return values, errors


def run_sweep(
    spec: SweepSpec,
    scenario: Scenario,
    out_path,
    opts: QuadratureOptions = DEFAULT_OPTIONS,
    workers: int | None = None,
) -> SweepResult:
    """Evaluate ``spec`` on ``scenario`` and write the CSV to ``out_path``.

    Grid points run concurrently; rows are written in grid order.

    Raises:
        IoError: ``out_path`` cannot be written (checked before any work).
    """
    out_path = Path(out_path)
    _check_writable(out_path)
    grid = spec.grid()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        analytic = list(pool.map(lambda x: _analytic_row(spec, scenario, x, opts), grid))

    mc_rows: list[list[float]] = [[] for _ in grid]
    if spec.mc is not None:
        estimates = sweep_estimates(scenario.params, spec.thresholds, spec.mc, spec.variable, grid)
        for row, est in zip(mc_rows, estimates):
            for m in spec.metrics:
                row += [est[m].value, est[m].ci_half_width]

    result = SweepResult(csv_columns(spec), [])
    for x, (values, errors), mc in zip(grid, analytic, mc_rows):
        result.rows.append([x, *values, *mc])
        result.failures.extend(errors)

    _write_csv(out_path, spec, scenario, result)
    return result


def _write_csv(path: Path, spec: SweepSpec, scenario: Scenario, result: SweepResult):
    th = spec.thresholds
    mc = spec.mc
    meta = (
        f"# scenario={scenario.name} seed={mc.seed if mc else 'none'} "
        f"trials={mc.trials if mc else 'none'} variable={spec.variable} "
        f"tau={fmt(th.tau)} gamma={fmt(th.gamma)} eps={fmt(th.eps)}"
    )
    try:
        with path.open("w", newline="") as fh:
            fh.write(f"# swipt-mpe {__version__} {CSV_FORMAT}\n{meta}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(result.columns)
            for row in result.rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None


def read_sweep_csv(path) -> tuple[dict[str, str], list[str], list[list[float | None]]]:
    """Parse a sweep CSV into ``(metadata, columns, rows)``; empty cells become ``None``."""
    meta: dict[str, str] = {}
    body = []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("#"):
                for token in line[1:].split():
                    if "=" in token:
                        k, v = token.split("=", 1)
                        meta[k] = v
                    elif token.startswith("csv-"):
                        meta["format"] = token
            else:
                body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[float(c) if c else None for c in r] for r in reader]
    return meta, columns, rows


# ---------------------------------------------------------------- validation

Tamper = Callable[[str, float, float], float]


def validate(
    scenario: Scenario,
    mc: McSettings,
    out_path,
    thresholds: CoverageThresholds = DEFAULT_THRESHOLDS,
    grid=VALIDATION_GRID,
    opts: QuadratureOptions = DEFAULT_OPTIONS,
    tamper: Tamper | None = None,
) -> dict:
    """Compare analytic ``p_s, p_o, p_e, p_J`` with simulation over a ``P_t`` grid.

    A point passes when ``|analytic - mc| <= 3 * ci``. ``tamper(metric, x,
    value)`` may replace analytic values; it exists to exercise the failure
    path. The JSON report is written to ``out_path`` and also returned.
    """
    out_path = Path(out_path)
    _check_writable(out_path)
    grid = [float(x) for x in grid]
    estimates = sweep_estimates(scenario.params, thresholds, mc, "P_t", grid)

    def point(x):
        p = scenario.params.with_(P_t=x)
        out = {}
        for m in VALIDATED_METRICS:
            try:
                out[m] = METRICS[m](thresholds, p, opts)
            except ConvergenceError:
                out[m] = None
        return out

    with ThreadPoolExecutor() as pool:
        analytic = list(pool.map(point, grid))

    report = {
        "tool": f"swipt-mpe {__version__}",
        "scenario": scenario.name,
        "trials": mc.trials,
        "seed": mc.seed,
        "thresholds": {"tau": thresholds.tau, "gamma": thresholds.gamma, "eps": thresholds.eps},
        "criterion": "|analytic - mc| <= 3 * ci (95% Wilson half-width)",
        "metrics": {},
    }
    all_pass = True
    for m in VALIDATED_METRICS:
        entries = []
        for x, a, est in zip(grid, analytic, estimates):
            value = a[m]
            if value is not None and tamper is not None:
                value = tamper(m, x, value)
            e = est[m]
            ok = value is not None and math.isfinite(value) and abs(value - e.value) <= 3.0 * e.ci_half_width
            all_pass &= ok
            entries.append({"x": x, "analytic": value, "mc": e.value, "ci": e.ci_half_width, "pass": ok})
        report["metrics"][m] = entries
    report["all_pass"] = all_pass

    try:
        out_path.write_text(json.dumps(report, indent=2) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {out_path}: {exc.strerror}") from None
    return report


__all__ = [
    "CSV_FORMAT",
    "METRIC_ORDER",
    "SweepResult",
    "csv_columns",
    "read_sweep_csv",
    "run_sweep",
    "validate",
]
