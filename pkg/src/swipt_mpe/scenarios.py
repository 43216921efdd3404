"""Scenario presets and the key-value configuration format.

Config files are INI-style with three sections::

    [scenario]
    preset = mmwave        # mmwave | uhf | custom
    P_t = 10 W
    N0 = -117 dB           # dB means dBW; dBm, W and mW are also accepted

    [sweep]
    variable = P_t         # P_t | tau | p_L | lambda
    start = 0.1
    stop = 20
    steps = 50
    metrics = p_s, p_o, p_e, p_J, joint_mpe
    tau = 0.2              # W/m^2
    gamma = -10 dB
    eps = -5 dB

    [mc]                   # optional; omit to skip simulation columns
    trials = 100000
    seed = 1

Keys are case-insensitive, so the main- and side-lobe gains are spelled
``M_main`` and ``m_side``. Every numeric field may carry a unit suffix. Bare
numbers use the field's default unit: ``dB`` for ``M_main``, ``m_side``,
``N0``, ``N_C``, ``gamma`` and ``eps``; ``W`` for ``P_t``; radians for
``omega``; plain numbers elsewhere.
Power in dB is read as dBW (``10**(x/10)`` W).
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytic import CoverageThresholds
from .errors import DomainError, ParseError, RangeError, SwiptError
from .model import AntennaPattern, NetworkParams, RectennaModel
from .montecarlo import McSettings

METRIC_ORDER = ("p_s", "p_o", "p_e", "p_J", "joint_mpe")
SWEEP_VARIABLES = ("P_t", "tau", "p_L", "lambda")


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class Scenario:
    name: str
    params: NetworkParams


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    thresholds: CoverageThresholds
    metrics: tuple[str, ...] = METRIC_ORDER
    mc: McSettings | None = None
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise RangeError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if self.steps < 2:
            raise RangeError("steps must be >= 2")
        if not self.start < self.stop:
            raise RangeError("start must be smaller than stop")
        unknown = set(self.metrics) - set(METRIC_ORDER)
        if unknown or not self.metrics:
            raise RangeError(f"metrics must be a non-empty subset of {METRIC_ORDER}")
        if self.spacing not in ("linear", "log"):
            raise RangeError("spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.start <= 0:
            raise RangeError("log spacing needs start > 0")
        object.__setattr__(self, "metrics", tuple(m for m in METRIC_ORDER if m in self.metrics))

    def grid(self) -> list[float]:
        """Grid values rounded to 12 significant digits (what the CSV stores)."""
        if self.spacing == "log":
            raw = np.geomspace(self.start, self.stop, self.steps)
        else:
            raw = np.linspace(self.start, self.stop, self.steps)
        return [float(f"{v:.12g}") for v in raw]


# Shared values of the two published parameter sets; thresholds are in dB.
_SHARED = dict(lam=0.1, alpha=3.0, d0=5.0, P_t=10.0, omega=math.pi / 6, m_db=-10.0, N_C_db=0.0, rho=0.5)
_PRESETS = {
    "mmwave": dict(_SHARED, M_db=10.0, mu=5, N0_db=-117.0, p_L=0.8),
    "uhf": dict(_SHARED, M_db=0.0, mu=1, N0_db=-127.0, p_L=1.0),
}
DEFAULT_THRESHOLDS = CoverageThresholds(tau=0.2, gamma=db_to_linear(-10.0), eps=db_to_linear(-5.0))


def _build(d: dict) -> NetworkParams:
    return NetworkParams(
        lam=d["lam"],
        p_L=d["p_L"],
        alpha=d["alpha"],
        mu=d["mu"],
        d0=d["d0"],
        P_t=d["P_t"],
        antenna=AntennaPattern(d["omega"], db_to_linear(d["M_db"]), db_to_linear(d["m_db"])),
        N0=db_to_linear(d["N0_db"]),
        N_C=db_to_linear(d["N_C_db"]),
        rho=d["rho"],
        rectenna=d.get("rectenna", RectennaModel()),
    )


def preset(name: str) -> Scenario:
    """Published mmWave or UHF scenario (``P_t`` defaults to 10 W)."""
    try:
        return Scenario(name, _build(_PRESETS[name]))
    except KeyError:
        raise RangeError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}") from None


def preset_names() -> list[str]:
    return sorted(_PRESETS)


# ---------------------------------------------------------------- parsing

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/^0-9]*)\s*$")

_POWER_UNITS = {
    "w": lambda x: x,
    "mw": lambda x: x * 1e-3,
    "db": db_to_linear,
    "dbw": db_to_linear,
    "dbm": lambda x: db_to_linear(x - 30.0),
}
_GAIN_UNITS = {"db": db_to_linear, "dbi": db_to_linear, "lin": lambda x: x, "linear": lambda x: x}
_ANGLE_UNITS = {"rad": lambda x: x, "deg": math.radians}
_DENSITY_UNITS = {"w/m2": lambda x: x, "w/m^2": lambda x: x}
_PLAIN = {"": lambda x: x}

# key -> (target name, unit table, default unit)
_SCENARIO_KEYS = {
    "lambda": ("lam", _PLAIN, ""),
    "p_l": ("p_L", _PLAIN, ""),
    "alpha": ("alpha", _PLAIN, ""),
    "mu": ("mu", _PLAIN, ""),
    "d0": ("d0", {"m": lambda x: x, **_PLAIN}, ""),
    "p_t": ("P_t", _POWER_UNITS, "w"),
    "omega": ("omega", _ANGLE_UNITS, "rad"),
    "m_main": ("M", _GAIN_UNITS, "db"),
    "m_side": ("m", _GAIN_UNITS, "db"),
    "n0": ("N0", _POWER_UNITS, "db"),
    "n_c": ("N_C", _POWER_UNITS, "db"),
    "rho": ("rho", _PLAIN, ""),
    "a_bar": ("a_bar", _PLAIN, ""),
    "b_bar": ("b_bar", _PLAIN, ""),
    "c_bar": ("c_bar", _PLAIN, ""),
}
_THRESHOLD_KEYS = {
    "tau": ("tau", _DENSITY_UNITS, "w/m2"),
    "gamma": ("gamma", _GAIN_UNITS, "db"),
    "eps": ("eps", _POWER_UNITS, "db"),
}
_SWEEP_KEYS = {"variable", "start", "stop", "steps", "metrics", "spacing", *_THRESHOLD_KEYS}
_MC_KEYS = {"trials", "seed", "disk_radius", "parallel", "far_field", "workers"}


def _key_lines(path: Path) -> dict[tuple[str, str], int]:
    lines = {}
    section = ""
    for no, raw in enumerate(path.read_text().splitlines(), 1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip().lower()
        elif "=" in s and not s.startswith(("#", ";")):
            lines.setdefault((section, s.split("=", 1)[0].strip().lower()), no)
    return lines


class _Reader:
    def __init__(self, path: Path, cp: configparser.ConfigParser):
        self.path = path
        self.cp = cp
        self.lines = _key_lines(path)

    def where(self, section: str, key: str) -> str:
        no = self.lines.get((section, key))
        loc = f"{self.path}:{no}" if no else str(self.path)
        return f"{loc}: [{section}] {key}"

    def number(self, section, key, units, default_unit):
        raw = self.cp[section][key]
        m = _NUMBER.match(raw)
        if not m:
            raise ParseError(f"{self.where(section, key)}: cannot parse {raw!r} as a number")
        unit = (m.group(2) or default_unit).lower()
        if unit not in units:
            raise ParseError(
                f"{self.where(section, key)}: unit {m.group(2)!r} not allowed "
                f"(use one of {sorted(u for u in units if u)})"
            )
        return units[unit](float(m.group(1)))


def load_config(path) -> tuple[Scenario, SweepSpec]:
    """Read a config file into a scenario and a sweep description.

    Raises:
        ParseError: malformed file, unknown key or unit, unparseable value.
        RangeError: a value that violates a model invariant.
    """
    path = Path(path)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with path.open() as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ParseError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{path}: cannot read config ({exc.strerror})") from None
    rd = _Reader(path, cp)

    for section, allowed in (("scenario", set(_SCENARIO_KEYS) | {"preset"}), ("sweep", _SWEEP_KEYS), ("mc", _MC_KEYS)):
        if section in cp:
            for key in cp[section]:
                if key == "m":
                    # keys are case-folded, so M and m would collide
                    raise ParseError(f"{rd.where(section, key)}: ambiguous; use M_main / m_side")
                if key not in allowed:
                    raise ParseError(f"{rd.where(section, key)}: unknown key")
    for section in cp.sections():
        if section not in ("scenario", "sweep", "mc"):
            raise ParseError(f"{path}: unknown section [{section}]")
    if "scenario" not in cp or "sweep" not in cp:
        raise ParseError(f"{path}: [scenario] and [sweep] sections are required")

    scenario = _read_scenario(rd)
    spec = _read_sweep(rd, scenario.params)
    return scenario, spec


def _read_scenario(rd: _Reader) -> Scenario:
    sec = rd.cp["scenario"]
    name = sec.get("preset", "custom").strip().lower()
    if name == "custom":
        missing = [k for k in _SCENARIO_KEYS if k not in sec and k not in ("a_bar", "b_bar", "c_bar")]
        if missing:
            raise ParseError(f"{rd.path}: custom scenario is missing keys {missing}")
        base = {}
    elif name in _PRESETS:
        p = preset(name).params
        base = dict(
            lam=p.lam, p_L=p.p_L, alpha=p.alpha, mu=p.mu, d0=p.d0, P_t=p.P_t,
            omega=p.antenna.omega, M=p.antenna.M, m=p.antenna.m, N0=p.N0, N_C=p.N_C, rho=p.rho,
        )
    else:
        raise RangeError(f"{rd.where('scenario', 'preset')}: unknown preset {name!r}")

    values = dict(base)
    rect = {}
    for key in sec:
        if key == "preset":
            continue
        target, units, default = _SCENARIO_KEYS[key]
        v = rd.number("scenario", key, units, default)
        if target in ("a_bar", "b_bar", "c_bar"):
            rect[target] = v
        else:
            values[target] = v

    if not values["alpha"] > 2:
        raise RangeError(f"{rd.where('scenario', 'alpha')}: alpha must exceed 2 (got {values['alpha']:g})")
    if values["mu"] != int(values["mu"]) or values["mu"] < 1:
        raise RangeError(f"{rd.where('scenario', 'mu')}: mu must be a positive integer")
    try:
        rectenna = RectennaModel(**rect)
        params = NetworkParams(
            lam=values["lam"], p_L=values["p_L"], alpha=values["alpha"], mu=int(values["mu"]),
            d0=values["d0"], P_t=values["P_t"],
            antenna=AntennaPattern(values["omega"], values["M"], values["m"]),
            N0=values["N0"], N_C=values["N_C"], rho=values["rho"], rectenna=rectenna,
        )
    except DomainError as exc:
        raise RangeError(f"{rd.path}: [scenario] {exc}") from None
    return Scenario(name, params)


def _read_sweep(rd: _Reader, params: NetworkParams) -> SweepSpec:
    sec = rd.cp["sweep"]
    for key in ("variable", "start", "stop", "steps"):
        if key not in sec:
            raise ParseError(f"{rd.path}: [sweep] is missing key {key!r}")
    variable = sec["variable"].strip()
    canonical = {v.lower(): v for v in SWEEP_VARIABLES}
    if variable.lower() not in canonical:
        raise RangeError(f"{rd.where('sweep', 'variable')}: must be one of {SWEEP_VARIABLES}")
    variable = canonical[variable.lower()]

    th = {}
    defaults = DEFAULT_THRESHOLDS.__dict__
    for key, (target, units, default) in _THRESHOLD_KEYS.items():
        th[target] = rd.number("sweep", key, units, default) if key in sec else defaults[target]
    if th["eps"] >= params.rectenna.saturation:
        raise RangeError(
            f"{rd.where('sweep', 'eps')}: eps={th['eps']:.4g} W must stay below the "
            f"harvester saturation a_bar - b_bar/c_bar = {params.rectenna.saturation:.4f} W"
        )
    if th["gamma"] <= 0 or th["tau"] < 0:
        raise RangeError(f"{rd.path}: [sweep] gamma must be positive and tau non-negative")

    try:
        steps = int(sec["steps"])
    except ValueError:
        raise ParseError(f"{rd.where('sweep', 'steps')}: not an integer") from None
    metrics = tuple(m.strip() for m in sec.get("metrics", ",".join(METRIC_ORDER)).split(",") if m.strip())
    unknown = [m for m in metrics if m not in METRIC_ORDER]
    if unknown:
        raise ParseError(f"{rd.where('sweep', 'metrics')}: unknown metrics {unknown}")

    mc = _read_mc(rd) if "mc" in rd.cp else None
    try:
        return SweepSpec(
            variable=variable,
            start=rd.number("sweep", "start", _ANY, ""),
            stop=rd.number("sweep", "stop", _ANY, ""),
            steps=steps,
            thresholds=CoverageThresholds(**th),
            metrics=metrics,
            mc=mc,
            spacing=sec.get("spacing", "linear").strip().lower(),
        )
    except SwiptError as exc:
        raise RangeError(f"{rd.path}: [sweep] {exc}") from None


_ANY = {**_PLAIN, "w": lambda x: x, "w/m2": lambda x: x}


def _read_mc(rd: _Reader) -> McSettings:
    sec = rd.cp["mc"]
    kw = {}
    try:
        if "trials" in sec:
            kw["trials"] = int(sec["trials"])
        if "seed" in sec:
            kw["seed"] = int(sec["seed"])
        if "workers" in sec:
            kw["workers"] = int(sec["workers"])
        if "disk_radius" in sec:
            kw["disk_radius"] = rd.number("mc", "disk_radius", {"m": lambda x: x, **_PLAIN}, "")
        for flag in ("parallel", "far_field"):
            if flag in sec:
                kw[flag] = sec.getboolean(flag)
    except ValueError as exc:
        raise ParseError(f"{rd.path}: [mc] {exc}") from None
    try:
        return McSettings(**kw)
    except DomainError as exc:
        raise RangeError(f"{rd.path}: [mc] {exc}") from None
