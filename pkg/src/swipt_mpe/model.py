"""Network description and per-snapshot metrics.

All powers are linear Watts and all gains linear; dB handling lives in
:mod:`swipt_mpe.scenarios`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DomainError, SaturationError


@dataclass(frozen=True)
class RectennaModel:
    """Curve-fit constants of the non-linear RF-to-DC harvester."""

    a_bar: float = 2.463
    b_bar: float = 1.635
    c_bar: float = 0.826

    def __post_init__(self):
        if not (self.c_bar > 0 and self.b_bar > 0 and self.a_bar > self.b_bar / self.c_bar):
            raise DomainError(
                "rectenna constants need a_bar > b_bar/c_bar > 0, got "
                f"({self.a_bar}, {self.b_bar}, {self.c_bar})"
            )

    @property
    def saturation(self) -> float:
        """Supremum of the harvested power, ``a_bar - b_bar/c_bar``."""
        return self.a_bar - self.b_bar / self.c_bar


@dataclass(frozen=True)
class AntennaPattern:
    """Sectorized beam: main-lobe width ``omega`` and lobe gains ``M >= m``."""

    omega: float
    M: float
    m: float

    def __post_init__(self):
        if not 0.0 <= self.omega <= math.pi:
            raise DomainError(f"omega must lie in [0, pi], got {self.omega}")
        if not (self.M >= self.m > 0):
            raise DomainError(f"need M >= m > 0, got M={self.M}, m={self.m}")


@dataclass(frozen=True)
class GainClass:
    gain: float
    prob: float


@dataclass(frozen=True)
class NetworkParams:
    """Everything that defines a network scenario, in linear units."""

    lam: float
    p_L: float
    alpha: float
    mu: int
    d0: float
    P_t: float
    antenna: AntennaPattern
    N0: float
    N_C: float
    rho: float
    rectenna: RectennaModel = field(default_factory=RectennaModel)

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"lam must be >= 0, got {self.lam}")
        if not 0.0 <= self.p_L <= 1.0:
            raise DomainError(f"p_L must lie in [0, 1], got {self.p_L}")
        if not self.alpha > 2.0:
            raise DomainError(f"alpha must exceed 2, got {self.alpha}")
        if isinstance(self.mu, bool) or int(self.mu) != self.mu or self.mu < 1:
            raise DomainError(f"mu must be a positive integer, got {self.mu!r}")
        object.__setattr__(self, "mu", int(self.mu))
        if not self.d0 > 0:
            raise DomainError(f"d0 must be positive, got {self.d0}")
        if not self.P_t > 0:
            raise DomainError(f"P_t must be positive, got {self.P_t}")
        if self.N0 < 0 or self.N_C < 0:
            raise DomainError("noise powers must be non-negative")
        if not 0.0 < self.rho < 1.0:
            raise DomainError(f"rho must lie in (0, 1), got {self.rho}")

    @property
    def P0(self) -> float:
        """Serving-link transmit power including the aligned gain ``M**2``."""
        return self.antenna.M ** 2 * self.P_t

    def with_(self, **changes) -> "NetworkParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class Realization:
    """One network snapshot seen from the typical receiver.

    ``distances``, ``gains`` and ``fades`` describe the LOS interferers only.
    """

    h0: float
    distances: np.ndarray = field(default_factory=lambda: np.empty(0))
    gains: np.ndarray = field(default_factory=lambda: np.empty(0))
    fades: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        for name in ("distances", "gains", "fades"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.distances.shape == self.gains.shape == self.fades.shape):
            raise DomainError("interferer arrays must have equal length")
        if np.any(self.distances <= 0):
            raise DomainError("interferer distances must be positive")
        if self.h0 < 0 or np.any(self.fades < 0):
            raise DomainError("fades must be non-negative")

    @classmethod
    def from_interferers(cls, h0: float, interferers: Sequence[tuple[float, float, float]]):
        """Build from ``(distance, gain, fade)`` triples."""
        if len(interferers) == 0:
            return cls(h0)
        d, g, h = zip(*interferers)
        return cls(h0, np.array(d), np.array(g), np.array(h))

    def __len__(self):
        return self.distances.size


def gain_pmf(antenna: AntennaPattern) -> tuple[GainClass, GainClass, GainClass]:
    """Link-gain classes ``M^2, Mm, m^2`` with their probabilities."""
    w = antenna.omega / math.pi
    M, m = antenna.M, antenna.m
    probs = (w * w, 2.0 * w * (1.0 - w), (1.0 - w) ** 2)
    return tuple(GainClass(g, q) for g, q in zip((M * M, M * m, m * m), probs))


def _interference_sum(r: Realization, p: NetworkParams, exponent: float) -> float:
    if len(r) == 0:
        return 0.0
    return float(p.P_t * np.sum(r.gains * r.fades * r.distances ** (-exponent)))


def interference(r: Realization, p: NetworkParams) -> float:
    """Aggregate interference power at the typical receiver."""
    return _interference_sum(r, p, p.alpha)


def received_power(r: Realization, p: NetworkParams) -> float:
    """Aggregate received RF power: serving signal plus interference (no noise)."""
    return p.P0 * r.h0 * p.d0 ** (-p.alpha) + _interference_sum(r, p, p.alpha)


def sinr_of(r: Realization, p: NetworkParams) -> float:
    """SINR after power splitting; the circuit noise ``N_C`` is not scaled by ``rho``."""
    signal = p.P0 * r.h0 * p.d0 ** (-p.alpha)
    denom = p.rho * (p.N0 + interference(r, p)) + p.N_C
    if denom == 0.0:
        return math.inf if signal > 0 else 0.0
    return p.rho * signal / denom


def harvested_energy(P_r, rho: float, rect: RectennaModel):
    """Harvested DC power for received RF power ``P_r`` (scalar or array)."""
    u = (1.0 - rho) * np.asarray(P_r, dtype=float)
    out = (rect.a_bar * u + rect.b_bar) / (u + rect.c_bar) - rect.b_bar / rect.c_bar
    return float(out) if out.ndim == 0 else out


def harvest_threshold(eps: float, rho: float, rect: RectennaModel) -> float:
    """Received power at which the harvester outputs exactly ``eps``.

    Raises:
        SaturationError: if ``eps`` is at or above ``rect.saturation``.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    if eps >= rect.saturation:
        raise SaturationError(
            f"eps={eps:.6g} W must stay below the harvester saturation "
            f"a_bar - b_bar/c_bar = {rect.saturation:.4f} W"
        )
    return rect.c_bar * eps / ((1.0 - rho) * (rect.saturation - eps))


def mpe_of(r: Realization, p: NetworkParams) -> float:
    """Incident power density at the receiver (point-source model), W/m^2."""
    serving = p.P0 * r.h0 * p.d0 ** (-p.alpha - 2.0)
    return (serving + _interference_sum(r, p, p.alpha + 2.0)) / (4.0 * math.pi)
