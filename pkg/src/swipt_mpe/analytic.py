"""Closed-form safety and coverage probabilities of the SWIPT network.

Every probability reduces to a Gil-Pelaez integral over the characteristic
function (CF) of the aggregate interference, a product of one factor per
thinned gain class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateError, DomainError, SaturationError
from .model import NetworkParams, gain_pmf, harvest_threshold
from .quadrature import (
    DEFAULT_OPTIONS,
    QuadratureOptions,
    clamp_probability,
    gil_pelaez_cdf,
    integrate_im_over_t,
    scaled_options,
)
from .special_fn import beta_ext, cpow_principal, gamma_c, upper_gamma_reg

__all__ = [
    "CoverageThresholds",
    "METRICS",
    "QuadratureOptions",
    "coverage_metrics",
    "energy_coverage",
    "gil_pelaez_cdf",
    "info_coverage",
    "interference_cf",
    "joint_coverage",
    "joint_with_mpe",
    "mpe_prob",
    "mpe_prob_asymptotic",
    "no_interference_joint",
    "optimal_power",
    "psi",
]


@dataclass(frozen=True)
class CoverageThresholds:
    """MPE limit ``tau`` (W/m^2), linear SINR threshold ``gamma``, energy ``eps`` (W)."""

    tau: float
    gamma: float
    eps: float

    def __post_init__(self):
        for name in ("tau", "gamma", "eps"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")


def interference_cf(t, lam: float, P: float, a_exp: float, mu: int):
    """CF of the interference from a PPP of density ``lam`` and power ``P``.

    Vectorized over ``t``. Each link has unit-mean gamma(``mu``) fading and
    path loss ``d**(-a_exp)``.
    """
    if not a_exp > 2.0:
        raise DomainError(f"path-loss exponent must exceed 2, got {a_exp}")
    t = np.asarray(t, dtype=float)
    if lam == 0.0:
        out = np.ones_like(t, dtype=complex)
    else:
        coeff = 2.0 * math.pi * lam / a_exp * beta_ext(-2.0 / a_exp, mu + 2.0 / a_exp)
        out = np.exp(coeff * cpow_principal(-1j * t * P / mu, 2.0 / a_exp))
    return complex(out) if out.ndim == 0 else out


def _classes(p: NetworkParams):
    """Thinned ``(density, power)`` pairs of the LOS interferers."""
    return [
        (p.p_L * c.prob * p.lam, c.gain * p.P_t)
        for c in gain_pmf(p.antenna)
        if c.prob > 0.0
    ]


def psi(t, p: NetworkParams, a_exp: float):
    """CF of the total LOS interference (three independent thinned PPPs)."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t, dtype=complex)
    for lam_i, P_i in _classes(p):
        out = out * interference_cf(t, lam_i, P_i, a_exp, p.mu)
    return complex(out) if out.ndim == 0 else out


def _serving_cf(scale: float, mu: int):
    # CF of scale * h with h ~ gamma(mu, 1/mu); integer power, so no branch issue
    def cf(t):
        return (1.0 - 1j * t * scale / mu) ** (-mu)
    return cf


def _mpe_cf(p: NetworkParams):
    a = p.alpha + 2.0
    serving = _serving_cf(p.P0 * p.d0 ** (-a), p.mu)
    return lambda t: psi(t, p, a) * serving(t)


def mpe_prob(tau: float, p: NetworkParams, opts: QuadratureOptions = DEFAULT_OPTIONS) -> float:
    """Probability that the incident power density stays below ``tau``."""
    if tau < 0:
        raise DomainError("tau must be non-negative")
    if tau == 0:
        return 0.0
    return gil_pelaez_cdf(_mpe_cf(p), 4.0 * math.pi * tau, opts, p.P0 * p.d0 ** (-p.alpha - 2.0))


def mpe_prob_asymptotic(
    tau: float,
    p: NetworkParams,
    opts: QuadratureOptions = DEFAULT_OPTIONS,
    serving: str = "first_order",
) -> float:
    """Large-``mu`` approximation of :func:`mpe_prob`.

    The interference CF uses the ``mu -> inf`` limit of the beta factor. The
    serving term is ``(1 - j t c0)**-1`` with ``c0 = P0 d0^-(alpha+2)`` by
    default (``serving="first_order"``), which sits below the exact
    probability at the published operating points. ``serving="limit"`` uses
    the exact limit ``exp(j t c0)`` of a deterministic serving link instead.
    """
    if serving not in ("first_order", "limit"):
        raise DomainError(f"serving must be 'first_order' or 'limit', got {serving!r}")
    if tau < 0:
        raise DomainError("tau must be non-negative")
    if tau == 0:
        return 0.0
    a = p.alpha + 2.0
    weight = sum(lam_i * P_i ** (2.0 / a) for lam_i, P_i in _classes(p))
    coeff = 2.0 * math.pi * gamma_c(-2.0 / a).real / a * weight
    c0 = p.P0 * p.d0 ** (-a)

    def cf(t):
        interf = np.exp(coeff * cpow_principal(-1j * t, 2.0 / a))
        if serving == "limit":
            return interf * np.exp(1j * t * c0)
        return interf / (1.0 - 1j * t * c0)

    return gil_pelaez_cdf(cf, 4.0 * math.pi * tau, opts, c0)


def _noise_floor(p: NetworkParams) -> float:
    return p.N_C / p.rho + p.N0


def info_coverage(gamma: float, p: NetworkParams, opts: QuadratureOptions = DEFAULT_OPTIONS) -> float:
    """``P{SINR > gamma}``."""
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    # SINR > gamma  <=>  I - S/gamma < -(N_C/rho + N0)
    scale = p.P0 * p.d0 ** (-p.alpha) / gamma
    neg_signal = _serving_cf(-scale, p.mu)
    cf = lambda t: psi(t, p, p.alpha) * neg_signal(t)
    return gil_pelaez_cdf(cf, -_noise_floor(p), opts, scale)


def energy_coverage(eps: float, p: NetworkParams, opts: QuadratureOptions = DEFAULT_OPTIONS) -> float:
    """``P{E > eps}`` for the non-linear harvester."""
    delta = harvest_threshold(eps, p.rho, p.rectenna)
    if delta == 0.0:
        return 1.0
    scale = p.P0 * p.d0 ** (-p.alpha)
    signal = _serving_cf(scale, p.mu)
    cf = lambda t: psi(t, p, p.alpha) * signal(t)
    return 1.0 - gil_pelaez_cdf(cf, delta, opts, scale)


def _check_eps(eps: float, p: NetworkParams):
    if eps >= p.rectenna.saturation:
        raise SaturationError(
            f"eps={eps:.6g} W must stay below the harvester saturation "
            f"{p.rectenna.saturation:.4f} W"
        )


def joint_coverage(th: CoverageThresholds, p: NetworkParams, opts: QuadratureOptions = DEFAULT_OPTIONS) -> float:
    """``P{SINR > gamma, E > eps}``, conditioning on the serving fade."""
    if not th.gamma > 0:
        raise DomainError("gamma must be positive")
    _check_eps(th.eps, p)
    mu = p.mu
    g = th.gamma
    delta = harvest_threshold(th.eps, p.rho, p.rectenna)
    noise = _noise_floor(p)
    C = p.P0 * p.d0 ** (-p.alpha)
    # serving fade above xi is necessary for the two events to overlap
    xi = g / (C * (1.0 + g)) * (delta + noise)

    def parts(t):
        energy = upper_gamma_reg(mu, xi * (mu - 1j * t * C)) / (
            np.exp(1j * t * delta) * (1.0 - 1j * t * C / mu) ** mu
        )
        info = np.exp(1j * t * noise) * upper_gamma_reg(mu, xi * (mu + 1j * t * C / g)) / (
            (1.0 + 1j * t * C / (mu * g)) ** mu
        )
        return energy, info, psi(t, p, p.alpha)

    def kernel(t):
        energy, info, ps = parts(t)
        return (energy - info) * ps

    def envelope(t):
        energy, info, ps = parts(t)
        return (np.abs(energy) + np.abs(info)) * np.abs(ps)

    opts = scaled_options(opts, max(C, C / g), max(delta, noise))
    value = integrate_im_over_t(kernel, opts, envelope) / math.pi
    return clamp_probability(value, opts.abs_tol)


def joint_with_mpe(th: CoverageThresholds, p: NetworkParams, opts: QuadratureOptions = DEFAULT_OPTIONS) -> float:
    """Product approximation ``P{MPE < tau} * P{SINR > gamma, E > eps}``."""
    if th.tau == 0:
        return 0.0
    return mpe_prob(th.tau, p, opts) * joint_coverage(th, p, opts)


def _xi_floor(th: CoverageThresholds, p: NetworkParams) -> float:
    # received-power floor implied by the SINR and energy thresholds together
    delta = harvest_threshold(th.eps, p.rho, p.rectenna)
    return max(th.gamma * (p.N0 + p.N_C / p.rho), delta)


def no_interference_joint(th: CoverageThresholds, p: NetworkParams) -> float:
    """Exact ``P{MPE < tau, SINR > gamma, E > eps}`` when there is no interference."""
    _check_eps(th.eps, p)
    mu = p.mu
    lower = mu * p.d0 ** p.alpha * _xi_floor(th, p) / p.P0
    upper = 4.0 * math.pi * th.tau * mu * p.d0 ** (p.alpha + 2.0) / p.P0
    if upper <= lower:
        return 0.0
    value = upper_gamma_reg(mu, lower).real - upper_gamma_reg(mu, upper).real
    return min(max(value, 0.0), 1.0)


def optimal_power(th: CoverageThresholds, p: NetworkParams) -> float:
    """Transmit power maximizing :func:`no_interference_joint`; independent of ``mu``."""
    xi = _xi_floor(th, p)
    cap = 4.0 * math.pi * th.tau * p.d0 ** 2
    if not (xi > 0 and cap > 0):
        raise DegenerateError("optimal power needs positive tau and a positive threshold floor")
    M2 = p.antenna.M ** 2
    lo = p.d0 ** p.alpha * xi
    hi = p.d0 ** p.alpha * cap
    if math.isclose(hi, lo, rel_tol=1e-12):
        # (hi - lo)/ln(hi/lo) -> lo as hi -> lo
        return lo / M2
    return (hi - lo) / (M2 * math.log(hi / lo))


def coverage_metrics(th: CoverageThresholds, p: NetworkParams, opts: QuadratureOptions = DEFAULT_OPTIONS) -> dict[str, float]:
    """All analytic metrics at one operating point."""
    p_s = mpe_prob(th.tau, p, opts)
    p_J = joint_coverage(th, p, opts)
    return {
        "p_s": p_s,
        "p_o": info_coverage(th.gamma, p, opts),
        "p_e": energy_coverage(th.eps, p, opts),
        "p_J": p_J,
        "joint_mpe": p_s * p_J,
    }


METRICS: dict[str, Callable[[CoverageThresholds, NetworkParams, QuadratureOptions], float]] = {
    "p_s": lambda th, p, o: mpe_prob(th.tau, p, o),
    "p_o": lambda th, p, o: info_coverage(th.gamma, p, o),
    "p_e": lambda th, p, o: energy_coverage(th.eps, p, o),
    "p_J": joint_coverage,
    "joint_mpe": joint_with_mpe,
}
