"""Monte Carlo ground truth for the analytic probabilities.

Interferers are sampled as a PPP on a disk of radius ``disk_radius`` around
the typical receiver. The interference from beyond the disk is replaced by a
Gaussian with the exact mean and variance of the omitted far field (and by
its mean for the MPE sum), so a modest disk reproduces the infinite-plane
law closely.

Randomness is counter based: trials are grouped in fixed blocks of
``BLOCK_SIZE`` and block ``b`` draws from ``Philox(key=seed, counter=b)``.
Any trial is therefore reproducible from ``(seed, trial index)`` alone and
results do not depend on how blocks are spread over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .analytic import CoverageThresholds
from .errors import DomainError
from .model import NetworkParams, Realization, gain_pmf, harvested_energy

BLOCK_SIZE = 1024
WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class McSettings:
    trials: int = 100_000
    seed: int = 20240601
    disk_radius: float = 50.0
    parallel: bool = False
    far_field: bool = True
    workers: int | None = None

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= self.seed < 2 ** 128:
            raise DomainError("seed must be a non-negative integer below 2**128")
        if not self.disk_radius > 0:
            raise DomainError("disk_radius must be positive")


@dataclass(frozen=True)
class ProbabilityEstimate:
    """Empirical frequency with its 95% Wilson half-width."""

    value: float
    ci_half_width: float
    trials: int

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "ProbabilityEstimate":
        return cls(successes / trials, wilson_half_width(successes, trials), trials)

    @property
    def interval(self) -> tuple[float, float]:
        """Wilson score interval (not centred on ``value``)."""
        n, z = self.trials, WILSON_Z
        centre = (self.value + z * z / (2 * n)) / (1 + z * z / n)
        return max(centre - self.ci_half_width, 0.0), min(centre + self.ci_half_width, 1.0)

    def agrees_with(self, x: float, k: float = 3.0) -> bool:
        return abs(x - self.value) <= k * self.ci_half_width


def wilson_half_width(successes: int, trials: int, z: float = WILSON_Z) -> float:
    p = successes / trials
    n = trials
    return z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)


def _generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))


def _far_field_moments(p: NetworkParams, R: float, exponent: float) -> tuple[float, float]:
    """Mean and variance of the per-unit-``P_t`` interference sum beyond radius ``R``."""
    classes = gain_pmf(p.antenna)
    eg = sum(c.prob * c.gain for c in classes)
    eg2 = sum(c.prob * c.gain ** 2 for c in classes)
    dens = 2.0 * math.pi * p.lam * p.p_L
    mean = dens * eg * R ** (2.0 - exponent) / (exponent - 2.0)
    var = dens * eg2 * (1.0 + 1.0 / p.mu) * R ** (2.0 - 2.0 * exponent) / (2.0 * exponent - 2.0)
    return mean, var


def truncation_error(p: NetworkParams, s: McSettings) -> float:
    """Size of the far-field approximation relative to the mean serving power.

    Without far-field compensation this is the mean omitted interference;
    with it, the standard deviation of the omitted interference (an upper
    bound on what the Gaussian surrogate gets wrong).
    """
    mean, var = _far_field_moments(p, s.disk_radius, p.alpha)
    omitted = math.sqrt(var) if s.far_field else mean
    return omitted * p.P_t / (p.P0 * p.d0 ** (-p.alpha))


def _block_points(p: NetworkParams, s: McSettings, block: int, n: int):
    """Draw ``n`` trials of block ``block``: serving fades and LOS interferers."""
    rng = _generator(s.seed, block)
    mu = p.mu
    h0 = rng.gamma(mu, 1.0 / mu, n)
    counts = rng.poisson(p.p_L * p.lam * math.pi * s.disk_radius ** 2, n)
    total = int(counts.sum())
    r = s.disk_radius * np.sqrt(rng.random(total))
    classes = gain_pmf(p.antenna)
    probs = np.array([c.prob for c in classes])
    gains = np.array([c.gain for c in classes])[rng.choice(3, size=total, p=probs / probs.sum())]
    fades = rng.gamma(mu, 1.0 / mu, total)
    far = rng.standard_normal(n)
    return h0, counts, r, gains, fades, far


def _block_sums(p, s, block, n, exponents):
    h0, counts, r, gains, fades, far = _block_points(p, s, block, n)
    owner = np.repeat(np.arange(n), counts)
    gh = gains * fades
    sums = []
    for k, a in enumerate(exponents):
        v = np.bincount(owner, weights=gh * r ** (-a), minlength=n)
        if s.far_field:
            mean, var = _far_field_moments(p, s.disk_radius, a)
            # fluctuation only on the leading exponent; higher ones are negligible
            v = v + mean + (math.sqrt(var) * far if k == 0 else 0.0)
        sums.append(v)
    return h0, np.vstack(sums)


def _blocks(trials: int) -> list[tuple[int, int]]:
    full, rest = divmod(trials, BLOCK_SIZE)
    out = [(b, BLOCK_SIZE) for b in range(full)]
    if rest:
        out.append((full, rest))
    return out


def _map_blocks(fn, s: McSettings):
    blocks = _blocks(s.trials)
    if s.parallel and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=s.workers) as pool:
            return list(pool.map(lambda bn: fn(*bn), blocks))
    return [fn(b, n) for b, n in blocks]


def sample_sums(p: NetworkParams, s: McSettings, exponents: Sequence[float]):
    """Per-trial serving fades and per-unit-power interference sums.

    Returns ``(h0, sums)`` where ``sums[k, i] = sum_x g_x h_x d_x**(-exponents[k])``
    for trial ``i`` (far field included when enabled).
    """
    parts = _map_blocks(lambda b, n: _block_sums(p, s, b, n, tuple(exponents)), s)
    h0 = np.concatenate([h for h, _ in parts])
    sums = np.concatenate([v for _, v in parts], axis=1)
    return h0, sums


def interferer_counts(p: NetworkParams, s: McSettings) -> np.ndarray:
    """Number of LOS interferers inside the disk for every trial."""
    return np.concatenate(_map_blocks(lambda b, n: _block_points(p, s, b, n)[1], s))


def sample_realization(p: NetworkParams, s: McSettings, index: int) -> Realization:
    """Network snapshot of trial ``index`` (disk interferers only, no far field)."""
    if not 0 <= index < s.trials:
        raise DomainError(f"trial index {index} outside [0, {s.trials})")
    block, pos = divmod(index, BLOCK_SIZE)
    n = min(BLOCK_SIZE, s.trials - block * BLOCK_SIZE)
    h0, counts, r, gains, fades, _ = _block_points(p, s, block, n)
    start = int(counts[:pos].sum())
    sl = slice(start, start + int(counts[pos]))
    return Realization(float(h0[pos]), r[sl], gains[sl], fades[sl])


@dataclass(frozen=True)
class TrialStats:
    """Per-trial sufficient statistics, independent of ``P_t`` and thresholds."""

    h0: np.ndarray
    interference: np.ndarray  # sum g h d^-alpha per unit P_t
    exposure: np.ndarray  # sum g h d^-(alpha+2) per unit P_t

    @classmethod
    def sample(cls, p: NetworkParams, s: McSettings) -> "TrialStats":
        h0, sums = sample_sums(p, s, (p.alpha, p.alpha + 2.0))
        return cls(h0, sums[0], sums[1])

    def indicators(self, p: NetworkParams, th: CoverageThresholds) -> dict[str, np.ndarray]:
        """Boolean event arrays at transmit power ``p.P_t``."""
        serving = p.P0 * self.h0 * p.d0 ** (-p.alpha)
        interf = p.P_t * self.interference
        mpe = (serving * p.d0 ** -2.0 + p.P_t * self.exposure) / (4.0 * math.pi)
        sinr = p.rho * serving / (p.rho * (p.N0 + interf) + p.N_C)
        energy = harvested_energy(serving + interf, p.rho, p.rectenna)
        safe = mpe < th.tau
        info = sinr > th.gamma
        power = energy > th.eps
        return {
            "p_s": safe,
            "p_o": info,
            "p_e": power,
            "p_J": info & power,
            "joint_mpe": safe & info & power,
        }

    def estimate(self, p: NetworkParams, th: CoverageThresholds) -> dict[str, ProbabilityEstimate]:
        n = self.h0.size
        return {
            k: ProbabilityEstimate.from_counts(int(np.count_nonzero(v)), n)
            for k, v in self.indicators(p, th).items()
        }


def estimate(p: NetworkParams, th: CoverageThresholds, s: McSettings) -> dict[str, ProbabilityEstimate]:
    """Empirical ``p_s, p_o, p_e, p_J`` and the exact three-way joint ``joint_mpe``."""
    return TrialStats.sample(p, s).estimate(p, th)


def exact_joint_with_mpe(p: NetworkParams, th: CoverageThresholds, s: McSettings) -> ProbabilityEstimate:
    """Empirical ``P{MPE < tau, SINR > gamma, E > eps}`` without independence assumptions."""
    return estimate(p, th, s)["joint_mpe"]


def interference_samples(p: NetworkParams, a_exp: float, s: McSettings) -> np.ndarray:
    """Aggregate LOS interference per trial for path-loss exponent ``a_exp``."""
    if not a_exp > 2.0:
        raise DomainError(f"path-loss exponent must exceed 2, got {a_exp}")
    _, sums = sample_sums(p, s, (a_exp,))
    return p.P_t * sums[0]


def empirical_cf(t, p: NetworkParams, a_exp: float, s: McSettings):
    """Sample mean of ``exp(j t I)`` over simulated interference values."""
    return cf_from_samples(t, interference_samples(p, a_exp, s))


def cf_from_samples(t, samples: np.ndarray):
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.array([np.mean(np.exp(1j * tk * samples)) if tk != 0 else 1.0 + 0j for tk in ts])
    return complex(out[0]) if np.ndim(t) == 0 else out


def sweep_estimates(
    p: NetworkParams,
    th: CoverageThresholds,
    s: McSettings,
    variable: str,
    values: Iterable[float],
) -> list[dict[str, ProbabilityEstimate]]:
    """MC estimates along a parameter sweep.

    ``P_t``, ``tau``, ``gamma`` and ``eps`` reuse one set of trials (common
    random numbers); ``p_L`` and ``lambda`` resample per grid point.
    """
    values = list(values)
    if variable in ("P_t", "tau", "gamma", "eps"):
        stats = TrialStats.sample(p, s)
        out = []
        for v in values:
            q, t = apply_sweep_value(p, th, variable, v)
            out.append(stats.estimate(q, t))
        return out
    if variable in ("p_L", "lambda"):
        out = []
        for v in values:
            q, t = apply_sweep_value(p, th, variable, v)
            out.append(estimate(q, t, s))
        return out
    raise DomainError(f"unknown sweep variable {variable!r}")


def apply_sweep_value(p: NetworkParams, th: CoverageThresholds, variable: str, v: float):
    """Return ``(params, thresholds)`` with the swept quantity set to ``v``."""
    if variable == "P_t":
        return p.with_(P_t=v), th
    if variable == "p_L":
        return p.with_(p_L=v), th
    if variable == "lambda":
        return p.with_(lam=v), th
    if variable in ("tau", "gamma", "eps"):
        return p, CoverageThresholds(**{**th.__dict__, variable: v})
    raise DomainError(f"unknown sweep variable {variable!r}")
