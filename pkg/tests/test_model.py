import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swipt_mpe.errors import DomainError, SaturationError
from swipt_mpe.model import (
    AntennaPattern,
    NetworkParams,
    Realization,
    RectennaModel,
    gain_pmf,
    harvest_threshold,
    harvested_energy,
    interference,
    mpe_of,
    received_power,
    sinr_of,
)
from swipt_mpe.montecarlo import McSettings, sample_realization
from swipt_mpe.scenarios import preset

RECT = RectennaModel()


def params(**kw):
    base = dict(
        lam=0.1, p_L=0.8, alpha=3.0, mu=5, d0=5.0, P_t=10.0,
        antenna=AntennaPattern(math.pi / 6, 10.0, 0.1), N0=1e-12, N_C=1.0, rho=0.5,
    )
    base.update(kw)
    return NetworkParams(**base)


def some_realization(seed=0, n=6):
    rng = np.random.default_rng(seed)
    return Realization(
        float(rng.gamma(5, 0.2)), rng.uniform(1, 40, n), rng.choice([100.0, 1.0, 0.01], n), rng.gamma(5, 0.2, n)
    )


@pytest.mark.parametrize(
    "omega,expected",
    [(math.pi / 6, (1 / 36, 10 / 36, 25 / 36)), (math.pi, (1, 0, 0)), (math.pi / 2, (0.25, 0.5, 0.25))],
)
def test_gain_pmf_examples(omega, expected):
    classes = gain_pmf(AntennaPattern(omega, 10.0, 0.1))
    assert [c.prob for c in classes] == pytest.approx(expected, abs=1e-15)
    assert [c.gain for c in classes] == pytest.approx([100.0, 1.0, 0.01])


@given(st.floats(0, math.pi))
def test_gain_pmf_is_a_distribution(omega):
    probs = [c.prob for c in gain_pmf(AntennaPattern(omega, 3.0, 0.5))]
    assert math.fsum(probs) == pytest.approx(1.0, abs=1e-15)
    assert all(0 <= q <= 1 for q in probs)


def test_invalid_inputs_rejected():
    with pytest.raises(DomainError):
        AntennaPattern(4.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        AntennaPattern(1.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        RectennaModel(1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        params(alpha=2.0)
    with pytest.raises(DomainError):
        params(mu=2.5)
    with pytest.raises(DomainError):
        params(rho=1.0)
    with pytest.raises(DomainError):
        Realization(1.0, [0.0], [1.0], [1.0])
    with pytest.raises(DomainError):
        Realization(1.0, [1.0, 2.0], [1.0], [1.0])


def test_received_power_serving_only():
    p = params()
    assert received_power(Realization(1.0), p) == pytest.approx(p.P0 * p.d0 ** -p.alpha)


def test_received_power_linear_in_fades():
    p = params()
    r = some_realization()
    doubled = Realization(2 * r.h0, r.distances, r.gains, 2 * r.fades)
    assert received_power(doubled, p) == pytest.approx(2 * received_power(r, p), rel=1e-14)


def test_received_power_direct_oracle():
    p = params()
    r = Realization.from_interferers(0.7, [(3.0, 100.0, 1.2), (10.0, 0.01, 0.4)])
    expected = 1000.0 * 0.7 / 125.0 + 10.0 * (100.0 * 1.2 / 27.0 + 0.01 * 0.4 / 1000.0)
    assert received_power(r, p) == pytest.approx(expected, rel=1e-14)
    assert len(r) == 2


def test_sinr_noise_limited():
    p = params(N_C=0.0)
    r = Realization(1.3)
    assert sinr_of(r, p) == pytest.approx(p.P0 * 1.3 * p.d0 ** -p.alpha / p.N0, rel=1e-13)
    assert sinr_of(Realization(0.0, *_arrays(some_realization())), p) == 0.0


def _arrays(r):
    return r.distances, r.gains, r.fades


def test_sinr_direct_oracle():
    p = params()
    r = some_realization(3)
    S = p.P0 * r.h0 / p.d0 ** 3
    interf = sum(p.P_t * g * h / d ** 3 for d, g, h in zip(*_arrays(r)))
    assert interference(r, p) == pytest.approx(interf, rel=1e-13)
    assert sinr_of(r, p) == pytest.approx(0.5 * S / (0.5 * (p.N0 + interf) + p.N_C), rel=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 1000), st.integers(0, 5), st.floats(1.01, 5))
def test_sinr_monotone(seed, k, factor):
    p = params()
    r = some_realization(seed)
    fades = r.fades.copy()
    fades[k] *= factor
    worse = Realization(r.h0, r.distances, r.gains, fades)
    better = Realization(r.h0 * factor, *_arrays(r))
    assert sinr_of(worse, p) < sinr_of(r, p) < sinr_of(better, p)


def test_harvested_energy_limits():
    assert harvested_energy(0.0, 0.5, RECT) == pytest.approx(0.0, abs=1e-15)
    assert RECT.saturation == pytest.approx(0.4836, abs=5e-5)
    assert harvested_energy(1e6, 0.5, RECT) == pytest.approx(RECT.saturation, abs=1e-5)
    x = np.geomspace(1e-6, 1e6, 200)
    e = harvested_energy(x, 0.5, RECT)
    assert np.all(np.diff(e) > 0)
    assert np.all(e < RECT.saturation)


def test_harvest_threshold_roundtrip():
    assert harvest_threshold(0.0, 0.5, RECT) == 0.0
    for rho in (0.1, 0.5, 0.9):
        for eps in np.linspace(0.0, 0.48, 25):
            delta = harvest_threshold(eps, rho, RECT)
            assert harvested_energy(delta, rho, RECT) == pytest.approx(eps, abs=1e-12)


def test_harvest_threshold_saturation():
    with pytest.raises(SaturationError):
        harvest_threshold(RECT.saturation, 0.5, RECT)
    with pytest.raises(SaturationError):
        harvest_threshold(0.6, 0.5, RECT)
    assert harvest_threshold(RECT.saturation * (1 - 1e-9), 0.5, RECT) > 1e8


def test_mpe_serving_only():
    p = params()
    assert mpe_of(Realization(1.0), p) == pytest.approx(p.P0 / (4 * math.pi * p.d0 ** 5), rel=1e-14)


def test_mpe_additive_in_interferers():
    p = params()
    r = some_realization(7)
    base = mpe_of(Realization(r.h0), p)
    parts = [mpe_of(Realization(0.0, [d], [g], [h]), p) for d, g, h in zip(*_arrays(r))]
    assert mpe_of(r, p) == pytest.approx(base + sum(parts), rel=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 1000), st.floats(2.1, 5))
def test_mpe_is_received_power_with_shifted_exponent(seed, alpha):
    p = params(alpha=alpha)
    r = some_realization(seed)
    assert mpe_of(r, p) == pytest.approx(received_power(r, p.with_(alpha=alpha + 2)) / (4 * math.pi), rel=1e-13)


def test_received_power_campbell_oracle():
    # Campbell's formula on the annulus 1 m < d < R for the sampled interferers
    p = preset("mmwave").params
    s = McSettings(trials=2000, seed=11, disk_radius=12.0)
    vals = []
    for i in range(s.trials):
        r = sample_realization(p, s, i)
        keep = r.distances > 1.0
        vals.append(p.P_t * np.sum(r.gains[keep] * r.fades[keep] * r.distances[keep] ** -p.alpha))
    vals = np.array(vals)
    eg = sum(c.gain * c.prob for c in gain_pmf(p.antenna))
    R, a = s.disk_radius, p.alpha
    mean = p.P_t * p.p_L * p.lam * eg * 2 * math.pi * (1 - R ** (2 - a)) / (a - 2)
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - mean) < 4 * se
