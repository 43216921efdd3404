import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from swipt_mpe.errors import DomainError, PoleError
from swipt_mpe.special_fn import (
    beta_ext,
    cpow_principal,
    gamma_c,
    lgamma_sign,
    upper_gamma_int,
    upper_gamma_reg,
)


def test_gamma_known_values():
    assert gamma_c(1) == pytest.approx(1.0, abs=1e-14)
    assert gamma_c(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma_c(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-13)
    assert abs(gamma_c(-0.5) - complex(mpmath.gamma(-0.5))) < 1e-12


@pytest.mark.parametrize("z", [0, -1, -2, -7])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma_c(z)


@pytest.mark.parametrize("z", [0.1, 2.5, 7.3, -3.7, 1 + 2j, -2.5 + 0.3j, 0.2 - 5j, 20 + 1j])
def test_gamma_matches_mpmath(z):
    ref = complex(mpmath.gamma(z))
    assert abs(gamma_c(z) - ref) <= 1e-13 * abs(ref)


@settings(max_examples=300, deadline=None)
@given(st.floats(-15, 15), st.floats(-8, 8))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    assume(min(abs(z + k) for k in range(0, 17)) > 1e-3)
    lhs = gamma_c(z + 1)
    rhs = z * gamma_c(z)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_gamma_real_agrees_with_math():
    for x in np.linspace(0.05, 15, 40):
        assert gamma_c(x).real == pytest.approx(math.gamma(x), rel=1e-13)
        assert gamma_c(x).imag == 0.0


def test_lgamma_sign():
    for x in (-3.5, -0.5, 0.3, 4.0, 200.0):
        la, s = lgamma_sign(x)
        assert la == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)
        assert s == math.copysign(1.0, math.gamma(x)) if x < 170 else s == 1.0


def test_beta_examples():
    assert beta_ext(1, 1) == pytest.approx(1.0, rel=1e-14)
    assert beta_ext(2, 3) == pytest.approx(1.0 / 12.0, rel=1e-14)


@pytest.mark.parametrize("a,b", [(-1, 2.5), (2.5, -3), (-0.5, -0.5), (0.0, 1.0)])
def test_beta_poles(a, b):
    with pytest.raises(PoleError):
        beta_ext(a, b)


@settings(max_examples=200, deadline=None)
@given(st.floats(-6, 30), st.floats(-6, 30))
def test_beta_symmetric(a, b):
    for v in (a, b, a + b):
        assume(not (round(v) <= 0 and abs(v - round(v)) < 1e-6))
    assert beta_ext(a, b) == beta_ext(b, a)


def test_beta_overflow_is_an_error():
    with pytest.raises(DomainError):
        beta_ext(1.0, 1e-311)


def finite_sum(mu, alpha):
    # -sum_k C(mu,k) B(k - 2/alpha, mu - k + 2/alpha); every argument is positive
    d = 2.0 / alpha
    return -sum(special.comb(mu, k, exact=True) * special.beta(k - d, mu - k + d) for k in range(1, mu + 1))


@pytest.mark.parametrize("mu", range(1, 9))
@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0])
def test_beta_finite_sum_identity(mu, alpha):
    d = 2.0 / alpha
    ours = beta_ext(-d, mu + d)
    assert ours == pytest.approx(finite_sum(mu, alpha), rel=1e-10)
    assert ours == pytest.approx(float(mpmath.beta(-d, mu + d)), rel=1e-12)


def test_cpow_examples():
    assert cpow_principal(-1j, 2.0 / 3.0) == pytest.approx(0.5 - 0.8660254037844386j, abs=1e-14)
    assert cpow_principal(4.0, 0.5) == pytest.approx(2.0, abs=1e-15)
    base = -3.7j
    r, th = abs(base), cmath.phase(base)
    assert cpow_principal(base, 0.4) == pytest.approx(r ** 0.4 * cmath.exp(0.4j * th), rel=1e-14)


def test_cpow_negative_real_axis_uses_plus_pi():
    # Arg(-1) = pi even with a signed negative zero imaginary part
    for base in (complex(-1.0, 0.0), complex(-1.0, -0.0)):
        assert cpow_principal(base, 0.5) == pytest.approx(1j, abs=1e-15)


def test_cpow_zero():
    assert cpow_principal(0.0, 0.5) == 0.0
    with pytest.raises(DomainError):
        cpow_principal(0.0, 0.0)
    with pytest.raises(DomainError):
        cpow_principal(np.array([1.0, 0.0]), -1.0)


def test_cpow_vectorized_matches_scalar():
    bases = np.array([1 + 1j, -2 - 0.5j, 3j, -4.0])
    out = cpow_principal(bases, 0.4)
    for b, o in zip(bases, out):
        assert o == cpow_principal(complex(b), 0.4)


@settings(max_examples=300, deadline=None)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(-3, 3))
def test_cpow_conjugate_symmetry(x, y, e):
    z = complex(x, y)
    assume(abs(z) > 1e-6 and not (y == 0 and x < 0))
    a = cpow_principal(z.conjugate(), e)
    b = cpow_principal(z, e).conjugate()
    assert abs(a - b) <= 1e-13 * max(abs(a), 1e-300)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(0.1, 3))
def test_cpow_modulus_and_argument(x, y, e):
    z = complex(x, y)
    assume(abs(z) > 1e-6)
    w = cpow_principal(z, e)
    assert abs(w) == pytest.approx(abs(z) ** e, rel=1e-12)
    # atan2 rather than cmath.phase, which raises on subnormal imaginary parts
    arg = math.pi if (y == 0 and x < 0) else math.atan2(y, x)
    phase_w = math.atan2(w.imag, w.real)
    assert cmath.exp(1j * phase_w) == pytest.approx(cmath.exp(1j * e * arg), abs=1e-10)


def test_upper_gamma_examples():
    assert upper_gamma_int(1, 0) == pytest.approx(1.0)
    assert upper_gamma_int(3, 0) == pytest.approx(2.0)


def test_upper_gamma_complex_ray_oracle():
    z = 1 + 2j
    # integrate t^4 e^{-t} along the ray t = z + s, s >= 0
    re = integrate.quad(lambda s: ((z + s) ** 4 * cmath.exp(-(z + s))).real, 0, np.inf, epsabs=1e-13)[0]
    im = integrate.quad(lambda s: ((z + s) ** 4 * cmath.exp(-(z + s))).imag, 0, np.inf, epsabs=1e-13)[0]
    ours = upper_gamma_int(5, z)
    assert abs(ours - complex(re, im)) < 1e-10 * abs(ours)
    assert abs(ours - complex(mpmath.gammainc(5, z))) < 1e-12 * abs(ours)


@pytest.mark.parametrize("n", range(1, 11))
def test_upper_gamma_real_vs_scipy(n):
    x = np.concatenate([[0.0], np.geomspace(1e-6, 60, 50)])
    ref = special.gammaincc(n, x)
    assert np.max(np.abs(upper_gamma_reg(n, x).real - ref)) < 1e-12
    ours = upper_gamma_int(n, x).real
    assert np.allclose(ours, ref * math.factorial(n - 1), rtol=1e-12, atol=1e-12)


def test_upper_gamma_rejects_non_integer_shape():
    with pytest.raises(DomainError):
        upper_gamma_int(2.5, 1.0)
    with pytest.raises(DomainError):
        upper_gamma_int(0, 1.0)
