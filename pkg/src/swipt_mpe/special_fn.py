"""Complex gamma-family functions used by the interference and coverage integrals.

Everything here works on Python scalars and, where it matters for the
quadrature hot path (``cpow_principal`` and ``upper_gamma_reg``), on numpy
arrays as well.
"""

import cmath
import math

import numpy as np

from .errors import DomainError, PoleError

# Lanczos approximation, g = 7, n = 9; relative error ~1e-15 for Re(z) >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _sin_pi(z):
    """sin(pi*z) with the integer part removed first, so zeros stay sharp."""
    n = round(z.real)
    s = cmath.sin(math.pi * (z - n))
    return -s if n % 2 else s


def _lanczos_log(z: complex) -> complex:
    # log Gamma(z) for Re(z) >= 0.5 (not necessarily the principal branch of
    # log Gamma, but exp() of it is exact).
    z = z - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma_c(z) -> complex:
    """Gamma function of a complex argument.

    Lanczos for ``Re(z) >= 0.5``, reflection ``pi / (sin(pi z) Gamma(1 - z))``
    below that. Real input gives a complex result with zero imaginary part.

    Raises:
        PoleError: if ``z`` is zero or a negative integer.
    """
    z = complex(z)
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at z={z.real:g}")
    if z.real < 0.5:
        return math.pi / (_sin_pi(z) * cmath.exp(_lanczos_log(1.0 - z)))
    return cmath.exp(_lanczos_log(z))


def lgamma_sign(x: float) -> tuple[float, float]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))`` for real ``x``.

    Unlike ``gamma_c`` this does not overflow for large ``x``.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at x={x:g}")
    if x >= 0.5:
        return _lanczos_log(complex(x)).real, 1.0
    s = _sin_pi(complex(x)).real
    log_abs = math.log(math.pi) - math.log(abs(s)) - _lanczos_log(complex(1.0 - x)).real
    return log_abs, math.copysign(1.0, s)


def beta_ext(a: float, b: float) -> float:
    """Beta function continued to negative non-integer arguments.

    ``B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)``, evaluated in log space so
    large shape parameters do not overflow. Symmetric in ``(a, b)``.
    """
    for name, v in (("a", a), ("b", b), ("a+b", a + b)):
        if v <= 0.0 and v == math.floor(v):
            raise PoleError(f"Beta pole: {name}={v:g} is a non-positive integer")
    la, sa = lgamma_sign(a)
    lb, sb = lgamma_sign(b)
    lab, sab = lgamma_sign(a + b)
    try:
        return sa * sb * sab * math.exp(la + lb - lab)
    except OverflowError:
        raise DomainError(f"B({a:g}, {b:g}) overflows a double") from None


def cpow_principal(base, e: float):
    """Principal-branch power ``base**e`` with ``Arg(base)`` taken in ``(-pi, pi]``.

    Accepts a scalar or a numpy array for ``base``.

    Raises:
        DomainError: if ``base`` is zero and ``e <= 0``.
    """
    arr = np.asarray(base, dtype=complex)
    r = np.abs(arr)
    if np.any(r == 0.0) and e <= 0.0:
        raise DomainError("0 cannot be raised to a non-positive power")
    theta = np.arctan2(arr.imag, arr.real)
    # atan2(-0.0, x<0) is -pi; the principal Arg of a negative real is +pi.
    theta = np.where((arr.imag == 0.0) & (arr.real < 0.0), np.pi, theta)
    with np.errstate(divide="ignore"):
        out = np.where(r == 0.0, 0.0, np.exp(e * np.log(np.where(r == 0.0, 1.0, r)) + 1j * e * theta))
    if out.ndim == 0:
        return complex(out)
    return out


def upper_gamma_reg(n: int, z):
    """Regularized upper incomplete gamma ``Gamma(n, z) / Gamma(n)`` for integer ``n``.

    Uses the finite sum ``exp(-z) * sum_{k<n} z**k / k!``; ``z`` may be a
    complex scalar or array.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"integer shape n >= 1 required, got {n!r}")
    z = np.asarray(z, dtype=complex)
    term = np.ones_like(z)
    acc = np.ones_like(z)
    for k in range(1, int(n)):
        term = term * z / k
        acc = acc + term
    out = np.exp(-z) * acc
    if out.ndim == 0:
        return complex(out)
    return out


def upper_gamma_int(n: int, z):
    """Upper incomplete gamma ``Gamma(n, z)`` for a positive integer ``n``.

    Exact finite form ``(n-1)! exp(-z) sum_{k=0}^{n-1} z**k / k!``; entire in ``z``.
    """
    reg = upper_gamma_reg(n, z)
    return math.factorial(int(n) - 1) * reg
