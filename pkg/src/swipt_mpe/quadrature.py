"""Semi-infinite oscillatory quadrature and Gil-Pelaez CDF inversion.

Integrals of the form ``int_0^inf Im{K(t)} / t dt`` are split into a
geometric sequence of panels ``[a, growth*a]``. Each panel is integrated
with fixed-order Gauss-Legendre and bisected adaptively where the rule has
not converged, which keeps both the ``t**(-p)`` behaviour near the origin and
the oscillations at large ``t`` under control. The interval ``(0, t_min)`` is
closed with a local power-law fit.

For Fourier-type integrands ``exp(-j x t) cf(t) / t`` the remaining tail is
replaced by its asymptotic (integration by parts) expansion once ``|x| t`` is
large, which avoids integrating millions of oscillations when ``x`` lies far
out in the tail of the distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

Kernel = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureOptions:
    t_min: float = 1e-8
    abs_tol: float = 1e-6
    max_panels: int = 2000
    panel_order: int = 32
    growth: float = 2.0
    # the envelope must fall below this fraction of its value at t_min before
    # a panel may count towards termination
    envelope_tol: float = 0.05
    max_subdivisions: int = 200_000

    def __post_init__(self):
        if not self.t_min > 0:
            raise DomainError("t_min must be positive")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_panels < 1:
            raise DomainError("max_panels must be >= 1")
        if self.panel_order < 2:
            raise DomainError("panel_order must be >= 2")
        if not self.growth > 1.0:
            raise DomainError("growth must exceed 1")


DEFAULT_OPTIONS = QuadratureOptions()


@lru_cache(maxsize=8)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _gl(f, lo, hi, order):
    """Gauss-Legendre estimate on each interval ``[lo[i], hi[i]]``."""
    x, w = _gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, None] + half[:, None] * x[None, :]
    return half * (f(t) @ w)


def _adaptive_panel(f, a, b, tol, order, budget):
    """Integrate ``f`` over ``[a, b]`` by vectorized adaptive bisection.

    Returns ``(value, subdivisions_used)``.
    """
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    coarse = _gl(f, lo, hi, order)
    total = 0.0
    used = 0
    span = b - a
    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _gl(f, lo, mid, order)
        right = _gl(f, mid, hi, order)
        fine = left + right
        err = np.abs(fine - coarse)
        local = np.maximum(tol * (hi - lo) / span, 1e-15 * np.abs(fine))
        ok = err <= local
        total += float(np.sum(fine[ok]))
        bad = ~ok
        used += int(np.count_nonzero(bad))
        if used > budget:
            raise ConvergenceError(
                f"adaptive refinement of panel [{a:.3g}, {b:.3g}] exceeded {budget} subdivisions"
            )
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    return total, used


def _origin_head(f, t_min):
    """Approximate ``int_0^t_min f`` assuming ``f ~ C t**p`` near the origin."""
    f1, f2 = (float(v) for v in f(np.array([0.5 * t_min, t_min])))
    if f1 == 0.0 or f2 == 0.0 or (f1 > 0) != (f2 > 0):
        return f2 * t_min
    p = math.log2(abs(f2 / f1))
    p = min(max(p, -0.95), 3.0)
    return f2 * t_min / (1.0 + p)


def integrate_im_over_t(
    kernel: Kernel,
    opts: QuadratureOptions = DEFAULT_OPTIONS,
    envelope: Kernel | None = None,
    tail: Callable[[float], float | None] | None = None,
) -> float:
    """Compute ``int_0^inf Im{kernel(t)} / t dt``.

    Args:
        kernel: vectorized complex function of ``t``.
        opts: quadrature controls.
        envelope: vectorized bound on ``|kernel|`` used by the stopping rule;
            defaults to ``|kernel|``. Panels only count as converged once the
            envelope has decayed relative to its value at ``t_min``.
        tail: optional callable returning the integral over ``[T, inf)`` or
            ``None`` when no reliable closed-form tail is available at ``T``.

    Raises:
        ConvergenceError: when ``max_panels`` geometric panels do not reach
            the stopping criterion.
    """

    def f(t):
        return np.imag(kernel(t)) / t

    if envelope is None:
        def envelope(t):
            return np.abs(kernel(t))

    panel_tol = opts.abs_tol / 100.0
    quiet_tol = opts.abs_tol / 10.0
    total = _origin_head(f, opts.t_min)
    a = opts.t_min
    env_ref = float(np.max(envelope(np.array([a]))))
    quiet = 0
    budget = opts.max_subdivisions
    for _ in range(opts.max_panels):
        if tail is not None:
            rest = tail(a)
            if rest is not None:
                return total + rest
        b = a * opts.growth
        value, used = _adaptive_panel(f, a, b, panel_tol, opts.panel_order, budget)
        budget -= used
        total += value
        env = float(np.max(envelope(np.array([a, 0.5 * (a + b), b]))))
        if abs(value) < quiet_tol and env <= opts.envelope_tol * env_ref:
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
        a = b
    raise ConvergenceError(
        f"no convergence after {opts.max_panels} panels (t reached {a:.3g})"
    )


def _fourier_tail(cf, x, abs_tol):
    """Asymptotic tail of ``int_T^inf Im{exp(-j x t) cf(t)/t} dt``.

    Three terms of the integration-by-parts series; returns ``None`` unless
    the series is demonstrably converged at ``T``.
    """
    if x == 0.0:
        return None

    def g(t):
        t = np.asarray(t, dtype=float)
        return cf(t) / t

    def tail(T):
        if abs(x) * T < 50.0:
            return None
        h = T / 32.0
        pts = T + h * np.arange(-2, 3)
        gv = g(pts)
        d1 = (gv[0] - 8 * gv[1] + 8 * gv[3] - gv[4]) / (12 * h)
        d1_coarse = (gv[3] - gv[1]) / (2 * h)
        d2 = (-gv[0] + 16 * gv[1] - 30 * gv[2] + 16 * gv[3] - gv[4]) / (12 * h * h)
        jx = 1j * x
        t1 = gv[2] / jx
        t2 = d1 / jx ** 2
        t3 = d2 / jx ** 3
        # finite differences must be trustworthy and the series must be converged
        if abs(d1 - d1_coarse) > 0.05 * abs(d1) + 1e-300 and abs(t2) > abs_tol / 1000:
            return None
        if abs(t2) > abs_tol / 10 or abs(t3) > abs_tol / 100:
            return None
        return float(np.imag(np.exp(-1j * x * T) * (t1 + t2 + t3)))

    return tail


def gil_pelaez_cdf(
    cf: Kernel, x: float, opts: QuadratureOptions = DEFAULT_OPTIONS, scale: float = 1.0
) -> float:
    """``P{X < x}`` for the random variable with characteristic function ``cf``.

    ``cf`` must be vectorized over numpy arrays of ``t``. ``scale`` is a
    typical magnitude of ``X``; for large variables the integration starts
    below ``t_min / scale`` so the origin head stays in its power-law regime.
    The result is clamped to ``[0, 1]``; a raw value more than
    ``10*abs_tol`` outside that range raises :class:`ConvergenceError`.
    """
    value = gil_pelaez_raw(cf, x, opts, scale)
    return clamp_probability(value, opts.abs_tol)


def gil_pelaez_raw(
    cf: Kernel, x: float, opts: QuadratureOptions = DEFAULT_OPTIONS, scale: float = 1.0
) -> float:
    """Unclamped Gil-Pelaez integral ``1/2 - (1/pi) int Im{e^{-jtx} cf(t)}/t dt``."""
    x = float(x)
    opts = scaled_options(opts, scale, x)

    def kernel(t):
        return np.exp(-1j * x * t) * cf(t)

    def envelope(t):
        return np.abs(cf(t))

    integral = integrate_im_over_t(kernel, opts, envelope, _fourier_tail(cf, x, opts.abs_tol))
    return 0.5 - integral / math.pi


def scaled_options(opts: QuadratureOptions, scale: float, x: float = 0.0) -> QuadratureOptions:
    """Lower ``t_min`` for variables of magnitude ``scale`` evaluated at ``x``.

    The origin head assumes a non-oscillating power law below ``t_min``,
    which needs ``t_min * max(scale, |x|)`` to be small. ``t_min`` is never raised.
    """
    if not scale > 0:
        raise DomainError("scale must be positive")
    t_min = min(opts.t_min, opts.t_min / scale)
    if x != 0.0:
        t_min = min(t_min, 1e-3 / abs(x))
    return opts if t_min == opts.t_min else replace(opts, t_min=t_min)


def clamp_probability(value: float, abs_tol: float) -> float:
    """Map a quadrature result onto [0, 1].

    Values within ``abs_tol`` of either end are indistinguishable from it and
    are returned as exactly 0 or 1, so residue in the far tails cannot break
    monotonicity along a sweep.
    """
    if value < -10 * abs_tol or value > 1 + 10 * abs_tol:
        raise ConvergenceError(f"probability {value:.3g} outside [0, 1] beyond tolerance")
    if value <= abs_tol:
        return 0.0
    if value >= 1.0 - abs_tol:
        return 1.0
    return value
