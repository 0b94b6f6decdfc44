"""Evaluators for Li_m, zeta(s, a) and its s-derivatives, Gamma, digamma and
polygamma, and derivatives of zeta'/zeta, away from their singularities.

None of this touches the Stieltjes-type coefficient families: everything is
built from Euler-Maclaurin summation, recurrence shifts and asymptotic
expansions on top of :mod:`numeric` and :mod:`powser`.  Functions compute at
the ambient mpmath precision plus internal guard digits and return values
rounded back to the ambient precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .numeric import alternating_terms_needed, bernoulli, sum_alternating
from .powser import PowerSeries, exp_linear, ps_derivative, ps_div, ps_exp, ps_mul

__all__ = [
    "HurwitzTaylor",
    "GammaTaylor",
    "hurwitz_taylor",
    "zeta",
    "polylog_int",
    "alt_zeta_limit_probe",
    "digamma",
    "polygamma",
    "log_gamma",
    "gamma",
    "gamma_taylor",
    "zeta_logderiv",
]


def _round_series(s: PowerSeries) -> PowerSeries:
    return PowerSeries(+c for c in s.coeffs)


@dataclass(frozen=True)
class HurwitzTaylor:
    """Taylor data of s -> zeta(s, a) at s0: ``series[m] = zeta^(m)(s0, a) / m!``."""

    s0: mpf
    a: mpf
    series: PowerSeries

    def derivative(self, m: int) -> mpf:
        return self.series[m] * math.factorial(m)


@dataclass(frozen=True)
class GammaTaylor:
    """Taylor data of Gamma at x0: ``series[m] = Gamma^(m)(x0) / m!``."""

    x0: mpf
    series: PowerSeries

    def derivative(self, m: int) -> mpf:
        return self.series[m] * math.factorial(m)


# --- Hurwitz zeta ------------------------------------------------------------


def _em_cutoff(wp: int, order: int) -> int:
    # the Bernoulli tail bottoms out near exp(-2 pi X); 0.4*wp keeps it below 10^-wp
    return int(0.4 * wp) + 2 * order + 8


def _hurwitz_em(s0: mpf, a: mpf, order: int, N: int, M: int | None):
    """One Euler-Maclaurin evaluation.  Returns (coeffs, converged, last_term)."""
    K = order
    acc = [mpf(0)] * (K + 1)
    for n in range(N):
        L = mpmath.log(n + a)
        u = mpmath.exp(-s0 * L)
        acc[0] += u
        c = u
        for m in range(1, K + 1):
            c = -c * L / m
            acc[m] += c
    X = N + a
    LX = mpmath.log(X)
    EX = exp_linear(-LX, K)
    XS = mpmath.exp(-s0 * LX)  # X^{-s0}

    # X^{1-s} / (s-1) with s = s0 + t
    integral = ps_div(EX * (XS * X), PowerSeries.linear(s0 - 1, 1, K))
    mid = EX * (XS / 2)

    # sum_i B_2i/(2i)! (s)_{2i-1} X^{-s-2i+1}, common factor exp(-t LX) pulled out
    poly = PowerSeries.linear(s0, 1, K)  # rising factorial (s)_1
    corr = [mpf(0)] * (K + 1)
    eps = mpf(10) ** (-mp.dps)
    scale = abs(acc[0]) + abs(integral[0])
    xpow = XS / X  # X^{-s0-1}
    fact = mpf(2)  # (2i)!
    inv_x2 = 1 / (X * X)
    prev = None
    converged = False
    last = mpf(0)
    i = 1
    max_i = M if M is not None else 10 * mp.dps
    while i <= max_i:
        w = bernoulli(2 * i) / fact * xpow
        term = [w * c for c in poly.coeffs]
        size = max(abs(c) for c in term)
        if M is None and prev is not None and size > prev:
            break  # asymptotic series started to grow
        for m in range(K + 1):
            corr[m] += term[m]
        last = size
        if M is None and size < eps * scale:
            converged = True
            break
        prev = size
        # advance to i+1: (s)_{2i+1} = (s)_{2i-1} (s + 2i - 1)(s + 2i)
        poly = ps_mul(poly, PowerSeries.linear(s0 + 2 * i - 1, 1, K))
        poly = ps_mul(poly, PowerSeries.linear(s0 + 2 * i, 1, K))
        xpow *= inv_x2
        fact *= (2 * i + 1) * (2 * i + 2)
        i += 1
    if M is not None:
        converged = True
    corr_s = ps_mul(PowerSeries(corr), EX)
    total = [acc[m] + integral[m] + mid[m] + corr_s[m] for m in range(K + 1)]
    return total, converged, last


def hurwitz_taylor(s0, a, order: int = 0, N: int | None = None, M: int | None = None) -> HurwitzTaylor:
    """Taylor coefficients of zeta(s, a) about s = s0 > 1 up to t^order.

    Euler-Maclaurin summation of (n + a)^{-(s0 + t)} as a power series in t.
    ``N`` (number of summed terms) and ``M`` (Bernoulli corrections) default
    to values chosen from the working precision; when both are left free the
    correction series runs until its terms drop below the working epsilon.
    """
    s0 = mpf(s0)
    a = mpf(a)
    if s0 <= 1:
        raise ValueError("hurwitz_taylor needs s0 > 1")
    if a <= 0:
        raise ValueError("hurwitz_taylor needs a > 0")
    if order < 0:
        raise ValueError("order must be >= 0")
    guard = 10 + int(max(0, mpmath.log10(1 / (s0 - 1)))) + 2 * order
    with mp.workdps(mp.dps + guard):
        wp = mp.dps
        n_terms = N if N is not None else _em_cutoff(wp, order)
        while True:
            coeffs, ok, _ = _hurwitz_em(s0, a, order, n_terms, M)
            if ok:
                break
            if N is not None:
                raise ArithmeticError("Euler-Maclaurin did not converge with the given N")
            n_terms *= 2
    return HurwitzTaylor(+s0, +a, PowerSeries(+c for c in coeffs))


def zeta(s) -> mpf:
    """zeta(s) for real s > 1."""
    return hurwitz_taylor(s, 1, 0).series[0]


# --- polylogarithm -------------------------------------------------------------


def polylog_int(m: int, z, method: str = "auto") -> mpf:
    """Li_m(z) for integer m >= 1 and real |z| <= 1 (excluding m = 1, z = 1).

    ``method="auto"`` uses Li_1(z) = -ln(1 - z) and Li_m(-1) = (2^{1-m}-1) zeta(m);
    ``method="series"`` always sums the defining series (accelerated when it
    alternates slowly).
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("polylog_int needs an integer order m >= 1")
    if method not in ("auto", "series"):
        raise ValueError(f"unknown method {method!r}")
    z = mpf(z)
    if abs(z) > 1:
        raise ValueError("polylog_int needs |z| <= 1")
    if z == 1 and m == 1:
        raise ValueError("Li_1 diverges at z = 1")
    if z == 0:
        return mpf(0)
    if method == "auto":
        if m == 1:
            return -mpmath.log(1 - z)
        if z == 1:
            return zeta(m)
        if z == -1:
            with mp.workdps(mp.dps + 5):
                v = (mpmath.ldexp(mpf(1), 1 - m) - 1) * zeta(m)
            return +v
    with mp.workdps(mp.dps + 10):
        if z == 1:
            v = zeta(m)
        elif z < -0.5:
            v = _polylog_alternating(m, -z)
        else:
            v = _polylog_direct(m, z)
    return +v


def _polylog_direct(m: int, z: mpf) -> mpf:
    az = abs(z)
    eps = mpf(10) ** (-mp.dps)
    s = mpf(0)
    p = mpf(1)
    k = 0
    while True:
        k += 1
        p *= z
        s += p / mpf(k) ** m
        tail = abs(p) * az / (mpf(k + 1) ** m * (1 - az))
        if tail < eps * abs(s):
            return s
        if k > 10**6:
            raise ArithmeticError("polylog series did not converge")


def _polylog_alternating(m: int, r: mpf) -> mpf:
    # sum_{n>=1} (-r)^n n^{-m} = -sum_{k>=0} (-1)^k r^{k+1} (k+1)^{-m}
    d = alternating_terms_needed(mp.dps)
    return -sum_alternating(r ** (k + 1) / mpf(k + 1) ** m for k in range(d))


def alt_zeta_limit_probe(eps) -> mpf:
    """(2^{1-s} - 1) zeta(s) at s = 1 + eps; tends to -ln 2 as eps -> 0."""
    eps = mpf(eps)
    if not 0 < eps:
        raise ValueError("eps must be positive")
    with mp.workdps(mp.dps + 5):
        v = (mpmath.power(2, -eps) - 1) * zeta(1 + eps)
    return +v


# --- Gamma family ----------------------------------------------------------------


def _shift_target() -> int:
    return 10 + mp.dps // 2


def polygamma(j: int, x) -> mpf:
    """psi^(j)(x) for j >= 0, x > 0 (j = 0 is the digamma function)."""
    if not isinstance(j, int) or j < 0:
        raise ValueError("polygamma order must be a non-negative integer")
    x = mpf(x)
    if x <= 0:
        raise ValueError("polygamma needs x > 0")
    with mp.workdps(mp.dps + 10 + int(max(0, (j + 1) * mpmath.log10(1 / x + 1)))):
        target = _shift_target()
        shift = max(0, int(math.ceil(target - x)))
        y = x + shift
        eps = mpf(10) ** (-mp.dps)
        if j == 0:
            recur = -mpmath.fsum(1 / (x + i) for i in range(shift))
            val = mpmath.log(y) - 1 / (2 * y)
        else:
            fj = math.factorial(j)
            sign = 1 if j % 2 == 1 else -1  # (-1)^(j+1)
            recur = sign * fj * mpmath.fsum(1 / (x + i) ** (j + 1) for i in range(shift))
            val = sign * (math.factorial(j - 1) / y**j + fj / (2 * y ** (j + 1)))
        asym = _polygamma_asymptotic(j, y, eps, abs(val))
        v = val + asym + recur
    return +v


def _polygamma_asymptotic(j: int, y: mpf, eps: mpf, scale: mpf) -> mpf:
    s = mpf(0)
    prev = None
    k = 1
    y2 = y * y
    ypow = y ** (j + 2)  # y^(2k+j)
    sign = 1 if j % 2 == 1 else -1
    while True:
        if j == 0:
            term = -bernoulli(2 * k) / (2 * k * ypow)
        else:
            term = sign * bernoulli(2 * k) * mpmath.factorial(2 * k + j - 1) / (mpmath.factorial(2 * k) * ypow)
        if prev is not None and abs(term) > prev:
            raise ArithmeticError("asymptotic series diverged before reaching working precision")
        s += term
        if abs(term) < eps * scale:
            return s
        prev = abs(term)
        k += 1
        ypow *= y2


def digamma(x) -> mpf:
    return polygamma(0, x)


def log_gamma(x) -> mpf:
    """ln Gamma(x) for x > 0 (Stirling series after an upward shift)."""
    x = mpf(x)
    if x <= 0:
        raise ValueError("log_gamma needs x > 0")
    with mp.workdps(mp.dps + 10):
        shift = max(0, int(math.ceil(_shift_target() - x)))
        y = x + shift
        prod = mpf(1)
        for i in range(shift):
            prod *= x + i
        v = (y - mpf(1) / 2) * mpmath.log(y) - y + mpmath.log(2 * mp.pi) / 2
        eps = mpf(10) ** (-mp.dps)
        y2 = y * y
        ypow = y
        prev = None
        k = 1
        while True:
            term = bernoulli(2 * k) / (2 * k * (2 * k - 1) * ypow)
            if prev is not None and abs(term) > prev:
                raise ArithmeticError("Stirling series diverged before reaching working precision")
            v += term
            if abs(term) < eps * abs(v):
                break
            prev = abs(term)
            k += 1
            ypow *= y2
        v -= mpmath.log(prod)
    return +v


def gamma(x) -> mpf:
    return gamma_taylor(x, 0).series[0]


def gamma_taylor(x0, order: int = 0) -> GammaTaylor:
    """Taylor series of Gamma about x0 > 0 via exp of the log-Gamma series."""
    x0 = mpf(x0)
    if x0 <= 0:
        raise ValueError("gamma_taylor needs x0 > 0")
    if order < 0:
        raise ValueError("order must be >= 0")
    with mp.workdps(mp.dps + 10 + order * int(max(0, mpmath.log10(1 / x0 + 1)))):
        log_part = [mpf(0)]
        fact = 1
        for j in range(1, order + 1):
            fact *= j
            log_part.append(polygamma(j - 1, x0) / fact)
        g0 = mpmath.exp(log_gamma(x0))
        series = ps_exp(PowerSeries(log_part)) * g0
    return GammaTaylor(+x0, _round_series(series))


# --- zeta'/zeta -------------------------------------------------------------------


def zeta_logderiv(ell: int, s0) -> mpf:
    """(zeta'/zeta)^(ell)(s0) for s0 > 1."""
    if not isinstance(ell, int) or ell < 0:
        raise ValueError("ell must be a non-negative integer")
    s0 = mpf(s0)
    if s0 <= 1:
        raise ValueError("zeta_logderiv needs s0 > 1")
    with mp.workdps(mp.dps + 5):
        z = hurwitz_taylor(s0, 1, ell + 1).series
        q = ps_div(ps_derivative(z), z.truncate(ell))
        v = q[ell] * math.factorial(ell)
    return +v
