"""Coefficient families of the zeta and Gamma expansions, with a shared cache.

* ``stieltjes_a(k, a)``: gamma_k(a) in zeta(s, a) = 1/(s-1) + sum (-1)^k gamma_k(a) (s-1)^k / k!
* ``stieltjes(k)``: gamma_k = gamma_k(1)
* ``gamma_c_coeffs(K)``: c_j in Gamma(x) - 1/x = sum c_j x^j / (j+1)!
* ``eta_coeffs(K)``: eta_j in zeta'/zeta(s) = -1/(s-1) - sum eta_j (s-1)^j

This module deliberately does not import :mod:`zetasums.special`; the sums
module compares the two, so they must not share an evaluator.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import threading
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from .numeric import Precision, bernoulli, default_digits
from .powser import LaurentSeries, PowerSeries, laurent_logderiv_regular, ps_exp

K_MAX = 160
CACHE_VERSION = 1

FAMILIES = ("stieltjes", "stieltjes_a", "gamma_c", "eta", "zeta")


def param_key(a) -> str:
    """Canonical text form of the Hurwitz parameter used in cache keys."""
    if a is None:
        return "-"
    if isinstance(a, Fraction):
        a = mpf(a.numerator) / a.denominator
    elif isinstance(a, str):
        a = parse_param(a)
    with mp.workdps(50):
        return mpmath.nstr(mpf(a), 30, strip_zeros=True)


def parse_param(text: str) -> mpf:
    """Parse ``"1/2"``, ``"0.5"`` or ``"2"`` into an mpf at the current precision."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return mpf(num.strip()) / mpf(den.strip())
    return mpf(text)


class ConstantsTable:
    """Compute-if-absent store of coefficient values.

    Keys are ``(family, k, param_key, digits)``.  A stored entry is never
    replaced.  Batches (all k up to K for one family) are computed under a
    lock so concurrent readers see each entry computed at most once.
    """

    def __init__(self, cache_path: str | os.PathLike | None = None, kmax: int = K_MAX):
        self.kmax = kmax
        self.entries: dict[tuple, mpf] = {}
        self._lock = threading.RLock()
        self.cache_path = Path(cache_path) if cache_path else None
        self._dirty = False
        if self.cache_path is not None and self.cache_path.exists():
            self.load(self.cache_path)

    # -- persistence
    def load(self, path) -> None:
        with open(path) as fh:
            doc = json.load(fh)
        if doc.get("version") != CACHE_VERSION:
            raise ValueError(f"unsupported cache version {doc.get('version')!r}")
        with self._lock:
            for key, text in doc["entries"].items():
                family, k, akey, digits = key.split("/")
                with mp.workdps(int(digits) + 10):
                    value = mpf(text)
                self.entries.setdefault((family, int(k), akey, int(digits)), value)

    def save(self, path=None) -> None:
        path = Path(path) if path else self.cache_path
        if path is None:
            return
        with self._lock:
            out = {}
            for (family, k, akey, digits), v in sorted(self.entries.items()):
                out[f"{family}/{k}/{akey}/{digits}"] = mpmath.nstr(v, digits + 5, strip_zeros=False)
            doc = {"version": CACHE_VERSION, "entries": out}
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".constants-", suffix=".json")
            try:
                with os.fdopen(fd, "w") as fh:
                    json.dump(doc, fh, indent=1, sort_keys=True)
                os.replace(tmp, path)
            except BaseException:
                os.unlink(tmp)
                raise
            self._dirty = False

    def flush(self) -> None:
        if self._dirty and self.cache_path is not None:
            self.save()

    # -- lookup
    def _check_k(self, k: int) -> None:
        if not isinstance(k, int) or k < 0:
            raise ValueError("coefficient index must be a non-negative integer")
        if k > self.kmax:
            raise ValueError(f"index {k} exceeds K_max = {self.kmax}")

    def get_batch(self, family: str, K: int, a, digits: int, compute) -> list[mpf]:
        """Values for k = 0..K, calling ``compute(K)`` once if any is missing."""
        akey = param_key(a)
        keys = [(family, k, akey, digits) for k in range(K + 1)]
        with self._lock:
            if not all(key in self.entries for key in keys):
                values = compute(K)
                for key, v in zip(keys, values):
                    if key not in self.entries:
                        self.entries[key] = v
                        self._dirty = True
            return [self.entries[key] for key in keys]

    def get(self, family: str, k: int, a, digits: int, compute) -> mpf:
        akey = param_key(a)
        key = (family, k, akey, digits)
        with self._lock:
            if key not in self.entries:
                self.entries[key] = compute()
                self._dirty = True
            return self.entries[key]


_default_table = ConstantsTable()


def default_table() -> ConstantsTable:
    return _default_table


def set_default_table(table: ConstantsTable) -> None:
    global _default_table
    _default_table = table


def _resolve(digits, table):
    digits = Precision(digits if digits is not None else default_digits()).digits
    return digits, (table if table is not None else _default_table)


# --- zeta at integers ----------------------------------------------------------


def _zeta_int_em(k: int, N: int) -> mpf:
    """p-series to N-1 plus Euler-Maclaurin tail."""
    s = mpmath.fsum(mpf(n) ** (-k) for n in range(1, N))
    X = mpf(N)
    s += X ** (1 - k) / (k - 1) + X ** (-k) / 2
    eps = mpf(10) ** (-mp.dps)
    rising = mpf(k)  # (k)_{2i-1}
    xpow = X ** (-k - 1)
    fact = mpf(2)
    prev = None
    i = 1
    while True:
        term = bernoulli(2 * i) / fact * rising * xpow
        if prev is not None and abs(term) > prev:
            raise ArithmeticError("Euler-Maclaurin tail diverged; increase N")
        s += term
        if abs(term) < eps * s:
            return s
        prev = abs(term)
        rising *= (k + 2 * i - 1) * (k + 2 * i)
        xpow /= X * X
        fact *= (2 * i + 1) * (2 * i + 2)
        i += 1


def zeta_int(k: int, digits: int | None = None, table: ConstantsTable | None = None) -> mpf:
    """zeta(k) for integer k >= 2."""
    if not isinstance(k, int) or k < 2:
        raise ValueError("zeta_int needs an integer k >= 2")
    digits, table = _resolve(digits, table)

    def compute():
        with mp.workdps(digits + 10):
            return _zeta_int_em(k, int(0.4 * mp.dps) + 10)

    with mp.workdps(digits):
        return +table.get("zeta", k, None, digits, compute)


# --- generalized Stieltjes constants --------------------------------------------


def _log_derivative_polys(k: int, mmax: int) -> list[list[int]]:
    """Integer coefficient lists of P_m, m = 0..mmax, where
    d^m/dx^m [ln^k x / x] = P_m(ln x) / x^{m+1}; P_m[j] multiplies (ln x)^j."""
    p = [0] * k + [1]
    polys = [p]
    for m in range(mmax):
        # P_{m+1} = P_m' - (m+1) P_m
        nxt = [(j + 1) * p[j + 1] if j + 1 <= k else 0 for j in range(k + 1)]
        for j in range(k + 1):
            nxt[j] -= (m + 1) * p[j]
        p = nxt
        polys.append(p)
    return polys


def _stieltjes_tail(K: int, a: mpf, N: int, partial: list[mpf]) -> tuple[list[mpf], bool]:
    """Complete the partial sums over n < N into gamma_0(a)..gamma_K(a)."""
    X = N + a
    L = mpmath.log(X)
    Lpow = [mpf(1)]
    for _ in range(K + 1):
        Lpow.append(Lpow[-1] * L)
    eps = mpf(10) ** (-mp.dps)
    out = []
    ok = True
    max_terms = min(2 * mp.dps, 100)  # B_200 is the table limit
    for k in range(K + 1):
        g = partial[k] - Lpow[k + 1] / (k + 1) + Lpow[k] / X / 2
        scale = abs(partial[k]) + 1
        polys = None
        xpow = 1 / (X * X)  # X^{-(m+1)} for m = 2i-1
        prev = None
        converged = False
        for i in range(1, max_terms + 1):
            m = 2 * i - 1
            if polys is None or len(polys) <= m:
                polys = _log_derivative_polys(k, max(2 * m, 16))
            P = polys[m]
            val = mpf(0)
            for j in range(k, -1, -1):
                val = val * L + P[j]
            term = bernoulli(2 * i) / math.factorial(2 * i) * val * xpow
            if prev is not None and abs(term) > prev and abs(term) > eps * scale:
                break
            g -= term
            if abs(term) < eps * scale:
                converged = True
                break
            prev = abs(term)
            xpow /= X * X
        ok = ok and converged
        out.append(g)
    return out, ok


def _stieltjes_batch(K: int, a: mpf, digits: int, N: int | None = None) -> list[mpf]:
    """gamma_0(a)..gamma_K(a) to ``digits`` digits via Euler-Maclaurin on
    ln^k(x+a)/(x+a), validated by agreement between N and 2N summed terms."""
    N = N if N is not None else max(50, 10 * K)
    target = mpf(10) ** (-(digits + 2))
    while True:
        # partial sums reach ln^{k+1}(N+a)/(k+1); carry that many extra digits
        peak = (K + 1) * math.log10(max(math.log(2 * N + float(a)), 1.0)) + 1
        wp = digits + 12 + max(0, int(peak))
        with mp.workdps(wp):
            partial = [mpf(0)] * (K + 1)
            first = None
            for n in range(2 * N):
                if n == N:
                    first, ok1 = _stieltjes_tail(K, a, N, partial)
                x = n + a
                lx = mpmath.log(x)
                c = 1 / x
                for k in range(K + 1):
                    partial[k] += c
                    c *= lx
            second, ok2 = _stieltjes_tail(K, a, 2 * N, partial)
            agree = all(abs(u - v) <= target * max(1, abs(v)) for u, v in zip(first, second))
        if ok1 and ok2 and agree:
            return second
        N *= 2
        if N > 10**6:
            raise ArithmeticError("Stieltjes Euler-Maclaurin failed to self-validate")


def stieltjes_a_coeffs(K: int, a, digits: int | None = None, table: ConstantsTable | None = None) -> list[mpf]:
    """[gamma_0(a), ..., gamma_K(a)]."""
    digits, table = _resolve(digits, table)
    if not isinstance(K, int) or K < 0:
        raise ValueError("K must be a non-negative integer")
    table._check_k(K)
    with mp.workdps(digits + 10):
        a_val = parse_param(a) if isinstance(a, str) else mpf(a)
    if a_val <= 0:
        raise ValueError("the Hurwitz parameter a must be positive")
    family = "stieltjes" if a_val == 1 else "stieltjes_a"
    vals = table.get_batch(family, K, None if family == "stieltjes" else a_val, digits,
                           lambda KK: _stieltjes_batch(KK, a_val, digits))
    with mp.workdps(digits):
        return [+v for v in vals]


def stieltjes_a(k: int, a, digits: int | None = None, table: ConstantsTable | None = None) -> mpf:
    """Generalized Stieltjes constant gamma_k(a), a > 0."""
    return stieltjes_a_coeffs(k, a, digits, table)[k]


def stieltjes(k: int, digits: int | None = None, table: ConstantsTable | None = None) -> mpf:
    """Stieltjes constant gamma_k (so gamma_0 is Euler's constant)."""
    return stieltjes_a_coeffs(k, 1, digits, table)[k]


def euler_gamma(digits: int | None = None, table: ConstantsTable | None = None) -> mpf:
    return stieltjes(0, digits, table)


# --- Gamma Taylor coefficients ---------------------------------------------------


def gamma_c_coeffs(K: int, digits: int | None = None, table: ConstantsTable | None = None) -> list[mpf]:
    """[c_0, ..., c_K] with Gamma(x) - 1/x = sum_j c_j x^j / (j+1)!.

    Built from ln Gamma(1+x) = -gamma x + sum_{k>=2} (-1)^k zeta(k) x^k / k,
    exponentiated as a formal series.
    """
    digits, table = _resolve(digits, table)
    if not isinstance(K, int) or K < 0:
        raise ValueError("K must be a non-negative integer")
    table._check_k(K)

    def compute(KK):
        with mp.workdps(digits + 10):
            g = euler_gamma(digits + 10, table)
            log_series = [mpf(0), -g]
            for k in range(2, KK + 2):
                z = zeta_int(k, digits + 10, table)
                log_series.append((z if k % 2 == 0 else -z) / k)
            e = ps_exp(PowerSeries(log_series))  # Gamma(1+x) = x Gamma(x)
            return [e[j + 1] * math.factorial(j + 1) for j in range(KK + 1)]

    vals = table.get_batch("gamma_c", K, None, digits, compute)
    with mp.workdps(digits):
        return [+v for v in vals]


# --- zeta'/zeta Laurent coefficients ---------------------------------------------


def zeta_laurent(K: int, digits: int | None = None, table: ConstantsTable | None = None) -> LaurentSeries:
    """zeta(1+t) = 1/t + sum_{k<=K} (-1)^k gamma_k t^k / k!."""
    digits, table = _resolve(digits, table)
    g = stieltjes_a_coeffs(K, 1, digits, table)
    with mp.workdps(digits):
        reg = [(g[k] if k % 2 == 0 else -g[k]) / math.factorial(k) for k in range(K + 1)]
        return LaurentSeries.simple_pole(1, PowerSeries(reg))


def eta_coeffs(K: int, digits: int | None = None, table: ConstantsTable | None = None) -> list[mpf]:
    """[eta_0, ..., eta_K] from the log-derivative of the zeta Laurent series."""
    digits, table = _resolve(digits, table)
    if not isinstance(K, int) or K < 0:
        raise ValueError("K must be a non-negative integer")
    table._check_k(K + 1)

    def compute(KK):
        wd = digits + 10
        z = zeta_laurent(KK + 1, wd, table)
        with mp.workdps(wd):
            r = laurent_logderiv_regular(z.derivative(), z)
            return [-r[j] for j in range(KK + 1)]

    vals = table.get_batch("eta", K, None, digits, compute)
    with mp.workdps(digits):
        return [+v for v in vals]


def constants_report(digits: int | None = None, table: ConstantsTable | None = None) -> dict:
    """Closed-form spot values used in reports: gamma, gamma_1, c_1, eta_1 and their ln 2 multiples."""
    digits, table = _resolve(digits, table)
    g = euler_gamma(digits, table)
    g1 = stieltjes(1, digits, table)
    c = gamma_c_coeffs(1, digits, table)
    eta = eta_coeffs(1, digits, table)
    with mp.workdps(digits):
        ln2 = mpmath.log(2)
        return {
            "gamma": g,
            "gamma_1": g1,
            "gamma_1_ln2": g1 * ln2,
            "c_1": c[1],
            "c_1_half_ln2": c[1] / 2 * ln2,
            "eta_1": eta[1],
            "eta_1_ln2": eta[1] * ln2,
        }
