"""Precision-parameterized real arithmetic and the shared elementary pieces.

Every real value in the package is an ``mpmath.mpf``; the working precision is
the ambient ``mpmath.mp`` context, set with :func:`working_digits`.  Nothing in
here evaluates a special function, only arithmetic, ``exp``/``ln``/``sqrt``/
``pow`` and Bernoulli numbers.
"""

from __future__ import annotations

import contextlib
import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

BigReal = mpf

MIN_DIGITS = 20
DIGITS_ENV = "ZETASUMS_DIGITS"
BERNOULLI_MAX = 200


def default_digits() -> int:
    """Working precision used when none is given (env ``ZETASUMS_DIGITS``, else 40)."""
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return 40
    try:
        digits = int(raw)
    except ValueError:
        raise ValueError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None
    return Precision(digits).digits


@dataclass(frozen=True)
class Precision:
    digits: int

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < MIN_DIGITS:
            raise ValueError(f"precision must be an integer >= {MIN_DIGITS} digits, got {self.digits!r}")

    @property
    def eps(self) -> mpf:
        return mpf(10) ** (-self.digits)


@contextlib.contextmanager
def working_digits(digits: int):
    """Run the enclosed block at ``digits`` decimal digits."""
    with mp.workdps(digits):
        yield


def current_digits() -> int:
    return mp.dps


def eps() -> mpf:
    """Unit roundoff of the ambient context, as a decimal power."""
    return mpf(10) ** (-mp.dps)


def to_big(x) -> mpf:
    """Convert an int, Fraction, decimal string or mpf to a finite BigReal."""
    if isinstance(x, Fraction):
        v = mpf(x.numerator) / x.denominator
    elif isinstance(x, str) and "/" in x:
        num, den = x.split("/", 1)
        v = mpf(num.strip()) / mpf(den.strip())
    else:
        v = mpf(x)
    return _finite(v)


def _finite(v: mpf) -> mpf:
    if mpmath.isnan(v) or mpmath.isinf(v):
        raise OverflowError("non-finite result")
    return v


def arith(x, y, op: str) -> mpf:
    """``x op y`` for op in ``+ - * /`` (``×``/``÷`` accepted too)."""
    x = mpf(x)
    y = mpf(y)
    if op == "+":
        r = x + y
    elif op in ("-", "−"):
        r = x - y
    elif op in ("*", "×"):
        r = x * y
    elif op in ("/", "÷"):
        if y == 0:
            raise ZeroDivisionError("division by zero")
        r = x / y
    else:
        raise ValueError(f"unknown operator {op!r}")
    return _finite(r)


def elementary(x, fn: str, y=None) -> mpf:
    """Evaluate ``ln``, ``exp``, ``sqrt`` or ``pow`` (``x**y``) with domain checks."""
    x = mpf(x)
    if fn == "ln":
        if x <= 0:
            raise ValueError("ln requires x > 0")
        r = mpmath.log(x)
    elif fn == "exp":
        r = mpmath.exp(x)
    elif fn == "sqrt":
        if x < 0:
            raise ValueError("sqrt requires x >= 0")
        r = mpmath.sqrt(x)
    elif fn == "pow":
        if y is None:
            raise ValueError("pow needs an exponent")
        y = mpf(y)
        if x < 0 and y != int(y):
            raise ValueError("non-integer power of a negative number")
        if x == 0 and y < 0:
            raise ZeroDivisionError("zero to a negative power")
        r = mpmath.power(x, y)
    else:
        raise ValueError(f"unknown elementary function {fn!r}")
    return _finite(r)


def ln2() -> mpf:
    return mpmath.log(2)


def pi() -> mpf:
    return +mp.pi


# --- Bernoulli numbers ------------------------------------------------------

_bern_lock = threading.Lock()
_bern_exact: list[Fraction] = [Fraction(1)]


def _extend_bernoulli(n: int) -> None:
    # sum_{k=0}^{m} C(m+1, k) B_k = 0, with B_1 = -1/2 kept in the table
    with _bern_lock:
        table = _bern_exact
        for m in range(len(table), n + 1):
            acc = Fraction(0)
            binom = 1  # C(m+1, 0)
            for k in range(m):
                acc += binom * table[k]
                binom = binom * (m + 1 - k) // (k + 1)
            table.append(-acc / (m + 1))


def bernoulli_exact(n: int, limit: int = BERNOULLI_MAX) -> Fraction:
    """Exact B_n (``B_1 = -1/2`` convention); n even except for n=1."""
    if not isinstance(n, int) or n < 0:
        raise ValueError("Bernoulli index must be a non-negative integer")
    if n > limit:
        raise ValueError(f"Bernoulli index {n} exceeds configured maximum {limit}")
    if n % 2 == 1 and n > 1:
        raise ValueError("odd Bernoulli numbers beyond B_1 vanish and are not served")
    if n >= len(_bern_exact):
        _extend_bernoulli(n)
    return _bern_exact[n]


def bernoulli(n: int, limit: int = BERNOULLI_MAX) -> mpf:
    """B_n rounded to the working precision."""
    b = bernoulli_exact(n, limit)
    return mpf(b.numerator) / b.denominator


# --- alternating series -----------------------------------------------------


def alternating_weights(d: int) -> tuple[int, list[int]]:
    """Integer weights (denominator, c_0..c_{d-1}) of the Chebyshev-based
    acceleration for sums of the form sum_k (-1)^k b_k.

    The weights alternate in sign themselves, so the accelerated value is
    ``sum_k c_k b_k / denom``.  For b_k a moment sequence of a positive
    measure on [0, 1] the relative error is bounded by ``2 / (3 + sqrt 8)^d``.
    """
    if d < 4:
        raise ValueError("acceleration needs at least 4 terms")
    # denom = ((3+sqrt8)^d + (3+sqrt8)^-d)/2 = T_d(3), exactly an integer
    t_prev, t_cur = 1, 3
    for _ in range(d - 1):
        t_prev, t_cur = t_cur, 6 * t_cur - t_prev
    denom = t_cur
    weights = []
    b = -1
    c = -denom
    for k in range(d):
        c = b - c
        weights.append(c)
        b = b * 2 * (k + d) * (k - d) // ((2 * k + 1) * (k + 1))
    return denom, weights


def sum_alternating(terms) -> mpf:
    """Accelerated value of sum_{k>=0} (-1)^k terms[k] from the given terms."""
    terms = list(terms)
    denom, weights = alternating_weights(len(terms))
    s = mpf(0)
    for w, b in zip(weights, terms):
        s += w * b
    return s / denom


def alternating_terms_needed(target_digits: int | float) -> int:
    """Number of terms giving roughly ``target_digits`` correct digits."""
    # log10(3 + sqrt 8) = 0.7655...
    return max(4, math.ceil(1.4 * target_digits))
