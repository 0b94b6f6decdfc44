"""Truncated power series and simple-pole Laurent series over mpf.

Series are dense, immutable and carry an explicit truncation order K (the
index of the last stored coefficient).  Binary operations truncate to the
smaller order; nothing silently extends a series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from mpmath import mp, mpf


@dataclass(frozen=True)
class PowerSeries:
    """a_0 + a_1 t + ... + a_K t^K  (mod t^{K+1})."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        cs = tuple(mpf(c) for c in coeffs)
        if not cs:
            raise ValueError("a power series needs at least one coefficient")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls([0] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1] + [0] * order)

    @classmethod
    def linear(cls, c0, c1, order: int) -> "PowerSeries":
        """c0 + c1 t truncated at ``order``."""
        cs = [c0, c1] + [0] * (order - 1)
        return cls(cs[: order + 1])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1])

    def __add__(self, other):
        return ps_add(self, other)

    def __radd__(self, other):
        return ps_add(self, other)

    def __sub__(self, other):
        return ps_sub(self, other)

    def __rsub__(self, other):
        return ps_sub(_as_series(other, self.order), self)

    def __neg__(self):
        return PowerSeries(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return ps_mul(self, other)
        return ps_scale(self, other)

    def __rmul__(self, other):
        return ps_scale(self, other)

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return ps_div(self, other)
        return ps_scale(self, 1 / mpf(other))

    def __call__(self, t):
        """Horner evaluation of the truncated polynomial."""
        acc = mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


def _as_series(x, order: int) -> PowerSeries:
    if isinstance(x, PowerSeries):
        return x
    return PowerSeries([x] + [0] * order)


def ps_add(a: PowerSeries, b) -> PowerSeries:
    b = _as_series(b, a.order)
    k = min(a.order, b.order)
    return PowerSeries(a[i] + b[i] for i in range(k + 1))


def ps_sub(a: PowerSeries, b) -> PowerSeries:
    b = _as_series(b, a.order)
    k = min(a.order, b.order)
    return PowerSeries(a[i] - b[i] for i in range(k + 1))


def ps_scale(a: PowerSeries, s) -> PowerSeries:
    s = mpf(s)
    return PowerSeries(c * s for c in a.coeffs)


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    k = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for n in range(k + 1):
        s = mpf(0)
        for i in range(n + 1):
            s += ac[i] * bc[n - i]
        out.append(s)
    return PowerSeries(out)


def ps_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Quotient q with q*b = a to order min(K_a, K_b); needs b_0 != 0."""
    if b[0] == 0:
        raise ZeroDivisionError("power series divisor has zero constant term")
    k = min(a.order, b.order)
    inv_b0 = 1 / b[0]
    q: list = []
    for n in range(k + 1):
        s = a[n]
        for i in range(n):
            s -= q[i] * b[n - i]
        q.append(s * inv_b0)
    return PowerSeries(q)


def ps_exp(a: PowerSeries) -> PowerSeries:
    """exp(a) for a_0 = 0, via n e_n = sum_{k=1}^n k a_k e_{n-k}."""
    if a[0] != 0:
        raise ValueError("ps_exp needs a zero constant term")
    e = [mpf(1)]
    for n in range(1, a.order + 1):
        s = mpf(0)
        for k in range(1, n + 1):
            s += k * a[k] * e[n - k]
        e.append(s / n)
    return PowerSeries(e)


def ps_log(a: PowerSeries) -> PowerSeries:
    """log(a) for a_0 = 1 (inverse of :func:`ps_exp`)."""
    if a[0] != 1:
        raise ValueError("ps_log needs constant term 1")
    return ps_antiderivative(ps_div(ps_derivative(a), a.truncate(a.order - 1)))


def ps_derivative(a: PowerSeries) -> PowerSeries:
    if a.order == 0:
        return PowerSeries([0])
    return PowerSeries(k * a[k] for k in range(1, a.order + 1))


def ps_antiderivative(a: PowerSeries) -> PowerSeries:
    return PowerSeries([mpf(0)] + [a[k] / (k + 1) for k in range(a.order + 1)])


def ps_compose_linear(a: PowerSeries, scale) -> PowerSeries:
    """a(scale * t)."""
    scale = mpf(scale)
    out = []
    p = mpf(1)
    for c in a.coeffs:
        out.append(c * p)
        p *= scale
    return PowerSeries(out)


def exp_linear(c, order: int) -> PowerSeries:
    """Series of exp(c t): coefficients c^m / m!."""
    c = mpf(c)
    out = [mpf(1)]
    for m in range(1, order + 1):
        out.append(out[-1] * c / m)
    return PowerSeries(out)


@dataclass(frozen=True)
class LaurentSeries:
    """pole_coeffs[i] multiplies t^{-(p-i)}, i.e. stored from t^{-p} to t^{-1}.

    Poles of order at most two are accepted: the simple poles at s = 1 of the
    zeta functions and the double pole their derivative picks up.
    """

    pole_coeffs: tuple
    regular: PowerSeries

    MAX_POLE = 2

    def __init__(self, pole_coeffs: Sequence, regular: PowerSeries):
        pc = tuple(mpf(c) for c in pole_coeffs)
        if len(pc) > self.MAX_POLE:
            raise ValueError(f"pole order {len(pc)} not supported (max {self.MAX_POLE})")
        object.__setattr__(self, "pole_coeffs", pc)
        object.__setattr__(self, "regular", regular)

    @classmethod
    def simple_pole(cls, residue, regular: PowerSeries) -> "LaurentSeries":
        return cls([residue], regular)

    @property
    def pole_order(self) -> int:
        return len(self.pole_coeffs)

    @property
    def residue(self):
        return self.pole_coeffs[-1] if self.pole_coeffs else mpf(0)

    def coeff(self, k: int):
        """Coefficient of t^k, k >= -pole_order."""
        if k < 0:
            return self.pole_coeffs[self.pole_order + k]
        return self.regular[k]

    def cleared(self) -> PowerSeries:
        """t^p times the series, as a power series of order p + K."""
        return PowerSeries(list(self.pole_coeffs) + list(self.regular.coeffs))

    def derivative(self) -> "LaurentSeries":
        if self.pole_order > 1:
            raise ValueError("derivative would raise the pole order past the supported maximum")
        d_reg = ps_derivative(self.regular)
        if self.pole_order == 0:
            return LaurentSeries([], d_reg)
        # d/dt (r t^-1) = -r t^-2; the constant of the regular part drops out
        return LaurentSeries([-self.residue, 0], d_reg)


def laurent_logderiv_regular(numer: LaurentSeries, denom: LaurentSeries) -> PowerSeries:
    """Regular part R of numer/denom = -1/t + R(t).

    ``numer`` is the derivative of ``denom`` (so it carries one more order of
    pole); the quotient's residue must come out as -1.  Both are multiplied
    through by their pole powers and divided as power series.
    """
    if denom.pole_order < 1 or denom.residue == 0:
        raise ZeroDivisionError("denominator has no simple pole (zero residue)")
    if denom.pole_order != 1:
        raise ValueError("denominator must have a simple pole")
    shift = numer.pole_order - denom.pole_order
    if shift != 1:
        raise ValueError("numerator must have a pole one order higher than the denominator")
    q = ps_div(numer.cleared(), denom.cleared())
    if abs(q[0] + 1) > mpf(10) ** (5 - mp.dps):
        raise ValueError(f"quotient residue is {q[0]}, expected -1")
    return PowerSeries(q.coeffs[1:]) if q.order >= 1 else PowerSeries([0])
