"""Both sides of the alternating-sum identities.

Left sides sum the defining series over n, with each bracket evaluated from
:mod:`zetasums.special`.  Right sides sum coefficient families from
:mod:`zetasums.constants` against polylogarithms at w = -1/z.

Propositions handled (w = -1/z, Li = polylogarithm):

``P1``  sum_n w^n n^-j [zeta(1+1/n) - n - gamma]
            = sum_{k>=1} (-1)^k gamma_k / k! Li_{j+k}(w)
``P2``  sum_n w^n n^-j [n - Gamma(1/n) - gamma]
            = -sum_{k>=1} c_k / (k+1)! Li_{j+k}(w)
``P3``  sum_n w^n n^-j [zeta^(l)(1+1/n, a) - (-1)^l l! n^(l+1) - (-1)^l gamma_l(a)]
            = sum_{k>=l+1} (-1)^k gamma_k(a) / (k-l)! Li_{j+k-l}(w)
``P4``  sum_n w^n n^-j [(zeta'/zeta)^(l)(1+1/n) + (-1)^l l! n^(l+1) + l! eta_l]
            = -sum_{k>=l+1} k! / (k-l)! eta_k Li_{j+k-l}(w)
``T``   -sum_n w^n n^-j [Gamma^(l)(1/n) - (-1)^l l! n^(l+1) - c_l / (l+1)]
            = -sum_{k>=l+1} c_k / ((k+1) (k-l)!) Li_{j+k-l}(w)

The Gamma right sides (P2, T) diverge term by term: c_k/(k+1)! tends to
(-1)^(k+1) while the n = 1 term of every Li_m(w) is w.  That n = 1 piece is
Abel-summed in closed form (the k-series at x = 1 is Gamma^(l)(1) minus the
subtracted terms, and Gamma^(l)(1) = c_{l-1}); the remaining n >= 2 part
converges geometrically.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import constants as C
from . import special as S
from .numeric import Precision, alternating_terms_needed, default_digits, sum_alternating

PROPS = ("P1", "P2", "P3", "P4", "T")
_PROP_ORDER = {p: i for i, p in enumerate(PROPS)}

ABS_FLOOR = mpf("1e-3")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(repr(x))
    raise TypeError(f"cannot use {x!r} as an exact parameter")


def frac_text(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_mpf(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class PropositionCase:
    """One (proposition, j, ell, z, a) instance; z and a are exact rationals."""

    prop: str
    j: int
    ell: int | None = None
    z: Fraction = Fraction(1)
    a: Fraction | None = None

    def __post_init__(self):
        prop = self.prop.upper()
        if prop in ("1", "2", "3", "4"):
            prop = "P" + prop
        if prop not in PROPS:
            raise ValueError(f"unknown proposition {self.prop!r}")
        object.__setattr__(self, "prop", prop)
        object.__setattr__(self, "z", _frac(self.z))
        if self.a is not None:
            object.__setattr__(self, "a", _frac(self.a))
        if not isinstance(self.j, int) or self.j < 0:
            raise ValueError("j must be a non-negative integer")
        if prop in ("P1", "P2"):
            if self.ell not in (None, 0):
                raise ValueError(f"{prop} takes no ell")
            object.__setattr__(self, "ell", None)
        elif prop == "P3":
            if not isinstance(self.ell, int) or self.ell < 1:
                raise ValueError("P3 needs an integer ell >= 1")
        else:
            if not isinstance(self.ell, int) or self.ell < 0:
                raise ValueError(f"{prop} needs an integer ell >= 0")
        if prop == "P3":
            if self.a is None or self.a <= 0:
                raise ValueError("P3 needs a > 0")
        elif self.a is not None:
            raise ValueError(f"{prop} takes no a")
        if abs(self.z) < 1 or self.z == -1:
            raise ValueError("z must satisfy |z| >= 1 and z != -1")

    @property
    def order(self) -> int:
        return self.ell or 0

    def sort_key(self):
        return (_PROP_ORDER[self.prop], self.j, -1 if self.ell is None else self.ell,
                self.z, Fraction(0) if self.a is None else self.a)

    def as_dict(self) -> dict:
        return {
            "prop": self.prop,
            "j": self.j,
            "ell": self.ell,
            "z": frac_text(self.z),
            "a": frac_text(self.a),
        }


@dataclass
class VerificationRecord:
    case: PropositionCase
    lhs: mpf
    rhs: mpf
    abs_diff: mpf
    rel_diff: mpf
    lhs_terms: int
    rhs_terms: int
    passed: bool
    wall_ms: int
    digits: int = 0
    tol: mpf = field(default_factory=lambda: mpf(0))
    error: str | None = None


# --- summands ----------------------------------------------------------------

_summand_cache: dict[tuple, mpf] = {}
_summand_lock = threading.Lock()


def _guard(n: int, ell: int) -> int:
    # the subtracted pole term is ~ n^(ell+1); that many digits cancel
    return 12 + math.ceil((ell + 2) * math.log10(n + 1))


def summand(case: PropositionCase, n: int, digits: int | None = None) -> mpf:
    """The bracketed quantity of ``case`` at index n (no w^n n^-j weight, no sign)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    digits = Precision(digits if digits is not None else default_digits()).digits
    key = (case.prop, case.ell, case.a, n, digits)
    with _summand_lock:
        hit = _summand_cache.get(key)
    if hit is not None:
        return hit
    value = _summand(case, n, digits)
    with _summand_lock:
        _summand_cache.setdefault(key, value)
    return value


def clear_caches() -> None:
    with _summand_lock:
        _summand_cache.clear()


def _summand(case: PropositionCase, n: int, digits: int) -> mpf:
    ell = case.order
    wp = digits + _guard(n, ell)
    with mp.workdps(wp):
        x = mpf(1) / n
        s0 = 1 + x
        pole = math.factorial(ell) * mpf(n) ** (ell + 1)  # l! n^(l+1)
        sgn = -1 if ell % 2 else 1
        if case.prop == "P1":
            g = C.euler_gamma(wp)
            return S.hurwitz_taylor(s0, 1, 0).series[0] - n - g
        if case.prop == "P2":
            g = C.euler_gamma(wp)
            return n - S.gamma(x) - g
        if case.prop == "P3":
            a = to_mpf(case.a)
            ga = C.stieltjes_a(ell, a, wp)
            zl = S.hurwitz_taylor(s0, a, ell).derivative(ell)
            return zl - sgn * pole - sgn * ga
        if case.prop == "P4":
            eta = C.eta_coeffs(ell, wp)[ell]
            return S.zeta_logderiv(ell, s0) + sgn * pole + math.factorial(ell) * eta
        # T
        c = C.gamma_c_coeffs(ell, wp)[ell]
        gl = S.gamma_taylor(x, ell).derivative(ell)
        return gl - sgn * pole - c / (ell + 1)


def _lhs_sign(case: PropositionCase) -> int:
    return -1 if case.prop == "T" else 1


# --- left side -----------------------------------------------------------------


def lhs_sum(case: PropositionCase, digits: int | None = None) -> tuple[mpf, int]:
    """Direct summation of the defining series; accelerated when z = 1."""
    digits = Precision(digits if digits is not None else default_digits()).digits
    sign = _lhs_sign(case)
    with mp.workdps(digits + 10):
        z = to_mpf(case.z)
        w = -1 / z
        if case.z == 1:
            # n = 1 directly, then sum_{n>=2} (-1)^n b_n = sum_{k>=0} (-1)^k b_{k+2}
            d = alternating_terms_needed(digits)
            first = -summand(case, 1, digits)
            b = [summand(case, n, digits) / mpf(n) ** case.j for n in range(2, d + 2)]
            total = first + sum_alternating(b)
            return +(sign * total), d + 1
        aw = abs(w)
        eps = mpf(10) ** (-(digits + 3))
        total = mpf(0)
        p = mpf(1)
        small = 0
        n = 0
        while small < 3:
            n += 1
            p *= w
            term = p * summand(case, n, digits) / mpf(n) ** case.j
            total += term
            if abs(term) / (1 - aw) < eps * max(abs(total), ABS_FLOOR):
                small += 1
            else:
                small = 0
            if n > 200000:
                raise ArithmeticError("left-side series did not converge")
        return +(sign * total), n


def accelerate_alternating(terms) -> mpf:
    """sum_{k>=0} (-1)^k terms[k] from the magnitudes terms[0..d-1]."""
    return sum_alternating(terms)


# --- right side ----------------------------------------------------------------


def polylog_at(m: int, w: mpf, digits: int) -> mpf:
    """Li_m(w) for the right sides; at w = -1 uses the alternating zeta relation
    with zeta(m) from the constants module."""
    if w == -1:
        if m == 1:
            return -mpmath.log(2)
        return (mpmath.ldexp(mpf(1), 1 - m) - 1) * C.zeta_int(m, digits)
    return S.polylog_int(m, w)


class SeriesNotConverged(ArithmeticError):
    pass


def _coefficients(case: PropositionCase, K: int, digits: int) -> list[mpf]:
    """coef[k] for k = 0..K so that rhs = sum_{k>=ell+1} coef[k] Li_{j+k-ell}(w)."""
    ell = case.order
    if case.prop == "P1":
        g = C.stieltjes_a_coeffs(K, 1, digits)
        return [(g[k] if k % 2 == 0 else -g[k]) / math.factorial(k) for k in range(K + 1)]
    if case.prop == "P3":
        g = C.stieltjes_a_coeffs(K, to_mpf(case.a), digits)
        out = []
        for k in range(K + 1):
            if k < ell:
                out.append(mpf(0))
            else:
                out.append((g[k] if k % 2 == 0 else -g[k]) / math.factorial(k - ell))
        return out
    if case.prop == "P4":
        eta = C.eta_coeffs(K, digits)
        return [mpf(0) if k < ell else -mpf(math.factorial(k) // math.factorial(k - ell)) * eta[k]
                for k in range(K + 1)]
    c = C.gamma_c_coeffs(K, digits)
    return [mpf(0) if k < ell else -c[k] / ((k + 1) * math.factorial(k - ell)) for k in range(K + 1)]


def gamma_abel_value(ell: int, digits: int) -> mpf:
    """Abel value of sum_{k>=ell+1} c_k / ((k+1)(k-ell)!), the ell-th bracket at x = 1.

    Equals Gamma^(ell)(1) - (-1)^ell ell! - c_ell/(ell+1), using
    Gamma^(ell)(1) = c_{ell-1} for ell >= 1 and Gamma(1) = 1.
    """
    c = C.gamma_c_coeffs(ell, digits)
    g_at_1 = mpf(1) if ell == 0 else c[ell - 1]
    sgn = -1 if ell % 2 else 1
    return g_at_1 - sgn * math.factorial(ell) - c[ell] / (ell + 1)


def _kmax() -> int:
    return C.default_table().kmax


def rhs_sum(case: PropositionCase, digits: int | None = None) -> tuple[mpf, int]:
    """Coefficient-series side, truncated once three consecutive terms drop
    below 10^-(digits-5) relative to the running sum."""
    digits = Precision(digits if digits is not None else default_digits()).digits
    ell = case.order
    split = case.prop in ("P2", "T")
    cd = digits + 5
    with mp.workdps(cd):
        w = -1 / to_mpf(case.z)
        tol = mpf(10) ** (-(digits - 5))
        kmax = _kmax() - (1 if case.prop == "P4" else 0)
        K = min(40, kmax)
        while True:
            coef = _coefficients(case, K, cd)
            total = mpf(0)
            if split:
                # n = 1 part of every Li, summed over k in closed form
                total = -w * gamma_abel_value(ell, cd)
            small = 0
            used = 0
            for k in range(ell + 1, K + 1):
                m = case.j + k - ell
                li = polylog_at(m, w, cd)
                if split:
                    li -= w
                term = coef[k] * li
                total += term
                used += 1
                if abs(term) < tol * max(abs(total), ABS_FLOOR):
                    small += 1
                    if small >= 3:
                        return +total, used
                else:
                    small = 0
            if K >= kmax:
                raise SeriesNotConverged(
                    f"{case.prop} right side not converged after k = {K} (K_max = {kmax})")
            K = min(2 * K, kmax)


def rhs_sum_reindexed(case: PropositionCase, digits: int | None = None) -> mpf:
    """Same right side with the summation index r = j + k - ell running over
    polylog orders; used to cross-check the index bookkeeping in rhs_sum."""
    digits = Precision(digits if digits is not None else default_digits()).digits
    ell = case.order
    _, used = rhs_sum(case, digits)
    cd = digits + 5
    with mp.workdps(cd):
        w = -1 / to_mpf(case.z)
        K = ell + used
        coef = _coefficients(case, K, cd)
        split = case.prop in ("P2", "T")
        total = -w * gamma_abel_value(ell, cd) if split else mpf(0)
        for r in range(case.j + 1, case.j + used + 1):
            k = r - case.j + ell
            li = polylog_at(r, w, cd) - (w if split else 0)
            total += coef[k] * li
        return +total


# --- verification -------------------------------------------------------------


def verify(case: PropositionCase, tol=None, digits: int | None = None) -> VerificationRecord:
    """Evaluate both sides and compare: relative difference, or absolute when |rhs| < 1e-3."""
    digits = Precision(digits if digits is not None else default_digits()).digits
    floor = mpf(10) ** (-(digits - 15))
    tol = mpf(tol) if tol is not None else floor
    if tol < floor * (1 - mpf("1e-10")):
        raise ValueError(f"tolerance {tol} is below 10^-(digits-15) = {floor}")
    start = time.perf_counter()
    lhs, nl = lhs_sum(case, digits)
    rhs, nr = rhs_sum(case, digits)
    with mp.workdps(digits):
        diff = abs(lhs - rhs)
        rel = diff / abs(rhs) if abs(rhs) >= ABS_FLOOR else diff
    ms = int(round((time.perf_counter() - start) * 1000))
    return VerificationRecord(case, lhs, rhs, diff, rel, nl, nr, bool(rel <= tol), ms, digits, tol)


def default_grid(js=(0, 1, 2), zs=(1, 2, 10), ells=(0, 1, 2), avals=("1", "1/2", "2"),
                 props=PROPS) -> list[PropositionCase]:
    """The proposition grid in canonical order."""
    cases = []
    for prop in props:
        for j in js:
            for z in zs:
                if prop in ("P1", "P2"):
                    cases.append(PropositionCase(prop, j, None, z))
                elif prop == "P3":
                    for ell in ells:
                        if ell < 1:
                            continue
                        for a in avals:
                            cases.append(PropositionCase(prop, j, ell, z, a))
                else:
                    for ell in ells:
                        cases.append(PropositionCase(prop, j, ell, z))
    return sorted(set(cases), key=PropositionCase.sort_key)
