from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from zetasums.numeric import (
    Precision,
    alternating_weights,
    arith,
    bernoulli,
    bernoulli_exact,
    default_digits,
    elementary,
    sum_alternating,
    working_digits,
)


def ln2_by_halving(digits):
    # ln 2 = 2 atanh(1/3), summed at twice the precision
    with mp.workdps(2 * digits):
        x = mpf(1) / 3
        x2 = x * x
        term, s, k = x, mpf(0), 0
        while abs(term) > mpf(10) ** (-2 * digits):
            s += term / (2 * k + 1)
            term *= x2
            k += 1
        return 2 * s


def test_arith_examples():
    assert arith(1, 1, "+") == 2
    assert arith(1, 3, "÷") == mpf(1) / 3
    assert mpmath.nstr(arith(1, 3, "/"), 40) == "0." + "3" * 40
    with pytest.raises(ZeroDivisionError):
        arith(5, 0, "÷")
    with pytest.raises(ValueError):
        arith(1, 2, "%")


def test_overflow_is_an_error():
    with pytest.raises(OverflowError):
        arith(mpmath.inf, 1, "+")


def test_elementary_examples():
    assert elementary(0, "exp") == 1
    assert elementary(1, "ln") == 0
    assert elementary(4, "sqrt") == 2
    assert elementary(2, "pow", 10) == 1024
    with pytest.raises(ValueError):
        elementary(0, "ln")
    with pytest.raises(ValueError):
        elementary(-1, "sqrt")


def test_ln2_matches_independent_series_at_two_precisions():
    for digits in (30, 45):
        with working_digits(digits):
            assert abs(elementary(2, "ln") - ln2_by_halving(digits)) < mpf(10) ** (2 - digits)
    assert mpmath.nstr(elementary(2, "ln"), 16) == "0.6931471805599453"


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e6))
def test_exp_ln_roundtrip(x):
    x = mpf(x)
    assert abs(elementary(elementary(x, "ln"), "exp") - x) <= mpf(10) ** (-(mp.dps - 2)) * x


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(2) == mpf(1) / 6
    assert bernoulli_exact(12) == Fraction(-691, 2730)
    assert abs(bernoulli(12) - mpf(-691) / 2730) < mpf(10) ** (-mp.dps)


def test_bernoulli_rejects_odd_and_out_of_range():
    with pytest.raises(ValueError):
        bernoulli(3)
    with pytest.raises(ValueError):
        bernoulli(202)
    with pytest.raises(ValueError):
        bernoulli(-2)


def test_bernoulli_recurrence_holds_for_computed_orders():
    # sum_{k=0}^{n} C(n+1, k) B_k = 0 for n >= 1
    table = {0: Fraction(1), 1: Fraction(-1, 2)}
    for n in range(2, 61, 2):
        table[n] = bernoulli_exact(n)
    for n in range(1, 60):
        assert sum(comb(n + 1, k) * table.get(k, 0) for k in range(n + 1)) == 0
    for n in range(2, 61, 2):
        assert abs(bernoulli(n) - mpf(table[n].numerator) / table[n].denominator) <= abs(bernoulli(n)) * mpf(10) ** (
            -(mp.dps - 1)
        )


def test_arithmetic_is_deterministic():
    a = [elementary(mpf(k) / 7, "exp") * arith(k, 3, "/") for k in range(1, 20)]
    b = [elementary(mpf(k) / 7, "exp") * arith(k, 3, "/") for k in range(1, 20)]
    assert [x.man for x in a] == [x.man for x in b]


def test_precision_type():
    assert Precision(40).digits == 40
    with pytest.raises(ValueError):
        Precision(10)


def test_default_digits_env(monkeypatch):
    monkeypatch.delenv("ZETASUMS_DIGITS", raising=False)
    assert default_digits() == 40
    monkeypatch.setenv("ZETASUMS_DIGITS", "55")
    assert default_digits() == 55
    monkeypatch.setenv("ZETASUMS_DIGITS", "5")
    with pytest.raises(ValueError):
        default_digits()


def test_acceleration_weights_are_integers():
    denom, w = alternating_weights(10)
    assert isinstance(denom, int) and all(isinstance(x, int) for x in w)
    with pytest.raises(ValueError):
        alternating_weights(3)


@pytest.mark.parametrize(
    "b, expected",
    [
        (lambda n: mpf(1) / n, lambda: mpmath.log(2)),
        (lambda n: mpf(1) / n**2, lambda: mp.pi**2 / 12),
        (lambda n: mpf(1) / (n + 1), lambda: 1 - mpmath.log(2)),
    ],
)
def test_sum_alternating_examples(b, expected):
    got = sum_alternating(b(k + 1) for k in range(40))
    assert abs(got - expected()) < mpf(10) ** -15
