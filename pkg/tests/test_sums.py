import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from zetasums import constants as C
from zetasums.sums import (
    PropositionCase,
    accelerate_alternating,
    default_grid,
    gamma_abel_value,
    lhs_sum,
    rhs_sum,
    rhs_sum_reindexed,
    summand,
    verify,
)

DIGITS = 40


def tol(loss=5):
    return mpf(10) ** (loss - DIGITS)


def test_case_normalization_and_validation():
    c = PropositionCase("1", 0)
    assert c.prop == "P1" and c.z == Fraction(1) and c.ell is None
    assert PropositionCase("P3", 0, 1, "2", "1/2").a == Fraction(1, 2)
    bad = [
        dict(prop="P5", j=0),
        dict(prop="P1", j=-1),
        dict(prop="P1", j=0, z=Fraction(1, 2)),
        dict(prop="P1", j=0, z=-1),
        dict(prop="P3", j=0, ell=0, a=1),
        dict(prop="P3", j=0, ell=1),
        dict(prop="P3", j=0, ell=1, a=0),
        dict(prop="P4", j=0),
        dict(prop="P2", j=0, a=1),
    ]
    for kw in bad:
        with pytest.raises(ValueError):
            PropositionCase(**kw)


def test_summand_first_terms():
    g = C.euler_gamma()
    assert abs(summand(PropositionCase("P1", 0), 1) - (mp.pi**2 / 6 - 1 - g)) < tol()
    assert abs(summand(PropositionCase("P2", 0), 1) + g) < tol()


@pytest.mark.parametrize("n", [50, 100])
def test_p1_summand_decays_like_stieltjes_one(n):
    g1 = C.stieltjes(1)
    assert abs(summand(PropositionCase("P1", 0), n) * n + g1) <= mpf("0.01") / n


def test_cancellation_guard():
    case = PropositionCase("P1", 0)
    v = summand(case, 100, DIGITS)
    ref = summand(case, 100, DIGITS + 10)
    assert abs(v - ref) <= abs(ref) * mpf(10) ** (-(DIGITS - 2 * math.log10(100**2)))


@pytest.mark.parametrize(
    "b, expected",
    [
        (lambda n: mpf(1) / n, lambda: mpmath.log(2)),
        (lambda n: mpf(1) / n**2, lambda: mp.pi**2 / 12),
        (lambda n: mpf(1) / (n + 1), lambda: 1 - mpmath.log(2)),
    ],
)
def test_accelerate_alternating(b, expected):
    assert abs(accelerate_alternating([b(n) for n in range(1, 41)]) - expected()) < mpf(10) ** -15


def test_accelerate_needs_four_terms():
    with pytest.raises(ValueError):
        accelerate_alternating([mpf(1), mpf(2)])


def test_reference_left_sides():
    s0, _ = lhs_sum(PropositionCase("P1", 0), DIGITS)
    t0, _ = lhs_sum(PropositionCase("P2", 0), DIGITS)
    u00, _ = lhs_sum(PropositionCase("P4", 0, 0), DIGITS)
    assert abs(s0 - mpf("-0.0462635927840")) < 5e-12
    assert abs(t0 - mpf("0.371990830350")) < 5e-12
    assert abs(abs(u00) - mpf("0.0975567")) < 5e-7


def test_s0_term_by_term_decomposition():
    # gamma_1 ln 2 + sum_{k>=2} (-1)^k gamma_k / k! (2^{1-k} - 1) zeta(k)
    with mp.workdps(DIGITS + 5):
        g = C.stieltjes_a_coeffs(80, 1, DIGITS + 5)
        total = g[1] * mpmath.log(2)
        for k in range(2, 81):
            total += (-1) ** k * g[k] / mpmath.factorial(k) * (mpf(2) ** (1 - k) - 1) * mpmath.zeta(k)
    rhs, _ = rhs_sum(PropositionCase("P1", 0), DIGITS)
    assert abs(rhs - total) < tol(6)


def test_t0_sign_of_log_term():
    case = PropositionCase("P2", 0)
    lhs, _ = lhs_sum(case, DIGITS)
    rhs, _ = rhs_sum(case, DIGITS)
    half = C.constants_report(DIGITS)["c_1_half_ln2"]
    assert abs(lhs - rhs) < tol(10)
    assert abs(lhs - (rhs - 2 * half)) > 1


def test_gamma_abel_value_at_zero():
    # Gamma(1) - 1 - c_0 = gamma
    assert abs(gamma_abel_value(0, DIGITS) - C.euler_gamma()) < tol()


@pytest.mark.parametrize(
    "case",
    [
        PropositionCase("P1", 0),
        PropositionCase("P3", 1, 1, 1, 1),
        PropositionCase("P1", 0, None, 2),
        PropositionCase("P4", 1, 2, 10),
        PropositionCase("T", 2, 1, -2),
        PropositionCase("P3", 0, 2, 1, "1/2"),
    ],
)
def test_verify_examples(case):
    rec = verify(case, mpf("1e-20"), DIGITS)
    assert rec.passed, (rec.lhs, rec.rhs, rec.rel_diff)
    assert rec.lhs_terms > 0 and rec.rhs_terms > 0


def test_verify_tolerance_floor():
    with pytest.raises(ValueError):
        verify(PropositionCase("P1", 0), mpf("1e-30"), DIGITS)


@pytest.mark.parametrize("prop, ell, a", [("P1", None, None), ("P2", None, None), ("P3", 1, 2),
                                          ("P4", 1, None), ("T", 0, None)])
def test_j_shift_reindexing(prop, ell, a):
    for j in (0, 1):
        case = PropositionCase(prop, j, ell, 1, a)
        assert abs(rhs_sum(case, DIGITS)[0] - rhs_sum_reindexed(case, DIGITS)) < tol(8)


@pytest.mark.parametrize("prop, ell, a", [("P1", None, None), ("P2", None, None), ("P3", 1, "1/2"),
                                          ("P4", 0, None), ("T", 1, None)])
def test_z_decay(prop, ell, a):
    vals = [abs(lhs_sum(PropositionCase(prop, 0, ell, z, a), DIGITS)[0]) for z in (2, 4, 8)]
    assert vals[0] > vals[1] > vals[2]


def test_default_grid_is_canonical():
    grid = default_grid()
    assert grid == sorted(grid, key=PropositionCase.sort_key)
    assert len(grid) == len(set(grid))
    assert {c.prop for c in grid} == {"P1", "P2", "P3", "P4", "T"}
