import json
import math

import mpmath
import pytest
from mpmath import mp, mpf

from zetasums import constants as C
from zetasums.special import digamma, hurwitz_taylor, zeta_logderiv


def tol(loss=5):
    return mpf(10) ** (loss - mp.dps)


def poly_fit(f, hs):
    """Coefficients of the interpolating polynomial through (h, f(h))."""
    A = mpmath.matrix([[h**i for i in range(len(hs))] for h in hs])
    return mpmath.lu_solve(A, mpmath.matrix([f(h) for h in hs]))


def euler_gamma_em(N, M):
    # H_N - ln N - 1/(2N) + sum B_{2k} / (2k N^{2k})
    with mp.workdps(2 * mp.dps):
        s = mpmath.fsum(mpf(1) / n for n in range(1, N + 1)) - mpmath.log(N) - mpf(1) / (2 * N)
        s += mpmath.fsum(mpmath.bernoulli(2 * k) / (2 * k * mpf(N) ** (2 * k)) for k in range(1, M + 1))
    return s


def test_euler_gamma_against_harmonic_oracle():
    o1, o2 = euler_gamma_em(60, 25), euler_gamma_em(120, 30)
    assert abs(o1 - o2) < tol()
    assert abs(C.euler_gamma() - o2) < tol()
    assert mpmath.nstr(C.euler_gamma(), 17) == "0.57721566490153286"


def test_euler_gamma_consistency():
    assert C.euler_gamma() == C.stieltjes(0)
    assert abs(C.euler_gamma() + digamma(1)) < tol()


def test_zeta_int_closed_forms():
    assert abs(C.zeta_int(2) - mp.pi**2 / 6) < tol()
    assert abs(C.zeta_int(4) - mp.pi**4 / 90) < tol()
    with pytest.raises(ValueError):
        C.zeta_int(1)


def test_zeta_three_against_direct_sum():
    # direct sum of 1/n^3 plus an Euler-Maclaurin tail, at doubled parameters
    N, M = 80, 30
    with mp.workdps(2 * mp.dps):
        s = mpmath.fsum(mpf(n) ** -3 for n in range(1, N))
        s += mpf(N) ** -2 / 2 + mpf(N) ** -3 / 2
        rising = mpf(3)
        for k in range(1, M + 1):
            # d^{2k-1}/dx^{2k-1} x^{-3} = -(3)_{2k-1} x^{-2-2k}
            s += mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) * rising * mpf(N) ** (-2 - 2 * k)
            rising *= (2 * k + 2) * (2 * k + 3)
    assert abs(C.zeta_int(3) - s) < tol()
    assert mpmath.nstr(C.zeta_int(3), 17) == "1.2020569031595943"


def test_stieltjes_one_stable_across_parameters():
    v1 = C._stieltjes_batch(2, mpf(1), mp.dps, N=60)[1]
    v2 = C._stieltjes_batch(2, mpf(1), mp.dps, N=150)[1]
    assert abs(v1 - v2) < tol()
    assert abs(C.stieltjes(1) - v2) < tol()
    assert mpmath.nstr(C.stieltjes(1), 15) == "-0.0728158454836767"
    assert abs(C.stieltjes(1) * mpmath.log(2) - mpf("-0.0504720979971")) < 5e-13


@pytest.mark.parametrize("a", ["1", "1/2", "2"])
def test_stieltjes_a_zero_is_minus_digamma(a):
    av = C.parse_param(a)
    assert abs(C.stieltjes_a(0, av) + digamma(av)) < tol()


def test_stieltjes_a_reduces_to_riemann():
    for k in range(6):
        assert abs(C.stieltjes_a(k, 1) - C.stieltjes(k)) <= tol()


def test_stieltjes_a_one_half_by_extrapolation():
    # -(zeta'(1+h, a) + 1/h^2) = gamma_1(a) - gamma_2(a) h + ...
    a = mpf(1) / 2
    with mp.workdps(3 * mp.dps):
        hs = [mpf(i) / 96 for i in range(1, 25)]
        c = poly_fit(lambda h: -(hurwitz_taylor(1 + h, a, 1).derivative(1) + 1 / h**2), hs)
    assert abs(C.stieltjes_a(1, a) - c[0]) < tol(8)


def test_stieltjes_matches_mpmath_at_several_orders():
    for k in (2, 5, 10, 20):
        ref = mpmath.stieltjes(k)
        assert abs(C.stieltjes(k) - ref) < tol() * max(1, abs(ref))


def test_stieltjes_index_bounds():
    with pytest.raises(ValueError):
        C.stieltjes(C.K_MAX + 1)
    with pytest.raises(ValueError):
        C.stieltjes_a(0, 0)


def test_gamma_c_coefficients():
    g = C.euler_gamma()
    c = C.gamma_c_coeffs(20)
    assert abs(c[0] + g) < tol()
    assert abs(c[1] - (g**2 + mp.pi**2 / 6)) < tol()
    for k in range(2, 21):
        r = c[k] / math.factorial(k + 1)
        assert (r > 0) == (k % 2 == 1)
        assert 0.5 < abs(r) < 1.5


def test_gamma_c_reproduces_gamma():
    # Gamma(x) - 1/x = sum c_j x^j / (j+1)!
    x = mpf(1) / 5
    c = C.gamma_c_coeffs(60)
    s = mpmath.fsum(c[j] * x**j / math.factorial(j + 1) for j in range(61))
    assert abs(s - (mpmath.gamma(x) - 1 / x)) < tol(8)


def test_eta_coefficients():
    g = C.euler_gamma()
    eta = C.eta_coeffs(25)
    assert abs(eta[0] + g) < tol()
    assert abs(eta[1] - (g**2 + 2 * C.stieltjes(1))) < tol()
    assert eta[1] > 0
    for j in range(1, 21):
        assert abs(eta[j]) * 3**j < math.factorial(j)


def test_eta_two_by_extrapolation():
    # (zeta'/zeta)(1+h) + 1/h = -sum eta_j h^j
    with mp.workdps(3 * mp.dps):
        hs = [mpf(i) / 96 for i in range(1, 25)]
        c = poly_fit(lambda h: -(zeta_logderiv(0, 1 + h) + 1 / h), hs)
    assert abs(C.eta_coeffs(2)[2] - c[2]) < mpf(10) ** (-(mp.dps // 2))


def test_precision_monotonicity():
    lo = C.eta_coeffs(10, 30) + C.gamma_c_coeffs(10, 30) + C.stieltjes_a_coeffs(10, "1/2", 30)
    hi = C.eta_coeffs(10, 50) + C.gamma_c_coeffs(10, 50) + C.stieltjes_a_coeffs(10, "1/2", 50)
    for x, y in zip(lo, hi):
        assert abs(x - y) < mpf(10) ** -25 * max(1, abs(y))


def test_cache_determinism():
    table = C.ConstantsTable()
    first = C.stieltjes_a_coeffs(8, "2", table=table)
    second = C.stieltjes_a_coeffs(8, "2", table=table)
    assert first == second
    assert len(table.entries) == 9


def test_cache_persistence_roundtrip(tmp_path):
    path = tmp_path / "constants.json"
    table = C.ConstantsTable(path)
    values = C.eta_coeffs(6, table=table)
    table.flush()
    doc = json.loads(path.read_text())
    assert doc["version"] == C.CACHE_VERSION
    assert "eta/3/-/40" in doc["entries"]
    reloaded = C.ConstantsTable(path)
    again = C.eta_coeffs(6, table=reloaded)
    for x, y in zip(values, again):
        assert abs(x - y) < tol(0)


def test_cache_rejects_unknown_version(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"version": 99, "entries": {}}))
    with pytest.raises(ValueError):
        C.ConstantsTable(path)


def test_param_key_is_canonical():
    assert C.param_key("1/2") == C.param_key(mpf(0.5)) == C.param_key("0.5")
    assert C.param_key(None) == "-"


def test_constants_report_values():
    rep = C.constants_report()
    assert abs(rep["gamma_1_ln2"] - mpf("-0.0504720979971")) < 5e-12
    assert abs(rep["c_1_half_ln2"] - mpf("0.685561374577")) < 5e-12
    assert rep["eta_1_ln2"] > 0
