"""Property-based tests (hypothesis) for the invariants that should hold for
every input, not just the sampled ones in the module tests."""

import math
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from mpbrent import core, series
from mpbrent.basic import div, inv_sqrt, recip, sqrt
from mpbrent.core import add, cmp, from_man_exp, ldexp, mul, parse, round_to, sub, to_hex
from mpbrent.elementary import agm, mp_exp, mp_log
from mpbrent.mpcomplex import MPComplex, cmul, csqrt
from oracles import log2_rel_err, to_fraction

settings.register_profile("mpbrent", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mpbrent")

precs = st.integers(min_value=2, max_value=400)


@st.composite
def mpfloats(draw, n=None, emax=200, nonzero=False):
    n = n or draw(precs)
    sign = draw(st.sampled_from([1, -1]) if nonzero else st.sampled_from([1, -1, 0]))
    man = draw(st.integers(min_value=1, max_value=(1 << n) - 1))
    e = draw(st.integers(min_value=-emax, max_value=emax))
    return from_man_exp(sign, man, e, n)


def positive(n=None, emax=200):
    return mpfloats(n, emax, nonzero=True).map(abs)


# -- core -------------------------------------------------------------------

@given(mpfloats())
def test_normalized(x):
    x.validate()


@given(mpfloats(), mpfloats(), precs)
def test_add_commutes_and_truncates(x, y, n):
    s = add(x, y, n)
    assert s == add(y, x, n)
    exact = to_fraction(x) + to_fraction(y)
    # truncation: |s| <= |exact| and the same sign
    assert abs(to_fraction(s)) <= abs(exact)
    if s.sign:
        assert (to_fraction(s) > 0) == (exact > 0)
        assert abs(exact - to_fraction(s)) < abs(exact) * Fraction(1, 2 ** (n - 2))


@given(mpfloats(), precs)
def test_sub_self_is_zero(x, n):
    assert sub(x, x, n).sign == 0


@given(mpfloats(), mpfloats(), st.integers(min_value=8, max_value=400))
def test_mul_commutes_with_bound(x, y, n):
    p = mul(x, y, n)
    assert p == mul(y, x, n)
    exact = to_fraction(x) * to_fraction(y)
    if exact == 0:
        assert p.sign == 0
    else:
        assert abs(to_fraction(p) - exact) <= abs(exact) * Fraction(1, 2 ** (n - 1))


@given(mpfloats(), mpfloats(), st.integers(min_value=8, max_value=300))
def test_backends_agree(x, y, n):
    ref = mul(x, y, n, backend="schoolbook")
    assert mul(x, y, n, backend="karatsuba") == ref
    assert mul(x, y, n, backend="ntt") == ref


@given(mpfloats(), st.integers(min_value=-1000, max_value=1000))
def test_ldexp_exact(x, k):
    assert to_fraction(ldexp(x, k)) == to_fraction(x) * Fraction(2) ** k


@given(mpfloats(), precs)
def test_round_to_monotone_truncation(x, n):
    r = round_to(x, n)
    assert abs(to_fraction(r)) <= abs(to_fraction(x))
    if n >= x.prec:
        assert r == x


@given(mpfloats(), mpfloats())
def test_cmp_matches_fractions(x, y):
    fx, fy = to_fraction(x), to_fraction(y)
    assert cmp(x, y) == (fx > fy) - (fx < fy)


@given(mpfloats())
def test_hex_round_trip(x):
    assert parse(to_hex(x), x.prec) == x


@given(st.integers(min_value=-10 ** 30, max_value=10 ** 30), st.integers(min_value=-40, max_value=40))
def test_decimal_parse_truncates(m, e):
    n = 80
    x = parse(f"{m}e{e}", n)
    exact = Fraction(m) * Fraction(10) ** e
    assert abs(to_fraction(x)) <= abs(exact)
    if m:
        assert abs(exact - to_fraction(x)) < abs(exact) * Fraction(1, 2 ** (n - 1))


# -- basic ------------------------------------------------------------------

@given(positive(n=128, emax=10 ** 6))
def test_recip_bound(x):
    m, k = x.man, x.exp - x.prec
    # 1/x = 2^-k / m
    num, den = (1, m << k) if k >= 0 else (1 << -k, m)
    assert log2_rel_err(recip(x, 128), num, den) <= -127


@given(mpfloats(n=96, nonzero=True), positive(n=96))
def test_div_times_divisor(a, b):
    q = div(a, b, 96)
    exact = to_fraction(a) / to_fraction(b)
    assert abs(to_fraction(q) - exact) <= abs(exact) * Fraction(1, 2 ** 94)


@given(positive(n=100, emax=1000))
def test_sqrt_squared(x):
    s = to_fraction(sqrt(x, 100))
    t = to_fraction(inv_sqrt(x, 100))
    fx = to_fraction(x)
    assert abs(s * s / fx - 1) < Fraction(1, 2 ** 97)
    assert abs(t * t * fx - 1) < Fraction(1, 2 ** 97)


# -- elementary ---------------------------------------------------------------

@given(positive(n=64, emax=40), positive(n=64, emax=40))
def test_agm_between_means(a, b):
    m = to_fraction(agm(a, b, 64).limit)
    fa, fb = to_fraction(a), to_fraction(b)
    lo, hi = min(fa, fb), max(fa, fb)
    slack = hi * Fraction(1, 2 ** 58)
    assert lo - slack <= m <= hi + slack


@given(positive(n=64, emax=30), positive(n=64, emax=30))
def test_log_of_product(a, b):
    n = 96
    lhs = float(mp_log(mul(a, b, 200), n))
    rhs = float(mp_log(a, n)) + float(mp_log(b, n))
    assert math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-12)


@given(st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_exp_log_round_trip(v):
    n = 128
    x = core.mpf(v, n)
    back = mp_log(mp_exp(x, n + 16), n)
    assert abs(float(back) - v) <= 2.0 ** -100 * max(1.0, abs(v))


# -- complex ----------------------------------------------------------------

def cplx(n=64):
    return st.builds(MPComplex, mpfloats(n, emax=20), mpfloats(n, emax=20))


@given(cplx(), cplx())
def test_cmul_commutes_and_bounded(z, w):
    n = 64
    p = cmul(z, w, n)
    q = cmul(w, z, n)
    zr, zi, wr, wi = map(to_fraction, (z.re, z.im, w.re, w.im))
    er, ei = zr * wr - zi * wi, zr * wi + zi * wr
    scale = (abs(zr) + abs(zi)) * (abs(wr) + abs(wi))
    for r in (p, q):
        assert abs(to_fraction(r.re) - er) <= scale * Fraction(1, 2 ** (n - 4))
        assert abs(to_fraction(r.im) - ei) <= scale * Fraction(1, 2 ** (n - 4))


@given(cplx())
def test_csqrt_principal_branch(z):
    assume(not z.is_zero())
    r = csqrt(z, 64)
    assert r.re.sign >= 0
    if r.re.sign == 0:
        assert r.im.sign >= 0
    w = complex(r) ** 2
    zc = complex(z)
    assert abs(w - zc) <= 1e-15 * abs(zc) + 1e-300


# -- series -----------------------------------------------------------------

coef = st.integers(min_value=-50, max_value=50)


@given(st.lists(coef, min_size=1, max_size=24), st.lists(coef, min_size=1, max_size=24),
       st.integers(min_value=1, max_value=24))
def test_series_mul_causal_and_exact(a, b, n):
    R = series.RATIONAL
    A, B = series.series(a, n, R), series.series(b, n, R)
    P = series.ps_mul(A, B, n)
    ref = [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
           for k in range(n)]
    assert P.to_list() == ref
    assert series.ps_mul(A.truncate(n // 2 + 1), B.truncate(n // 2 + 1), n // 2 + 1).to_list() \
        == ref[: n // 2 + 1]


@given(st.lists(coef, min_size=1, max_size=20))
def test_recip_inverse_rational(tail):
    R = series.RATIONAL
    n = len(tail) + 1
    P = series.series([1] + tail, n, R)
    one = series.ps_mul(P, series.ps_recip(P, n), n)
    assert one.to_list() == [1] + [0] * (n - 1)


@given(st.lists(coef, min_size=1, max_size=16))
def test_diff_integrate_inverse(c):
    R = series.RATIONAL
    P = series.series([0] + c, len(c) + 1, R)
    assert series.ps_integrate(series.ps_diff(P)).to_list() == P.to_list()


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=50), min_size=1, max_size=12))
def test_series_text_round_trip(c):
    R = series.RATIONAL
    P = series.series(c, len(c), R)
    assert series.loads(series.dumps(P)).to_list() == P.to_list()


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=12))
def test_float_series_text_round_trip(c):
    P = series.series(c, len(c))
    assert series.loads(series.dumps(P)).to_list() == P.to_list()
