import math
import random

import mpmath
import pytest

from mpbrent import core
from mpbrent.basic import inv_sqrt
from mpbrent.core import CostMeter, mpf
from mpbrent.elementary import agm, pi, working_precision
from mpbrent.errors import DivisionByZero, DomainError
from mpbrent.mpcomplex import (MPComplex, cadd, cagm, cdiv, cexp, cldexp, clog, cmul, cone,
                               crecip, csqrt, csquare, csub, mpc, to_string, trig)
from oracles import to_fraction


def to_mpc(z):
    f, g = to_fraction(z.re), to_fraction(z.im)
    return mpmath.mpc(mpmath.mpf(f.numerator) / f.denominator,
                      mpmath.mpf(g.numerator) / g.denominator)


def cerr(z, ref):
    """log2 of the modulus-relative error."""
    d = abs(to_mpc(z) - ref)
    return -math.inf if d == 0 else float(mpmath.log(d / abs(ref), 2))


def rand_c(rng, n, spread=20):
    parts = []
    for _ in range(2):
        parts.append(core.from_man_exp(rng.choice((-1, 1)), rng.getrandbits(n) | 1 << (n - 1),
                                       rng.randint(-spread, spread), n))
    return MPComplex(*parts)


def textbook_mul(z, w, p):
    t, u, v, x = z.re, z.im, w.re, w.im
    return MPComplex(core.sub(core.mul(t, v, p), core.mul(u, x, p), p),
                     core.add(core.mul(t, x, p), core.mul(u, v, p), p))


# -- arithmetic ----------------------------------------------------------------------

def test_cmul_examples():
    rng = random.Random(1)
    z = rand_c(rng, 100)
    assert cmul(cone(100), z, 100) == z
    assert cmul(mpc(1, 1), mpc(1, 1), 64) == mpc(0, 2)


def test_cmul_against_textbook():
    rng = random.Random(2)
    mpmath.mp.prec = 400
    for _ in range(1000):
        z, w = rand_c(rng, 256), rand_c(rng, 256)
        ref = to_mpc(textbook_mul(z, w, 300))
        assert cerr(cmul(z, w, 256), ref) <= -252


def test_cmul_intermediate_bound():
    rng = random.Random(3)
    for _ in range(200):
        z, w = rand_c(rng, 64), rand_c(rng, 64)
        s = abs((float(z.re) + float(z.im)) * (float(w.re) + float(w.im)))
        assert s <= 2 * abs(complex(z)) * abs(complex(w)) * (1 + 1e-12)


def test_csquare():
    rng = random.Random(4)
    assert csquare(cone(64), 64) == cone(64)
    assert csquare(mpc(1, 1), 64) == mpc(0, 2)
    mpmath.mp.prec = 400
    for _ in range(200):
        z = rand_c(rng, 256)
        assert cerr(csquare(z, 256), to_mpc(cmul(z, z, 300))) <= -252


@pytest.mark.parametrize("fn,args,count", [
    (cmul, 2, 3), (csquare, 1, 2)])
def test_multiplication_counts(fn, args, count):
    rng = random.Random(5)
    for n in (64, 1000, 10000):
        zs = [rand_c(rng, n) for _ in range(args)]
        with CostMeter() as m:
            fn(*zs, n)
        assert sum(m.mults_by_precision.values()) == count


def test_cdiv_examples():
    rng = random.Random(6)
    z = rand_c(rng, 128)
    assert cdiv(z, cone(128), 128) == z
    q = cdiv(cone(64), mpc(0, 1), 64)
    assert abs(float(q.re)) <= 2 ** -60 and abs(float(q.im) + 1) <= 2 ** -60
    with pytest.raises(DivisionByZero):
        cdiv(z, mpc(0, 0), 64)
    with pytest.raises(ZeroDivisionError):
        crecip(mpc(0, 0), 64)


def test_cdiv_against_direct_formula():
    rng = random.Random(7)
    mpmath.mp.prec = 320
    for _ in range(300):
        z, w = rand_c(rng, 256), rand_c(rng, 256)
        ref = to_mpc(z) / to_mpc(w)
        assert cerr(cdiv(z, w, 256), ref) <= -256 + 6
        assert cerr(crecip(w, 256), 1 / to_mpc(w)) <= -256 + 6


def test_csqrt_examples():
    assert csqrt(cone(100), 100) == cone(100)
    r = csqrt(mpc(0, 1), 256)
    h = inv_sqrt(mpf(2, 8), 256)
    for part in (r.re, r.im):
        assert abs(float(core.sub(part, h, 256))) <= 2 ** -250
    assert csqrt(mpc(-1, 0), 64) == mpc(0, 1)
    assert csqrt(mpc(0, 0), 64).is_zero()


def test_csqrt_branch_and_square():
    rng = random.Random(8)
    n = 64
    mpmath.mp.prec = 200
    for _ in range(10000):
        z = rand_c(rng, n, spread=40)
        r = csqrt(z, n)
        assert r.re.sign > 0 or (r.re.sign == 0 and r.im.sign >= 0)
        assert cerr(csquare(r, n + 16), to_mpc(z)) <= -n + 8


# -- complex AGM ----------------------------------------------------------------------

def test_cagm_fixed_point():
    z = mpc(1.5, -0.25, 100)
    tr = cagm(z, z, 100)
    assert tr.iterations == 0 and tr.a_seq[-1] == z


def test_cagm_table_12_1():
    n = 64
    z = mpc(2_000_000, 1_000_000, n)
    tr = cagm(cone(n), cldexp(crecip(z, n + 16), 2), n)

    def sig(x):
        return core.to_decimal(x, 8, "nearest")

    assert (sig(tr.a_seq[1].re), sig(tr.a_seq[1].im)) == ("5.0000080e-1", "-4.0000000e-7")
    assert (sig(tr.b_seq[1].re), sig(tr.b_seq[1].im)) == ("1.3017017e-3", "-3.0729008e-4")
    assert (sig(tr.a_seq[6].re), sig(tr.a_seq[6].im)) == ("1.0733198e-1", "-3.4037916e-3")


def test_cagm_branch_rule_and_convergence():
    rng = random.Random(9)
    n = 200
    for _ in range(50):
        a, b = rand_c(rng, n, spread=3), rand_c(rng, n, spread=3)
        try:
            tr = cagm(a, b, n)
        except DomainError:
            continue
        for x, y in zip(tr.a_seq[1:], tr.b_seq[1:]):
            assert abs(complex(x) - complex(y)) <= abs(complex(x) + complex(y)) * (1 + 1e-12)
        d = csub(tr.a_seq[-1], tr.b_seq[-1], n)
        assert d.is_zero() or abs(complex(d)) <= 2.0 ** (-n + 2) * abs(complex(tr.a_seq[-1]))


def test_cagm_real_inputs_match_real_agm():
    a, b = mpf(1, 300), core.parse("0.0001", 300)
    tc = cagm(MPComplex(a, core.zero(300)), MPComplex(b, core.zero(300)), 300)
    tr = agm(a, b, 300)
    assert [core.to_hex(z.re) for z in tc.a_seq] == [core.to_hex(x) for x in tr.a_seq]
    assert [core.to_hex(z.re) for z in tc.b_seq] == [core.to_hex(x) for x in tr.b_seq]
    assert all(z.im.sign == 0 for z in tc.a_seq + tc.b_seq)


def test_cagm_conjugate_symmetry():
    rng = random.Random(10)
    for _ in range(20):
        a, b = rand_c(rng, 150, spread=4), rand_c(rng, 150, spread=4)
        try:
            t1 = cagm(a, b, 150)
        except DomainError:
            continue
        t2 = cagm(a.conj(), b.conj(), 150)
        assert t2.a_seq == [z.conj() for z in t1.a_seq]
        assert t2.b_seq == [z.conj() for z in t1.b_seq]


def test_cagm_negative_axis():
    with pytest.raises(DomainError):
        cagm(cone(64), mpc(-2, 0), 64)
    with pytest.raises(DomainError):
        cagm(mpc(1, 1), mpc(-3, -3), 64)


# -- log / exp -------------------------------------------------------------------------

def test_clog_examples():
    assert clog(cone(100), 100).is_zero()
    L = clog(mpc(2_000_000, 1_000_000, 64), 64)
    assert core.to_fixed(L.re, 8, "nearest") == "14.620230"
    assert core.to_fixed(L.im, 8, "nearest") == "0.46364761"
    with pytest.raises(DomainError):
        clog(mpc(0, 0), 64)


def test_clog_accuracy_and_branch():
    rng = random.Random(11)
    n = 256
    mpmath.mp.prec = n + 80
    for _ in range(100):
        z = rand_c(rng, n, spread=30)
        L = clog(z, n)
        assert cerr(L, mpmath.log(to_mpc(z))) <= -n + 10
        assert -mpmath.pi < to_mpc(L).imag <= mpmath.pi
    L = clog(mpc(-1, 0), n)
    assert L.re.sign == 0 and cerr(L, mpmath.mpc(0, mpmath.pi)) <= -n + 10


def test_cexp_examples():
    assert cexp(mpc(0, 0), 100) == cone(100)
    w = cexp(MPComplex(core.zero(256), core.ldexp(pi(300), -1)), 256)
    assert abs(float(w.re)) <= 2 ** -246
    assert abs(float(w.im) - 1) <= 2 ** -246


def test_cexp_unit_modulus():
    rng = random.Random(12)
    n = 256
    mpmath.mp.prec = n + 80
    for _ in range(50):
        th = core.from_float(rng.uniform(-100, 100), 53)
        w = cexp(MPComplex(core.zero(n), th), n)
        assert abs(abs(to_mpc(w)) - 1) <= mpmath.mpf(2) ** (-n + 10)


def test_round_trips():
    rng = random.Random(13)
    n = 256
    p = working_precision(n)
    mpmath.mp.prec = n + 80
    for _ in range(50):
        w = MPComplex(core.from_float(rng.uniform(-30, 30), 53), core.from_float(rng.uniform(-3, 3), 53))
        assert cerr(clog(cexp(w, p), n), to_mpc(w)) <= -n + 10
        z = rand_c(rng, n, spread=30)
        assert cerr(cexp(clog(z, p), n), to_mpc(z)) <= -n + 10


# -- trig ---------------------------------------------------------------------------------

def test_trig_identities():
    for n in (64, 256):
        assert trig("artan", core.zero(n), n).sign == 0
        assert trig("sin", core.zero(n), n).sign == 0
        assert trig("cos", core.zero(n), n) == 1
    assert core.to_fixed(trig("artan", mpf(0.5), 64), 8, "nearest") == "0.46364761"


def test_pythagoras():
    rng = random.Random(14)
    n = 256
    for _ in range(200):
        x = core.from_float(rng.uniform(-1000, 1000), 53)
        s, c = trig("sin", x, n), trig("cos", x, n)
        r = core.sub(core.add(core.mul(s, s, n), core.mul(c, c, n), n), core.one(n), n)
        assert r.sign == 0 or r.log2_abs() <= -246


@pytest.mark.parametrize("kind,fn", [("artan", mpmath.atan), ("sin", mpmath.sin),
                                     ("cos", mpmath.cos)])
def test_trig_accuracy(kind, fn):
    rng = random.Random(15)
    n = 300
    mpmath.mp.prec = n + 100
    for e in list(range(-400, 12, 7)) + [0, 1, 2]:
        x = core.from_man_exp(1, rng.getrandbits(n) | 1 << (n - 1), e, n)
        y = trig(kind, x, n)
        ref = fn(to_mpc(MPComplex(x, core.zero(n))).real)
        err = abs(to_mpc(MPComplex(y, core.zero(n))).real - ref)
        if err == 0:
            continue
        assert err <= mpmath.mpf(2) ** (-n + 10)
        if abs(ref) >= mpmath.mpf(2) ** (-n / math.log2(n)):
            assert err / abs(ref) <= mpmath.mpf(2) ** (-n + 10)


def test_trig_parity_bit_exact():
    rng = random.Random(16)
    n = 128
    for _ in range(50):
        x = core.from_float(rng.uniform(-50, 50), 53)
        assert trig("artan", -x, n) == -trig("artan", x, n)
        assert trig("sin", -x, n) == -trig("sin", x, n)
        assert trig("cos", -x, n) == trig("cos", x, n)


def test_trig_bad_kind():
    with pytest.raises(ValueError):
        trig("tan", mpf(1), 64)


def test_to_string():
    assert to_string(mpc(1.5, -2), 3) == "1.50e+0-2.00e+0i"


# -- cost ratios -----------------------------------------------------------------------------

def test_cdiv_crecip_ratio_bands():
    n = 1 << 18
    rng = random.Random(18)
    z = rand_c(rng, n, spread=0)
    w = rand_c(rng, n, spread=0)
    with CostMeter(backend="ntt") as m:
        cdiv(z, w, n)
        crecip(w, n)
    assert 8 < m.ratio("cdiv", n) < 12
    assert 5.5 < m.ratio("crecip", n) < 8.5
