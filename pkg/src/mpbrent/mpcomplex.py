"""Complex arithmetic on pairs of MPFloats, the complex AGM, and the
complex log and exp that give artan, sin and cos.

Error bounds are on the modulus: the smaller component of a result may
have a large relative error (or even the wrong sign) when it is tiny
compared with the larger one.

Multiplication counts (M = one real precision-n multiplication):

    cmul 3M, csquare 2M, cdiv ~10M, crecip ~7M, csqrt ~14M,
    cagm ~17M per step, clog and cexp ~34 M(n) log2 n.

Every public operation maps conjugate inputs to the conjugate result bit
for bit: inputs in the lower half plane are conjugated, computed in the
upper half plane, and conjugated back.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import core
from .basic import newton_schedule, recip, sqrt
from .core import MPFloat, add, div_int, ldexp, metered, mul, one, round_to, sub
from .elementary import (AGMTrace, agm, ln2, log_working_precision, mp_exp,
                         mp_log, pi, reduce_ln2, working_precision)
from .errors import ConvergenceError, DivisionByZero, DomainError, RangeError


@dataclass(frozen=True)
class MPComplex:
    re: MPFloat
    im: MPFloat

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def is_zero(self) -> bool:
        return self.re.sign == 0 and self.im.sign == 0

    def is_real(self) -> bool:
        return self.im.sign == 0

    def conj(self) -> "MPComplex":
        return MPComplex(self.re, -self.im)

    def __neg__(self) -> "MPComplex":
        return MPComplex(-self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return to_string(self)


def mpc(re, im=0, n: int = 53) -> MPComplex:
    """MPComplex from anything :func:`core.mpf` accepts."""
    return MPComplex(core.mpf(re, n), core.mpf(im, n))


def czero(n: int) -> MPComplex:
    return MPComplex(core.zero(n), core.zero(n))


def cone(n: int) -> MPComplex:
    return MPComplex(one(n), core.zero(n))


def cadd(z: MPComplex, w: MPComplex, n: int) -> MPComplex:
    return MPComplex(add(z.re, w.re, n), add(z.im, w.im, n))


def csub(z: MPComplex, w: MPComplex, n: int) -> MPComplex:
    return MPComplex(sub(z.re, w.re, n), sub(z.im, w.im, n))


def cldexp(z: MPComplex, k: int) -> MPComplex:
    return MPComplex(ldexp(z.re, k), ldexp(z.im, k))


def cround(z: MPComplex, n: int) -> MPComplex:
    return MPComplex(round_to(z.re, n), round_to(z.im, n))


def cscale(z: MPComplex, x: MPFloat, n: int) -> MPComplex:
    """z * x for real x (two real multiplications)."""
    return MPComplex(mul(z.re, x, n), mul(z.im, x, n))


def mag_exp(z: MPComplex) -> int | None:
    """Binary exponent of the larger component; |z| is within a factor
    sqrt(2) of 2^(mag_exp - 1/2).  None for zero."""
    es = [c.exp for c in (z.re, z.im) if c.sign]
    return max(es) if es else None


def _lower(*zs: MPComplex) -> bool:
    """True if the first non-real argument lies in the lower half plane."""
    for z in zs:
        if z.im.sign:
            return z.im.sign < 0
    return False


def to_string(z: MPComplex, digits: int | None = None, mode: str | None = None) -> str:
    """'re+imi' / 're-imi' in decimal."""
    re = core.to_decimal(z.re, digits, mode)
    im = core.to_decimal(abs(z.im), digits, mode)
    return f"{re}{'-' if z.im.sign < 0 else '+'}{im}i"


# -- arithmetic -----------------------------------------------------------------

@metered("cmul")
def cmul(z1: MPComplex, z2: MPComplex, n: int) -> MPComplex:
    """(t+iu)(v+iw) = (tv - uw) + i((t+u)(v+w) - tv - uw), three real products."""
    if _lower(z1, z2):
        return cmul(z1.conj(), z2.conj(), n).conj()
    # a real factor needs only two products (and keeps cmul(1, z) = z exact)
    if z2.im.sign == 0:
        return cscale(z1, z2.re, n)
    if z1.im.sign == 0:
        return cscale(z2, z1.re, n)
    t, u, v, w = z1.re, z1.im, z2.re, z2.im
    tv = mul(t, v, n)
    uw = mul(u, w, n)
    s = mul(add(t, u, n + 1), add(v, w, n + 1), n)
    return MPComplex(sub(tv, uw, n), sub(sub(s, tv, n + 2), uw, n))


@metered("csquare")
def csquare(z: MPComplex, n: int) -> MPComplex:
    """(v+iw)^2 = (v-w)(v+w) + 2ivw, two real products."""
    v, w = z.re, z.im
    return MPComplex(mul(sub(v, w, n + 1), add(v, w, n + 1), n), ldexp(mul(v, w, n), 1))


def _norm(z: MPComplex, n: int) -> MPFloat:
    return add(mul(z.re, z.re, n), mul(z.im, z.im, n), n)


@metered("crecip")
def crecip(z: MPComplex, n: int) -> MPComplex:
    """1/(v+iw) = (v - iw) / (v^2 + w^2)."""
    if z.is_zero():
        raise DivisionByZero("complex reciprocal of zero")
    if _lower(z):
        return crecip(z.conj(), n).conj()
    r = recip(_norm(z, n + 2), n + 2)
    return MPComplex(mul(z.re, r, n), -mul(z.im, r, n))


@metered("cdiv")
def cdiv(z1: MPComplex, z2: MPComplex, n: int) -> MPComplex:
    """(t+iu)/(v+iw) = (v^2+w^2)^-1 [(t+iu)(v-iw)]."""
    if z2.is_zero():
        raise DivisionByZero("complex division by zero")
    if z1.is_zero():
        return czero(n)
    if _lower(z1, z2):
        return cdiv(z1.conj(), z2.conj(), n).conj()
    r = recip(_norm(z2, n + 2), n + 2)
    return cscale(cmul(z1, z2.conj(), n + 2), r, n)


@metered("csqrt")
def csqrt(z: MPComplex, n: int) -> MPComplex:
    """Principal square root: re > 0, or re = 0 and im >= 0.

    Newton's method on x^2 = z in the form x <- x + (z - x^2)/(2x): one
    complex squaring at each level's precision and one complex division
    at the previous (about half) precision.
    """
    if z.is_zero():
        return czero(n)
    if z.is_real():
        if z.re.sign > 0:
            return MPComplex(sqrt(z.re, n), core.zero(n))
        return MPComplex(core.zero(n), sqrt(-z.re, n))
    if _lower(z):
        return csqrt(z.conj(), n).conj()
    e = mag_exp(z)
    k = e if e % 2 == 0 else e - 1
    zs = cldexp(z, -k)
    seed = cmath.sqrt(complex(zs))
    x = MPComplex(core.from_float(seed.real, 53), core.from_float(seed.imag, 53))
    levels = newton_schedule(max(n, 53), 2).ascending()
    prev = levels[0]
    for p in levels[1:]:
        r = csub(zs, csquare(x, p), p)
        x = cadd(x, cdiv(r, cldexp(x, 1), prev), p)
        prev = p
    x = cround(x, n)
    if x.re.sign < 0 or (x.re.sign == 0 and x.im.sign < 0):
        x = -x
    return cldexp(x, k // 2)


# -- complex AGM ----------------------------------------------------------------

def _on_negative_axis(a: MPComplex, b: MPComplex) -> bool:
    """b/a real and negative, i.e. b * conj(a) on the negative real axis (exact)."""
    ar, ai, br, bi = (c.to_fraction() for c in (a.re, a.im, b.re, b.im))
    return bi * ar - br * ai == 0 and br * ar + bi * ai < 0


def _close(a: MPComplex, b: MPComplex, n: int, p: int) -> bool:
    d = csub(a, b, p)
    ed, ea = mag_exp(d), mag_exp(a)
    return ed is None or (ea is not None and ed <= ea - n - 1)


@metered("cagm")
def cagm(a0: MPComplex, b0: MPComplex, n: int) -> AGMTrace:
    """Complex AGM.  The square root is taken with the sign that makes
    |a_{i+1} - b_{i+1}| <= |a_{i+1} + b_{i+1}|; on a tie, the one with
    im(b_{i+1}/a_{i+1}) >= 0."""
    if a0.is_zero() or b0.is_zero():
        raise DomainError("cagm needs nonzero arguments")
    if a0.is_real() and b0.is_real() and a0.re.sign > 0 and b0.re.sign > 0:
        tr = agm(a0.re, b0.re, n)
        wrap = lambda s: [MPComplex(x, core.zero(x.prec)) for x in s]
        c_seq = [None] + [MPComplex(x, core.zero(x.prec)) for x in tr.c_seq[1:]]
        return AGMTrace(wrap(tr.a_seq), wrap(tr.b_seq), c_seq, tr.iterations)
    if _lower(a0, b0):
        tr = cagm(a0.conj(), b0.conj(), n)
        cj = lambda s: [z.conj() if z is not None else None for z in s]
        return AGMTrace(cj(tr.a_seq), cj(tr.b_seq), cj(tr.c_seq), tr.iterations)
    if _on_negative_axis(a0, b0):
        raise DomainError("cagm undefined for b0/a0 on the negative real axis")
    p = n + 8
    a, b = cround(a0, p), cround(b0, p)
    tr = AGMTrace([a], [b], [None])
    spread = abs(mag_exp(a) - mag_exp(b))
    limit = spread + math.ceil(math.log2(max(n, 2))) + 24
    while not _close(a, b, n, p):
        if tr.iterations >= limit:
            raise ConvergenceError(f"complex AGM did not converge in {limit} steps")
        a1 = cldexp(cadd(a, b, p), -1)
        s = csqrt(cmul(a, b, p), p)
        # re(a1 conj s) decides |a1 - s| <= |a1 + s|; exactness is not needed
        dot = add(mul(a1.re, s.re, 64), mul(a1.im, s.im, 64), 64)
        if dot.sign < 0:
            s = -s
        elif dot.sign == 0:
            cross = sub(mul(s.im, a1.re, 64), mul(s.re, a1.im, 64), 64)
            if cross.sign < 0:
                s = -s
        if a1 == a and s == b:
            break
        tr.c_seq.append(csub(a, a1, p))
        a, b = a1, s
        tr.a_seq.append(a)
        tr.b_seq.append(b)
        tr.iterations += 1
    return tr


# -- log and exp ----------------------------------------------------------------

def _small_threshold(n: int) -> float:
    return -n / math.log2(max(n, 2))


def _clog1p_series(d: MPComplex, n: int) -> MPComplex:
    p = n + 8 + math.ceil(math.log2(max(n, 2)))
    J = max(1, math.ceil(p / -(mag_exp(d) - 0.5)))
    s = MPComplex(div_int(one(p), J, p), core.zero(p))
    for j in range(J - 1, 0, -1):
        s = csub(MPComplex(div_int(one(p), j, p), core.zero(p)), cmul(d, s, p), p)
    return cround(cmul(d, s, p), n)


def _cmag_log2(z: MPComplex) -> float:
    """log2 |log z| estimated in double precision."""
    e = mag_exp(z)
    if abs(e) > 1000:
        return math.log2(abs(e) * math.log(2))
    w = complex(z)
    if w == 1:
        return _small_threshold(z.prec)
    return math.log2(abs(cmath.log(w)))


@metered("clog")
def clog(z: MPComplex, n: int) -> MPComplex:
    """Principal complex logarithm, imaginary part in (-pi, pi].

    log y = pi / (2 agm(1, 4/y)) for |y| >= 2^(n/2); y = 2^k z.  The left
    half plane is mapped across by log z = log(-z) + i pi.
    """
    if z.is_zero():
        raise DomainError("log of zero")
    if z.is_real():
        if z.re.sign > 0:
            return MPComplex(mp_log(z.re, n), core.zero(n))
        return MPComplex(mp_log(-z.re, n), pi(n))
    if _lower(z):
        return clog(z.conj(), n).conj()
    d = MPComplex(sub(z.re, one(2), z.re.prec + 2), z.im)
    ed = mag_exp(d)
    if ed is not None and ed - 0.5 < _small_threshold(n):
        return _clog1p_series(d, n)
    extra = max(0, math.ceil(-_cmag_log2(z)))
    p = working_precision(n) + min(extra, math.ceil(n / math.log2(max(n, 2))))
    if z.re.sign < 0:
        L = clog(-z, p)      # -z is in the lower half plane: arg in (-pi/2, 0)
        return cround(MPComplex(L.re, add(L.im, pi(p), p)), n)
    return cround(_clog_agm(z, p), n)


def _clog_agm(z: MPComplex, p: int) -> MPComplex:
    e = mag_exp(z)
    k = -(-p // 2) - e + 2
    b0 = cldexp(crecip(z, p), 2 - k)
    tr = cagm(cone(p), b0, p)
    L = cscale(crecip(tr.limit, p), ldexp(pi(p), -1), p)
    if k:
        kb = k.bit_length()
        L = MPComplex(sub(L.re, core.mul_int(ln2(p + kb), k, p + kb), p), L.im)
    return L


EXP_ORDER = 5


def _reduce_2pi(theta: MPFloat, p: int) -> MPFloat:
    """theta - 2 pi q in (-pi, pi], with pi carried to p + exponent bits."""
    if theta.sign == 0 or theta.exp <= 1:
        return round_to(theta, p)
    q_bits = max(0, theta.exp) + 8
    tp = ldexp(pi(p + q_bits), 1)
    q = core.floor_int(add(mul(theta, recip(tp, 2 * q_bits + 8), 2 * q_bits + 8),
                           ldexp(one(2), -1), 2 * q_bits + 8))
    r = sub(theta, core.mul_int(tp, q, p + q_bits), p)
    half = pi(p)
    while r > half:
        r = sub(r, tp, p)
    while r <= -half:
        r = add(r, tp, p)
    return r


@metered("cexp")
def cexp(z: MPComplex, n: int) -> MPComplex:
    """exp(z) by solving clog(w) = z with the fifth-order Taylor step
    w <- w * sum_{j<=4} (z - log w)^j / j!."""
    if z.is_zero():
        return cone(n)
    if z.is_real():
        return MPComplex(mp_exp(z.re, n), core.zero(n))
    if _lower(z):
        return cexp(z.conj(), n).conj()
    p = working_precision(n)
    if z.re.sign:
        r, m = reduce_ln2(z.re, p)
    else:
        r, m = core.zero(p), 0
    theta = _reduce_2pi(z.im, p + 8)
    w = _cexp_reduced(MPComplex(r, theta), p)
    try:
        return cldexp(cround(w, n), m)
    except OverflowError as exc:
        raise RangeError("cexp overflows the exponent range") from exc


def _cexp_reduced(z: MPComplex, p: int) -> MPComplex:
    seed = cmath.exp(complex(z))
    w = MPComplex(core.from_float(seed.real, 53), core.from_float(seed.imag, 53))
    levels = newton_schedule(max(p, 53), EXP_ORDER).ascending()
    two_pi = None
    for q in levels[1:]:
        if w.is_zero():
            break
        d = csub(z, clog(w, q), q)
        if abs(float(d.im)) > 3:
            # the seed landed across the branch cut
            two_pi = ldexp(pi(q), 1)
            d = MPComplex(d.re, (sub if d.im.sign > 0 else add)(d.im, two_pi, q))
        s = MPComplex(div_int(d.re, EXP_ORDER - 1, q), div_int(d.im, EXP_ORDER - 1, q))
        for j in range(EXP_ORDER - 2, 0, -1):
            s = cmul(d, cadd(cone(q), s, q), q)
            s = MPComplex(div_int(s.re, j, q), div_int(s.im, j, q))
        w = cadd(w, cmul(w, s, q), q)
    return w


# -- artan, sin, cos ------------------------------------------------------------

TRIG_KINDS = ("artan", "sin", "cos")


def _trig_series(kind: str, x: MPFloat, p: int) -> MPFloat:
    """Taylor series for |x| < 2^(-n/log2 n): about log2 n terms."""
    x2 = mul(x, x, p)
    J = max(1, math.ceil(p / (-2 * x.log2_abs())) + 1)
    if kind == "artan":
        s = div_int(one(p), 2 * J + 1, p)
        for j in range(J - 1, -1, -1):
            s = sub(div_int(one(p), 2 * j + 1, p), mul(x2, s, p), p)
        return mul(x, s, p)
    # sin: sum (-1)^j x^(2j+1)/(2j+1)!,  cos: sum (-1)^j x^(2j)/(2j)!
    off = 1 if kind == "sin" else 0
    s = one(p)
    for j in range(J, 0, -1):
        s = sub(one(p), div_int(mul(x2, s, p), (2 * j + off) * (2 * j - 1 + off), p), p)
    return mul(x, s, p) if kind == "sin" else s


@metered("trig")
def trig(kind: str, x: MPFloat, n: int) -> MPFloat:
    """artan(x) = im log(1 + ix);  cos x + i sin x = exp(ix)."""
    if kind not in TRIG_KINDS:
        raise ValueError(f"trig kind must be one of {TRIG_KINDS}")
    if x.sign == 0:
        return one(n) if kind == "cos" else core.zero(n)
    if x.sign < 0:
        y = trig(kind, -x, n)
        return y if kind == "cos" else -y
    p = working_precision(n)
    small = _small_threshold(n)
    if x.log2_abs() < small:
        return round_to(_trig_series(kind, x, p), n)
    if kind == "artan":
        extra = max(0, math.ceil(-x.log2_abs()))
        q = p + min(extra, math.ceil(n / math.log2(max(n, 2))))
        return round_to(clog(MPComplex(one(q), round_to(x, q)), q).im, n)
    theta = _reduce_2pi(x, p + 8)
    if theta.sign == 0:
        return one(n) if kind == "cos" else core.zero(n)
    if theta.log2_abs() < small:
        return round_to(_trig_series(kind, theta, p), n)
    th = float(theta)
    est = abs(math.sin(th) if kind == "sin" else math.cos(th))
    extra = max(0, math.ceil(-math.log2(est))) if est > 0 else n
    q = p + min(extra, math.ceil(n / math.log2(max(n, 2))))
    if q > p:
        theta = _reduce_2pi(x, q + 8)
    w = cexp(MPComplex(core.zero(q), theta), q)
    return round_to(w.im if kind == "sin" else w.re, n)
