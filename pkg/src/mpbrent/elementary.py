"""The arithmetic-geometric mean and the functions built on it:
complete elliptic integrals, pi (Gauss-Legendre), log and exp.

Costs, with M(n) one precision-n multiplication:

    pi    ~ 15/2 M(n) log2 n    (one sqrt, one mul, one square per step)
    log   ~ 13 M(n) log2 n      (2 log2 n AGM steps at 13/2 M(n) each)
    exp   ~ log                 (Taylor inverse of log, order 5)

The AGM is not self-correcting, so unlike the Newton methods it runs at
full working precision throughout.  Composite functions work at
n + 32 + ceil(log2 n) bits and truncate at the end.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from . import core
from .basic import div, inv_sqrt, newton_schedule, recip, sqrt
from .core import (MPFloat, add, div_int, ldexp, metered, mul, mul_int, one,
                   round_to, sub)
from .errors import DomainError, RangeError


def guard_bits(n: int) -> int:
    return 32 + math.ceil(math.log2(max(n, 2)))


def working_precision(n: int) -> int:
    return n + guard_bits(n)


# -- AGM ------------------------------------------------------------------------

@dataclass
class AGMTrace:
    a_seq: list = field(default_factory=list)
    b_seq: list = field(default_factory=list)
    c_seq: list = field(default_factory=list)
    iterations: int = 0

    @property
    def limit(self) -> MPFloat:
        return self.a_seq[-1]


@metered("agm")
def agm(a0: MPFloat, b0: MPFloat, n: int, c0: MPFloat | None = None) -> AGMTrace:
    """Arithmetic-geometric mean of a0, b0 > 0 with its full trace.

    Runs at n + 8 bits and stops once a - b <= 2^-n a.  ``c0`` seeds the
    c sequence (c_{i+1} = a_i - a_{i+1}) used for E(phi).
    """
    if a0.sign <= 0 or b0.sign <= 0:
        raise DomainError("agm needs positive arguments")
    if a0 < b0:
        a0, b0 = b0, a0
    p = n + 8
    a, b = round_to(a0, p), round_to(b0, p)
    tr = AGMTrace([a], [b], [c0])
    while True:
        d = sub(a, b, p)
        if d.sign <= 0 or d.exp - a.exp <= -n:
            break
        a1 = ldexp(add(a, b, p), -1)
        b1 = sqrt(mul(a, b, p), p)
        if a1 == a and b1 == b:
            break   # stalled at working precision
        tr.c_seq.append(sub(a, a1, p))
        a, b = a1, b1
        tr.a_seq.append(a)
        tr.b_seq.append(b)
        tr.iterations += 1
    return tr


# -- constants ------------------------------------------------------------------

@dataclass
class PiTraceRow:
    iteration: int
    a2_over_t: MPFloat          # A^2/T
    ab2_over_4t: MPFloat        # (A+B)^2/(4T)


@metered("pi")
def compute_pi(n: int, trace: list | None = None) -> MPFloat:
    """pi by the Gauss-Legendre iteration.

        A = 1, B = 2^-1/2, T = 1/4, X = 1
        while A - B > 2^-n:
            Y = A; A = (A+B)/2; B = sqrt(BY); T -= X (A-Y)^2; X *= 2
        return (A+B)^2 / (4T)

    If ``trace`` is a list, a :class:`PiTraceRow` is appended for the
    initial values and after every iteration.
    """
    if n < 8:
        raise ValueError("compute_pi needs n >= 8")
    p = working_precision(n)
    A = one(p)
    B = inv_sqrt(core.from_int(2), p)
    T = ldexp(one(p), -2)
    X = 0       # log2 of the power of two
    i = 0

    def record():
        if trace is not None:
            trace.append(PiTraceRow(i, div(mul(A, A, p), T, p),
                                    div(mul(add(A, B, p), add(A, B, p), p), ldexp(T, 2), p)))

    record()
    while True:
        d = sub(A, B, p)
        if d.sign <= 0 or d.exp <= -n:
            break
        Y = A
        A = ldexp(add(A, B, p), -1)
        B = sqrt(mul(B, Y, p), p)
        D = sub(A, Y, p)
        T = sub(T, ldexp(mul(D, D, p), X), p)
        X += 1
        i += 1
        record()
    S = add(A, B, p)
    return round_to(div(mul(S, S, p), ldexp(T, 2), p), n)


@metered("ln2")
def compute_ln2(n: int) -> MPFloat:
    """log 2 = log(2^K)/K, log(2^K) from the AGM with K >= n_work/2."""
    p = working_precision(n)
    K = p // 2 + 2
    tr = agm(one(p), ldexp(one(p), 2 - K), p)
    L = div(pi(p), ldexp(tr.limit, 1), p)
    return round_to(div_int(L, K, p), n)


class ConstantCache:
    """pi and log 2 at the highest precision computed so far.

    Reads are lock-free (a tuple swap is atomic); raising the precision
    takes the lock so two threads never compute the same constant twice.
    A request for n bits computes ceil(1.25 n) to amortize later growth.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self._values: dict[str, tuple[int, MPFloat]] = {}

    def get(self, name: str, n: int, compute) -> MPFloat:
        hit = self._values.get(name)
        if hit is None or hit[0] < n:
            with self._lock:
                hit = self._values.get(name)
                if hit is None or hit[0] < n:
                    target = max(n, math.ceil(1.25 * n))
                    hit = (target, compute(target))
                    self._values[name] = hit
        return round_to(hit[1], n)

    def precision(self, name: str) -> int:
        hit = self._values.get(name)
        return hit[0] if hit else 0

    def clear(self):
        with self._lock:
            self._values.clear()


CONSTANTS = ConstantCache()


def pi(n: int) -> MPFloat:
    """pi to n bits from the shared cache."""
    return CONSTANTS.get("pi", n, _pi_unmetered)


def ln2(n: int) -> MPFloat:
    """log 2 to n bits from the shared cache."""
    return CONSTANTS.get("ln2", n, _ln2_unmetered)


def _pi_unmetered(n):
    return compute_pi(n)


def _ln2_unmetered(n):
    return compute_ln2(n)


# -- elliptic integrals ---------------------------------------------------------

@metered("elliptic_ke")
def elliptic_ke(phi: MPFloat, n: int) -> tuple[MPFloat, MPFloat]:
    """Complete elliptic integrals K(phi), E(phi) of modular angle phi.

    K = pi / (2 agm(1, cos phi)),  E = K (1 - sum 2^(i-1) c_i^2), c_0 = sin phi.
    """
    from .mpcomplex import trig
    p = working_precision(n)
    half_pi = ldexp(pi(p), -1)
    if phi.sign <= 0 or phi >= half_pi:
        raise DomainError("elliptic_ke needs 0 < phi < pi/2")
    s = trig("sin", phi, p)
    c = trig("cos", phi, p)
    tr = agm(one(p), c, p, c0=s)
    K = div(half_pi, tr.limit, p)
    acc = core.zero(p)
    for i, ci in enumerate(tr.c_seq):
        if ci is None or ci.sign == 0:
            continue
        acc = add(acc, ldexp(mul(ci, ci, p), i - 1), p)
    E = mul(K, sub(one(p), acc, p), p)
    return round_to(K, n), round_to(E, n)


# -- logarithm ------------------------------------------------------------------

def _log_magnitude(x: MPFloat) -> float:
    """log2 |ln x| as a float (-inf for x == 1)."""
    if x.exp > 1000 or x.exp < -1000:
        return math.log2(abs(x.log2_abs()) * math.log(2))
    v = float(x)
    if v == 1.0:
        d = sub(x, one(2), x.prec + 2)
        return -math.inf if d.sign == 0 else d.log2_abs()
    return math.log2(abs(math.log(v)))


def log1p_terms(delta: MPFloat, n: int) -> tuple[MPFloat, int]:
    """log(1 + delta) by its alternating series; returns (value, terms used)."""
    if delta.sign == 0:
        return core.zero(n), 0
    bound = -n / math.log2(max(n, 2))
    if delta.log2_abs() >= bound:
        raise RangeError("log1p_series needs |delta| < 2^(-n/log2 n); use mp_log")
    p = n + 8 + math.ceil(math.log2(max(n, 2)))
    # terms beyond J contribute less than 2^-p relative to delta
    J = max(1, math.ceil(p / -delta.log2_abs()))
    s = div_int(one(p), J, p)
    for j in range(J - 1, 0, -1):
        s = sub(div_int(one(p), j, p), mul(delta, s, p), p)
    return round_to(mul(delta, s, p), n), J


def log1p_series(delta: MPFloat, n: int) -> MPFloat:
    return log1p_terms(delta, n)[0]


def log_working_precision(x: MPFloat, n: int) -> int:
    """n + 32 + ceil(log2 n), plus the bits lost when |log x| is small
    (at most n/log2 n, the near-1 series taking over beyond that)."""
    extra = max(0, math.ceil(-_log_magnitude(x)))
    cap = math.ceil(n / math.log2(max(n, 2)))
    return working_precision(n) + min(extra, cap)


@metered("log")
def mp_log(x: MPFloat, n: int) -> MPFloat:
    """Natural logarithm of x > 0."""
    if x.sign <= 0:
        raise DomainError("log of a non-positive number")
    if x.exp == 1 and x.man == 1 << (x.prec - 1):
        return core.zero(n)
    delta = sub(x, one(2), x.prec + 2)
    if delta.log2_abs() < -n / math.log2(max(n, 2)):
        return log1p_series(delta, n)
    p = log_working_precision(x, n)
    if x.exp <= 0 or x < 1:
        # log x = -log(1/x)
        return -mp_log(recip(x, p + 2), n)
    return round_to(_log_agm(x, p), n)


def _log_agm(x: MPFloat, p: int) -> MPFloat:
    """log x for x >= 1 at working precision p via log y = pi/(2 agm(1, 4/y))."""
    # smallest k with y = 2^k x >= 2^(p/2)
    half = -(-p // 2)
    k = half - x.exp + 1
    if x.man != 1 << (x.prec - 1):
        k -= 1     # x > 2^(exp-1), so one bit less suffices
    b0 = ldexp(recip(x, p), 2 - k)
    tr = agm(one(p), b0, p)
    L = div(pi(p), ldexp(tr.limit, 1), p)
    if k:
        L = sub(L, mul_int(ln2(p + k.bit_length()), k, p + k.bit_length()), p)
    return L


# -- exponential ----------------------------------------------------------------

EXP_ORDER = 5   # Taylor inverse of order k + 1 with k = 4


@metered("exp")
def mp_exp(x: MPFloat, n: int) -> MPFloat:
    """exp(x) by solving log(y) = r, x = r + m log 2.

    Each step y <- y * sum_{j<=4} (r - log y)^j / j! multiplies the number
    of correct bits by five, so the precisions run n, n/5, n/25, ...
    """
    if x.sign == 0:
        return one(n)
    if x.exp > 62:
        raise RangeError("exp overflows the exponent range")
    p = working_precision(n)
    r, m = reduce_ln2(x, p)
    y = _exp_reduced(r, p)
    try:
        return ldexp(round_to(y, n), m)
    except OverflowError as exc:
        raise RangeError("exp overflows the exponent range") from exc


def reduce_ln2(x: MPFloat, p: int) -> tuple[MPFloat, int]:
    """x = r + m log 2 with 0 <= r < log 2; r to p + 8 bits."""
    if x.exp > 62:
        raise RangeError("exp overflows the exponent range")
    m = math.floor(float(x) / math.log(2))
    extra = abs(m).bit_length()
    L2 = ln2(p + extra + 8)
    r = sub(x, mul_int(L2, m, p + extra + 8), p + 8)
    while r.sign < 0:
        m -= 1
        r = add(r, L2, p + 8)
    while r >= L2:
        m += 1
        r = sub(r, L2, p + 8)
    if abs(m) > core.EXP_MAX // 2:
        raise RangeError("exp overflows the exponent range")
    return r, m


def _exp_reduced(r: MPFloat, p: int) -> MPFloat:
    """exp(r) for 0 <= r < log 2 at precision p."""
    if r.sign == 0:
        return one(p)
    y = core.from_float(math.exp(float(r)), 53)
    levels = newton_schedule(max(p, 53), EXP_ORDER).ascending()
    for q in levels[1:]:
        d = sub(r, mp_log(y, q), q)
        s = div_int(d, EXP_ORDER - 1, q)
        for j in range(EXP_ORDER - 2, 0, -1):
            s = mul(d, add(one(q), s, q), q)
            s = div_int(s, j, q)
        y = add(y, mul(y, s, q), q)
    return y
