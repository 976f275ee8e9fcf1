"""Truncated formal power series.

A :class:`Series` holds a_0 .. a_{n-1} over a coefficient field and stands
for sum a_i x^i mod x^n.  Reciprocal, log, exp and powers are computed by
Newton doubling, so each costs a small multiple of one multiplication:

    recip ~ 3 M(n),  log ~ 4 M(n),  exp ~ 9 M(n)  (22/3 M(n) at order 4),
    P^m = exp(m log P) ~ 34/3 M(n), independent of m.

Multiplication is classical below ``FFT_THRESHOLD`` coefficients and goes
through the integer NTT above it: coefficients are scaled to integers,
packed into one big integer (Kronecker substitution), multiplied, and
unpacked.  Scalar operations are tallied on an optional :class:`OpCounter`;
the FFT path charges the NTT's own count of modular multiplications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import core, ntt
from .core import MPFloat
from .errors import CapabilityError, NormalizationError

FFT_THRESHOLD = 64


class OpCounter:
    """Running count of scalar operations."""

    def __init__(self):
        self.count = 0

    def add(self, k: int) -> None:
        self.count += k

    def __repr__(self):
        return f"OpCounter({self.count})"


def _tally(counter, k):
    if counter is not None:
        counter.add(k)


def _pair_count(la: int, lb: int, n: int) -> int:
    """Number of products a_i b_j with i + j < n."""
    total = 0
    for j in range(min(n, la + lb - 1)):
        total += min(j, la - 1) - max(0, j - lb + 1) + 1
    return total


def _ldexp(c: int, e: int) -> float:
    try:
        return math.ldexp(float(c), e)
    except OverflowError:
        return math.copysign(math.inf, c)


# -- coefficient fields ---------------------------------------------------------

class Float64Field:
    """IEEE doubles held in numpy arrays."""

    name = "float64"
    precision = 53
    exact = False
    fft = True

    def vec(self, values):
        return np.array([float(v) for v in values], dtype=float)

    def zeros(self, n):
        return np.zeros(n)

    def concat(self, a, b):
        return np.concatenate([a, b])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def scale(self, a, c, counter=None):
        _tally(counter, len(a))
        return a * c

    def mul_ints(self, a, ks, counter=None):
        _tally(counter, len(a))
        return a * np.array(ks, dtype=float)

    def div_ints(self, a, ks, counter=None):
        _tally(counter, len(a))
        return a / np.array(ks, dtype=float)

    def conv(self, a, b, n, counter=None):
        if len(a) == 0 or len(b) == 0:
            return self.zeros(n)
        _tally(counter, _pair_count(len(a), len(b), n))
        out = np.convolve(a, b)[:n]
        return np.concatenate([out, np.zeros(n - len(out))]) if len(out) < n else out

    def fixed(self, a):
        """Integer images round(a_i 2^s) with s set by max |a_i|."""
        m = float(np.max(np.abs(a))) if len(a) else 0.0
        if m == 0.0:
            return [0] * len(a), 0
        s = self.precision + 8 - math.frexp(m)[1]
        return [int(round(math.ldexp(float(v), s))) for v in a], s

    def unfixed(self, ints, s):
        return np.array([_ldexp(c, -s) for c in ints], dtype=float)

    def one(self):
        return 1.0

    def zero(self):
        return 0.0

    def const(self, v):
        return float(v)

    def inv(self, x):
        return 1.0 / x

    def mul(self, x, y):
        return x * y

    def is_zero(self, x):
        return x == 0

    def is_one(self, x):
        return x == 1

    def fmt(self, x):
        return repr(float(x))

    def parse(self, s):
        return float(s)

    def to_float(self, x):
        return float(x)

    def __eq__(self, other):
        return isinstance(other, Float64Field)

    def __hash__(self):
        return hash(self.name)


class MPField:
    """MPFloat coefficients at a fixed precision (truncating arithmetic)."""

    exact = False
    fft = True

    def __init__(self, precision: int = 53):
        self.precision = precision
        self.name = f"mp{precision}"

    def vec(self, values):
        return [self.const(v) for v in values]

    def zeros(self, n):
        return [core.zero(self.precision)] * n

    def concat(self, a, b):
        return list(a) + list(b)

    def add(self, a, b):
        return [core.add(x, y, self.precision) for x, y in zip(a, b)]

    def sub(self, a, b):
        return [core.sub(x, y, self.precision) for x, y in zip(a, b)]

    def neg(self, a):
        return [-x for x in a]

    def scale(self, a, c, counter=None):
        _tally(counter, len(a))
        c = self.const(c)
        return [core.mul(x, c, self.precision) for x in a]

    def mul_ints(self, a, ks, counter=None):
        _tally(counter, len(a))
        return [core.mul_int(x, k, self.precision) for x, k in zip(a, ks)]

    def div_ints(self, a, ks, counter=None):
        _tally(counter, len(a))
        return [core.div_int(x, k, self.precision) for x, k in zip(a, ks)]

    def conv(self, a, b, n, counter=None):
        p = self.precision
        out = []
        for j in range(n):
            acc = core.zero(p)
            for i in range(max(0, j - len(b) + 1), min(j, len(a) - 1) + 1):
                acc = core.add(acc, core.mul(a[i], b[j - i], p), p)
            out.append(acc)
        _tally(counter, _pair_count(len(a), len(b), n))
        return out

    def fixed(self, a):
        nz = [x for x in a if x.sign]
        if not nz:
            return [0] * len(a), 0
        s = self.precision + 8 - max(x.exp for x in nz)
        out = []
        for x in a:
            if x.sign == 0:
                out.append(0)
                continue
            sh = x.exp - x.prec + s
            m = x.man << sh if sh >= 0 else x.man >> -sh
            out.append(x.sign * m)
        return out, s

    def unfixed(self, ints, s):
        p = self.precision
        return [core.from_man_exp(1 if c > 0 else -1, abs(c), -s, p) if c else core.zero(p)
                for c in ints]

    def one(self):
        return core.one(self.precision)

    def zero(self):
        return core.zero(self.precision)

    def const(self, v):
        if isinstance(v, MPFloat):
            return core.round_to(v, self.precision)
        if isinstance(v, Fraction):
            return core.from_rational(v.numerator, v.denominator, self.precision)
        return core.mpf(v, self.precision)

    def inv(self, x):
        from .basic import recip
        return recip(x, self.precision)

    def mul(self, x, y):
        return core.mul(x, y, self.precision)

    def is_zero(self, x):
        return x.sign == 0

    def is_one(self, x):
        return x == 1

    def fmt(self, x):
        return core.to_hex(x)

    def parse(self, s):
        return core.parse(s, self.precision)

    def to_float(self, x):
        return float(x)

    def __eq__(self, other):
        return isinstance(other, MPField) and other.precision == self.precision

    def __hash__(self):
        return hash(self.name)


class RationalField:
    """Exact rational coefficients; classical multiplication only."""

    name = "rational"
    precision = None
    exact = True
    fft = False

    def vec(self, values):
        return [Fraction(v) for v in values]

    def zeros(self, n):
        return [Fraction(0)] * n

    def concat(self, a, b):
        return list(a) + list(b)

    def add(self, a, b):
        return [x + y for x, y in zip(a, b)]

    def sub(self, a, b):
        return [x - y for x, y in zip(a, b)]

    def neg(self, a):
        return [-x for x in a]

    def scale(self, a, c, counter=None):
        _tally(counter, len(a))
        c = Fraction(c)
        return [x * c for x in a]

    def mul_ints(self, a, ks, counter=None):
        _tally(counter, len(a))
        return [x * k for x, k in zip(a, ks)]

    def div_ints(self, a, ks, counter=None):
        _tally(counter, len(a))
        return [x / k for x, k in zip(a, ks)]

    def conv(self, a, b, n, counter=None):
        out = []
        for j in range(n):
            out.append(sum((a[i] * b[j - i]
                            for i in range(max(0, j - len(b) + 1), min(j, len(a) - 1) + 1)),
                           Fraction(0)))
        _tally(counter, _pair_count(len(a), len(b), n))
        return out

    def fixed(self, a):
        raise CapabilityError("rational series have no fixed-point image")

    def one(self):
        return Fraction(1)

    def zero(self):
        return Fraction(0)

    def const(self, v):
        return Fraction(v)

    def inv(self, x):
        return 1 / Fraction(x)

    def mul(self, x, y):
        return x * y

    def is_zero(self, x):
        return x == 0

    def is_one(self, x):
        return x == 1

    def fmt(self, x):
        return str(x)

    def parse(self, s):
        return Fraction(s)

    def to_float(self, x):
        return float(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(self.name)


FLOAT64 = Float64Field()
RATIONAL = RationalField()


def field_by_name(name: str):
    if name == "float64":
        return FLOAT64
    if name == "rational":
        return RATIONAL
    if name.startswith("mp"):
        return MPField(int(name[2:]))
    raise ValueError(f"unknown coefficient field {name!r}")


# -- series ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Series:
    coeffs: object
    field: object = FLOAT64

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def field_precision(self):
        return self.field.precision

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def to_list(self) -> list:
        return list(self.coeffs)

    def truncate(self, n: int) -> "Series":
        """First n coefficients, zero padded if the series is shorter."""
        c = self.coeffs[:n]
        if len(c) < n:
            c = self.field.concat(c, self.field.zeros(n - len(c)))
        return Series(c, self.field)

    def __add__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series(self.field.add(self.coeffs[:n], other.coeffs[:n]), self.field)

    def __sub__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series(self.field.sub(self.coeffs[:n], other.coeffs[:n]), self.field)

    def __neg__(self) -> "Series":
        return Series(self.field.neg(self.coeffs), self.field)

    def __eq__(self, other):
        if not isinstance(other, Series) or other.field != self.field or other.order != self.order:
            return NotImplemented
        return all(x == y for x, y in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        head = ", ".join(self.field.fmt(c) for c in list(self.coeffs)[:6])
        more = ", ..." if self.order > 6 else ""
        return f"Series([{head}{more}], order={self.order}, field={self.field.name})"


def series(values, order: int | None = None, field=FLOAT64) -> Series:
    """Series from coefficient values, zero padded (or cut) to ``order``."""
    values = list(values)
    if order is not None:
        values = values[:order] + [0] * (order - len(values))
    return Series(field.vec(values), field)


def constant(c, n: int, field=FLOAT64) -> Series:
    return series([c], n, field)


def variable(n: int, field=FLOAT64) -> Series:
    """The series x."""
    return series([0, 1], n, field)


# -- multiplication -------------------------------------------------------------

def _pack(ints, w: int) -> int:
    """sum ints[i] 2^(w i) for signed ints, |ints[i]| < 2^(w-1); w a multiple of 8."""
    wb = w // 8
    pos = b"".join((v if v > 0 else 0).to_bytes(wb, "little") for v in ints)
    neg = b"".join((-v if v < 0 else 0).to_bytes(wb, "little") for v in ints)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(c: int, w: int, count: int) -> list[int]:
    """Balanced base-2^w digits of c, lowest ``count`` only."""
    wb = w // 8
    raw = (c & ((1 << (w * count)) - 1)).to_bytes(wb * count, "little")
    half, full = 1 << (w - 1), 1 << w
    out, carry = [], 0
    for i in range(count):
        d = int.from_bytes(raw[i * wb:(i + 1) * wb], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(d)
    return out


def _fft_conv(field, a, b, n, counter=None):
    ia, sa = field.fixed(a)
    ib, sb = field.fixed(b)
    ba = max((abs(v).bit_length() for v in ia), default=0)
    bb = max((abs(v).bit_length() for v in ib), default=0)
    if ba == 0 or bb == 0:
        return field.zeros(n)
    w = ba + bb + math.ceil(math.log2(max(2, n))) + 2
    w = -(-w // 8) * 8
    A, B = _pack(ia, w), _pack(ib, w)
    # every product truncated to n terms is an n-by-n transform, so the
    # count depends on n only (mirrors the padding of mp_basic's products)
    count = -(-n * w // ntt.COEFF_BITS)
    prod, cost = ntt.multiply(abs(A), abs(B), count, count, square=False)
    _tally(counter, cost)
    C = prod if (A < 0) == (B < 0) else -prod
    return field.unfixed(_unpack(C, w, n), sa + sb)


def _conv(field, a, b, n, method="auto", counter=None):
    a, b = a[:n], b[:n]
    if method == "auto":
        method = "fft" if field.fft and min(len(a), len(b)) >= FFT_THRESHOLD else "classical"
    if method == "fft":
        if not field.fft:
            raise CapabilityError(f"no FFT path for {field.name} coefficients")
        return _fft_conv(field, a, b, n, counter)
    if method != "classical":
        raise ValueError("method must be 'auto', 'classical' or 'fft'")
    return field.conv(a, b, n, counter)


def ps_mul(A: Series, B: Series, n: int | None = None, *, method: str = "auto",
           counter: OpCounter | None = None) -> Series:
    """First n coefficients of A*B, c_j = sum_{i<=j} a_i b_{j-i}."""
    if n is None:
        n = min(A.order, B.order)
    return Series(_conv(A.field, A.coeffs, B.coeffs, n, method, counter), A.field)


# -- reciprocal, log, exp -------------------------------------------------------

def _require(cond, msg):
    if not cond:
        raise NormalizationError(msg)


def ps_recip(P: Series, n: int | None = None, *, method: str = "auto",
             counter: OpCounter | None = None) -> Series:
    """1/P mod x^n by Newton doubling R <- R - R (P R - 1)."""
    F = P.field
    n = P.order if n is None else n
    _require(P.order > 0 and not F.is_zero(P[0]), "ps_recip needs a unit series (a_0 != 0)")
    R = F.vec([F.inv(P[0])])
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        E = _conv(F, P.coeffs[:k2], R, k2, method, counter)      # 1 + x^k e
        corr = _conv(F, R, E[k:k2], k2 - k, method, counter)
        R = F.concat(R, F.neg(corr))
        k = k2
    return Series(R[:n], F)


def ps_diff(P: Series, *, counter: OpCounter | None = None) -> Series:
    """Formal derivative; order drops by one."""
    F = P.field
    if P.order <= 1:
        return Series(F.zeros(0), F)
    return Series(F.mul_ints(P.coeffs[1:], list(range(1, P.order)), counter), F)


def ps_integrate(P: Series, *, counter: OpCounter | None = None) -> Series:
    """Formal integral with zero constant term; order rises by one."""
    F = P.field
    body = F.div_ints(P.coeffs, list(range(1, P.order + 1)), counter) if P.order else F.zeros(0)
    return Series(F.concat(F.zeros(1), body), F)


def ps_log(P: Series, n: int | None = None, *, method: str = "auto",
           counter: OpCounter | None = None) -> Series:
    """log P for a_0 = 1: integrate P'/P."""
    F = P.field
    n = P.order if n is None else n
    _require(P.order > 0 and F.is_one(P[0]), "ps_log needs a_0 = 1; normalize first")
    if n <= 1:
        return Series(F.zeros(n), F)
    P = P.truncate(n)
    D = ps_diff(P, counter=counter)
    R = ps_recip(P, n - 1, method=method, counter=counter)
    Q = ps_mul(D, R, n - 1, method=method, counter=counter)
    return ps_integrate(Q, counter=counter)


def ps_exp(P: Series, n: int | None = None, *, order: int = 2, method: str = "auto",
           counter: OpCounter | None = None, trace: list | None = None) -> Series:
    """exp P for a_0 = 0 by R <- R - R (log R - P), R_0 = 1.

    Iteration k works at truncation order min(2^k, n).  ``order=4`` uses
    R <- R (1 + d + d^2/2 + d^3/6), d = P - log R, which quadruples the
    number of correct terms per step.  Iterates are appended to ``trace``.
    """
    F = P.field
    n = P.order if n is None else n
    _require(P.order == 0 or F.is_zero(P[0]), "ps_exp needs a_0 = 0")
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    P = P.truncate(n)
    R = F.vec([1])
    if trace is not None:
        trace.append(Series(R, F))
    k = 1
    while k < n:
        if order == 2:
            k2 = min(2 * k, n)
            L = ps_log(Series(F.concat(R, F.zeros(k2 - k)), F), k2, method=method, counter=counter)
            d = F.sub(L.coeffs[k:k2], P.coeffs[k:k2])
            corr = _conv(F, R, d, k2 - k, method, counter)
            R = F.concat(R, F.neg(corr))
        else:
            k2 = min(4 * k, n)
            L = ps_log(Series(F.concat(R, F.zeros(k2 - k)), F), k2, method=method, counter=counter)
            d = F.sub(P.coeffs[k:k2], L.coeffs[k:k2])           # x^k d
            s = d
            if k2 > 2 * k:
                m2 = k2 - 2 * k
                d2 = _conv(F, d[:m2], d[:m2], m2, method, counter)  # x^2k d^2
                s = F.add(s, F.concat(F.zeros(k), F.scale(d2, F.const(Fraction(1, 2)), counter)))
                if k2 > 3 * k:
                    m3 = k2 - 3 * k
                    d3 = _conv(F, d[:m3], d2[:m3], m3, method, counter)
                    s = F.add(s, F.concat(F.zeros(2 * k),
                                          F.scale(d3, F.const(Fraction(1, 6)), counter)))
            corr = _conv(F, R, s, k2 - k, method, counter)
            R = F.concat(R, corr)
        k = k2
        if trace is not None:
            trace.append(Series(R, F))
    return Series(R[:n], F)


def ps_pow(P: Series, m: int, n: int | None = None, *, method: str = "auto",
           counter: OpCounter | None = None) -> Series:
    """P^m = exp(m log P); the cost does not depend on m.

    a_0 != 1 is divided out and a_0^m restored by scalar repeated
    squaring; leading zero coefficients are factored out as x^v.
    """
    F = P.field
    n = P.order if n is None else n
    if m < 0 or int(m) != m:
        raise ValueError("ps_pow needs a non-negative integer power")
    v = next((i for i in range(min(P.order, n)) if not F.is_zero(P[i])), None)
    if m == 0:
        if v is None:
            raise NormalizationError("0^0 is undefined for series")
        return constant(1, n, F)
    if v is None or v * m >= n:
        return Series(F.zeros(n), F)
    if m == 1:
        return P.truncate(n)
    nq = n - v * m
    Q = Series(P.coeffs[v:v + nq], F).truncate(nq)
    a0 = Q[0]
    if not F.is_one(a0):
        Q = Series(F.scale(Q.coeffs, F.inv(a0), counter), F)
    L = ps_log(Q, nq, method=method, counter=counter)
    E = ps_exp(Series(F.scale(L.coeffs, F.const(m), counter), F), nq, method=method,
               counter=counter)
    if not F.is_one(a0):
        c, base, e = F.one(), a0, m
        while e:
            if e & 1:
                c = F.mul(c, base)
            e >>= 1
            if e:
                base = F.mul(base, base)
        E = Series(F.scale(E.coeffs, c, counter), F)
    return Series(F.concat(F.zeros(v * m), E.coeffs), F)


def ps_atan(P: Series, n: int | None = None, *, method: str = "auto",
            counter: OpCounter | None = None) -> Series:
    """artan P for a_0 = 0, from (artan P)' = P' / (1 + P^2)."""
    F = P.field
    n = P.order if n is None else n
    _require(P.order == 0 or F.is_zero(P[0]), "ps_atan needs a_0 = 0")
    if n <= 1:
        return Series(F.zeros(n), F)
    P = P.truncate(n)
    S = ps_mul(P, P, n - 1, method=method, counter=counter)
    S = Series(F.add(S.coeffs, F.concat(F.vec([1]), F.zeros(n - 2))), F)
    R = ps_recip(S, n - 1, method=method, counter=counter)
    Q = ps_mul(ps_diff(P, counter=counter), R, n - 1, method=method, counter=counter)
    return ps_integrate(Q, counter=counter)


# -- text format ----------------------------------------------------------------

def dumps(P: Series) -> str:
    """One coefficient per line, prefixed by its index."""
    lines = [f"# field {P.field.name}", f"# order {P.order}"]
    lines += [f"{i} {P.field.fmt(c)}" for i, c in enumerate(P.coeffs)]
    return "\n".join(lines) + "\n"


def loads(text: str, field=None) -> Series:
    """Inverse of :func:`dumps`.  Missing indices are zero; ``field``
    overrides the header."""
    order = None
    entries = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "field" and field is None:
                field = field_by_name(parts[1])
            elif len(parts) == 2 and parts[0] == "order":
                order = int(parts[1])
            continue
        idx, _, val = line.partition(" ")
        if not val.strip():
            raise ValueError(f"malformed series line: {raw!r}")
        entries[int(idx)] = val.strip()
    field = field or FLOAT64
    if order is None:
        order = max(entries) + 1 if entries else 0
    if any(i < 0 or i >= order for i in entries):
        raise ValueError("coefficient index outside the series order")
    coeffs = [field.parse(entries[i]) if i in entries else field.zero() for i in range(order)]
    return Series(field.vec(coeffs), field)
