"""Multiple-precision binary floating point on 64-bit limbs.

A nonzero MPFloat is ``sign * fraction * 2**exponent`` with the fraction
in [1/2, 1) held as a ``prec``-bit integer mantissa whose top bit is set.
Viewed as limbs, the mantissa occupies ceil(prec / 64) words, most
significant first, with the unused low bits of the last word zero.

Rounding is truncation toward zero everywhere.  Every operation takes the
result precision ``n`` explicitly; callers own their guard bits.

Multiplication goes through one of three backends (schoolbook, Karatsuba,
NTT).  A precision-n product treats both operands as (n+1)-bit fractions,
so its cost depends only on n and the backend; that is the M(n) of the
cost model and what :class:`CostMeter` counts.
"""

from __future__ import annotations

import contextvars
import functools
import inspect
import math
import os
import re
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import ntt
from .errors import DivisionByZero, EmptyReportError, ExponentOverflow

W = 64
LIMB_MASK = (1 << W) - 1
EXP_MIN = -(1 << 63)
EXP_MAX = (1 << 63) - 1

BACKENDS = ("schoolbook", "karatsuba", "ntt")
# Karatsuba recursion bottoms out in schoolbook rows at this many limbs.
KARATSUBA_BASE = 12

# When true, every constructor re-checks the normalization invariants.
DEBUG = bool(os.environ.get("MPBRENT_DEBUG"))


class MPFloat:
    """Immutable binary float; see the module docstring for the layout."""

    __slots__ = ("sign", "man", "exp", "prec")

    def __init__(self, sign: int, man: int, exp: int, prec: int):
        self.sign = sign
        self.man = man
        self.exp = exp
        self.prec = prec
        if DEBUG:
            self.validate()

    def validate(self):
        if self.prec < 1:
            raise ValueError("precision must be >= 1")
        if self.sign == 0:
            if self.man or self.exp:
                raise ValueError("zero must have empty mantissa and exponent 0")
            return
        if self.sign not in (-1, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.man.bit_length() != self.prec:
            raise ValueError("mantissa not normalized to its precision")
        if not EXP_MIN <= self.exp <= EXP_MAX:
            raise ExponentOverflow("exponent out of range")

    # -- views -------------------------------------------------------------

    @property
    def limbs(self) -> tuple[int, ...]:
        if self.sign == 0:
            return ()
        count = -(-self.prec // W)
        m = self.man << (count * W - self.prec)
        return tuple((m >> (W * (count - 1 - i))) & LIMB_MASK for i in range(count))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.man, 1 << self.prec) if self.sign else Fraction(0)

    def is_zero(self) -> bool:
        return self.sign == 0

    def to_fraction(self) -> Fraction:
        if self.sign == 0:
            return Fraction(0)
        e = self.exp - self.prec
        v = Fraction(self.man << e) if e >= 0 else Fraction(self.man, 1 << -e)
        return v if self.sign > 0 else -v

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        top = self.man >> max(0, self.prec - 60)
        shift = self.exp - min(self.prec, 60)
        try:
            return self.sign * math.ldexp(float(top), shift)
        except OverflowError:
            return self.sign * math.inf

    def log2_abs(self) -> float:
        """log2 |x| as a float, valid for any exponent."""
        if self.sign == 0:
            return -math.inf
        top = self.man >> max(0, self.prec - 60)
        return math.log2(top) + self.exp - min(self.prec, 60)

    # -- comparisons and sign ----------------------------------------------

    def __neg__(self) -> MPFloat:
        if self.sign == 0:
            return self
        return MPFloat(-self.sign, self.man, self.exp, self.prec)

    def __abs__(self) -> MPFloat:
        return -self if self.sign < 0 else self

    def __eq__(self, other):
        if isinstance(other, (int, float, Fraction)):
            other = exact(other)
        if not isinstance(other, MPFloat):
            return NotImplemented
        return cmp(self, other) == 0

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        return cmp(self, _coerce(other)) < 0

    def __le__(self, other):
        return cmp(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return cmp(self, _coerce(other)) > 0

    def __ge__(self, other):
        return cmp(self, _coerce(other)) >= 0

    def __repr__(self):
        return f"MPFloat('{to_hex(self)}', prec={self.prec})"

    def __str__(self):
        return to_decimal(self)


def _coerce(v):
    return v if isinstance(v, MPFloat) else exact(v)


def _check_exp(e: int) -> int:
    if not EXP_MIN <= e <= EXP_MAX:
        raise ExponentOverflow(f"binary exponent {e} outside 64-bit range")
    return e


def zero(n: int = 53) -> MPFloat:
    return MPFloat(0, 0, 0, n)


def from_man_exp(sign: int, man: int, e: int, n: int) -> MPFloat:
    """Truncate ``sign * man * 2**e`` (man >= 0) to an n-bit MPFloat."""
    if man == 0 or sign == 0:
        return MPFloat(0, 0, 0, n)
    if man < 0:
        man, sign = -man, -sign
    bl = man.bit_length()
    if bl > n:
        man >>= bl - n
    elif bl < n:
        man <<= n - bl
    return MPFloat(sign, man, _check_exp(e + bl), n)


def from_int(v: int, n: int | None = None) -> MPFloat:
    n = n or max(1, abs(v).bit_length())
    return from_man_exp(1 if v >= 0 else -1, abs(v), 0, n)


def from_float(v: float, n: int = 53) -> MPFloat:
    if not math.isfinite(v):
        raise ValueError("non-finite values are not representable")
    if v == 0.0:
        return zero(n)
    m, e = math.frexp(abs(v))
    return from_man_exp(1 if v > 0 else -1, int(m * (1 << 53)), e - 53, n)


def from_rational(num: int, den: int, n: int) -> MPFloat:
    """Truncated n-bit value of num/den."""
    if den == 0:
        raise DivisionByZero("rational with zero denominator")
    if num == 0:
        return zero(n)
    sign = 1 if (num > 0) == (den > 0) else -1
    num, den = abs(num), abs(den)
    shift = n + 2 + den.bit_length() - num.bit_length()
    if shift >= 0:
        q = (num << shift) // den
    else:
        q = num // (den << -shift)
    return from_man_exp(sign, q, -shift, n)


def exact(v) -> MPFloat:
    """Exact MPFloat for an int, float, or dyadic Fraction."""
    if isinstance(v, MPFloat):
        return v
    if isinstance(v, bool):
        v = int(v)
    if isinstance(v, int):
        return from_int(v)
    if isinstance(v, float):
        return from_float(v, 53)
    if isinstance(v, Fraction):
        d = v.denominator
        if d & (d - 1):
            raise ValueError("only dyadic fractions are exact")
        num = v.numerator
        return from_man_exp(1 if num >= 0 else -1, abs(num), -(d.bit_length() - 1),
                            max(1, abs(num).bit_length()))
    raise TypeError(f"cannot convert {type(v).__name__} to MPFloat")


def mpf(v, n: int = 53) -> MPFloat:
    """Convert int, float, str, Fraction or MPFloat to precision n (truncating)."""
    if isinstance(v, MPFloat):
        return round_to(v, n)
    if isinstance(v, str):
        return parse(v, n)
    if isinstance(v, Fraction):
        return from_rational(v.numerator, v.denominator, n)
    if isinstance(v, bool):
        v = int(v)
    if isinstance(v, int):
        return from_int(v, n)
    if isinstance(v, float):
        return from_float(v, n)
    raise TypeError(f"cannot convert {type(v).__name__} to MPFloat")


def one(n: int = 53) -> MPFloat:
    return MPFloat(1, 1 << (n - 1), 1, n)


# -- exact-ish scalar operations (all O(n), never metered) -------------------

def cmp(x: MPFloat, y: MPFloat) -> int:
    if x.sign != y.sign:
        return (x.sign > y.sign) - (x.sign < y.sign)
    if x.sign == 0:
        return 0
    if x.exp != y.exp:
        c = 1 if x.exp > y.exp else -1
        return c * x.sign
    # align mantissas
    if x.prec >= y.prec:
        a, b = x.man, y.man << (x.prec - y.prec)
    else:
        a, b = x.man << (y.prec - x.prec), y.man
    return ((a > b) - (a < b)) * x.sign


def round_to(x: MPFloat, n: int) -> MPFloat:
    """Truncate toward zero to n fraction bits."""
    if x.prec == n:
        return x
    if x.sign == 0:
        return MPFloat(0, 0, 0, n)
    if x.prec > n:
        return MPFloat(x.sign, x.man >> (x.prec - n), x.exp, n)
    return MPFloat(x.sign, x.man << (n - x.prec), x.exp, n)


def ldexp(x: MPFloat, k: int) -> MPFloat:
    """x * 2**k, exact."""
    if x.sign == 0 or k == 0:
        return x
    return MPFloat(x.sign, x.man, _check_exp(x.exp + k), x.prec)


def neg(x: MPFloat) -> MPFloat:
    return -x


def add(x: MPFloat, y: MPFloat, n: int) -> MPFloat:
    """x + y truncated to n bits."""
    if y.sign == 0:
        return round_to(x, n)
    if x.sign == 0:
        return round_to(y, n)
    if (x.exp, x.prec) < (y.exp, y.prec) and x.exp <= y.exp:
        x, y = y, x
    if x.exp < y.exp:
        x, y = y, x
    # Anything more than n+3 bits below the top of x only matters through
    # its sign; replace it by a sticky unit there.
    floor_exp = x.exp - n - 4
    xl = x.exp - x.prec
    if y.exp < floor_exp:
        ym, yl = 1, floor_exp - 1
    else:
        ym, yl = y.man, y.exp - y.prec
    low = min(xl, yl)
    total = x.sign * (x.man << (xl - low)) + y.sign * (ym << (yl - low))
    if total == 0:
        return zero(n)
    return from_man_exp(1, total, low, n)


def sub(x: MPFloat, y: MPFloat, n: int) -> MPFloat:
    return add(x, -y, n)


def mul_int(x: MPFloat, k: int, n: int) -> MPFloat:
    """x * k for a small integer k (a scalar operation, not a multiplication)."""
    if x.sign == 0 or k == 0:
        return zero(n)
    return from_man_exp(x.sign * (1 if k > 0 else -1), x.man * abs(k), x.exp - x.prec, n)


def div_int(x: MPFloat, k: int, n: int) -> MPFloat:
    """x / k for a small nonzero integer k, truncated."""
    if k == 0:
        raise DivisionByZero("division by integer zero")
    if x.sign == 0:
        return zero(n)
    shift = n + 2 + abs(k).bit_length() - x.prec
    m = x.man << shift if shift > 0 else x.man
    return from_man_exp(x.sign * (1 if k > 0 else -1), m // abs(k),
                        x.exp - x.prec - max(shift, 0), n)


def floor_int(x: MPFloat) -> int:
    if x.sign == 0:
        return 0
    e = x.exp - x.prec
    if e >= 0:
        return x.sign * (x.man << e)
    q = x.man >> -e
    if x.sign < 0:
        if q << -e != x.man:
            q += 1
        return -q
    return q


# -- multiplication backends ---------------------------------------------------

def limb_count(bits: int) -> int:
    return max(1, -(-bits // W))


def schoolbook(a: int, b: int) -> tuple[int, int]:
    """Row-by-row O(la*lb) product; returns (product, limb multiplications)."""
    la, lb = limb_count(a.bit_length()), limb_count(b.bit_length())
    if la < lb:
        a, b, la, lb = b, a, lb, la
    raw = b.to_bytes(lb * 8, "little")
    acc = 0
    for j in range(lb):
        limb = int.from_bytes(raw[8 * j: 8 * j + 8], "little")
        if limb:
            acc += (a * limb) << (W * j)
    return acc, la * lb


def karatsuba(a: int, b: int) -> tuple[int, int]:
    la, lb = limb_count(a.bit_length()), limb_count(b.bit_length())
    if min(la, lb) <= KARATSUBA_BASE:
        return schoolbook(a, b)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    h = (la + 1) // 2
    sh = W * h
    a1, a0 = a >> sh, a & ((1 << sh) - 1)
    if lb <= h:
        p0, c0 = karatsuba(a0, b)
        p1, c1 = karatsuba(a1, b)
        return (p1 << sh) + p0, c0 + c1
    b1, b0 = b >> sh, b & ((1 << sh) - 1)
    z0, c0 = karatsuba(a0, b0)
    z2, c2 = karatsuba(a1, b1)
    z1, c1 = karatsuba(a0 + a1, b0 + b1)
    return (z2 << (2 * sh)) + ((z1 - z0 - z2) << sh) + z0, c0 + c1 + c2


def ntt_mul(a: int, b: int, bits: int | None = None) -> tuple[int, int]:
    if bits is None:
        return ntt.multiply(a, b, square=False)
    count = -(-bits // ntt.COEFF_BITS)
    # Squares are charged as full products, as in the cost model.
    return ntt.multiply(a, b, count, count, square=False)


# -- calibration ---------------------------------------------------------------

@dataclass
class Thresholds:
    """Limb counts where auto mode switches backends."""
    t1: int = 40
    t2: int = 1500


DEFAULT_CALIBRATION = Path(__file__).with_name("calibration.cfg")


def load_thresholds(path: str | os.PathLike | None = None) -> Thresholds:
    path = path or os.environ.get("MPBRENT_CALIB") or DEFAULT_CALIBRATION
    t = Thresholds()
    try:
        text = Path(path).read_text()
    except OSError:
        return t
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line or "=" not in line:
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key.upper() == "T1":
            t.t1 = int(value)
        elif key.upper() == "T2":
            t.t2 = int(value)
    if t.t1 > t.t2:
        raise ValueError(f"calibration {path}: T1 > T2")
    return t


def save_thresholds(t: Thresholds, path: str | os.PathLike) -> None:
    Path(path).write_text(f"# multiplication backend crossover points, in 64-bit limbs\nT1={t.t1}\nT2={t.t2}\n")


def _time_backend(fn, limbs: int, repeat: int) -> float:
    import random
    rng = random.Random(limbs)
    a = rng.getrandbits(W * limbs) | (1 << (W * limbs - 1))
    b = rng.getrandbits(W * limbs) | (1 << (W * limbs - 1))
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(a, b)
        best = min(best, time.perf_counter() - t0)
    return best


def calibrate(path: str | os.PathLike | None = None, max_limbs: int = 4096,
              repeat: int = 3) -> Thresholds:
    """Time the backends on doubling sizes and record the crossovers."""
    t1 = t2 = None
    limbs = 4
    while limbs <= max_limbs and (t1 is None or t2 is None):
        s = _time_backend(schoolbook, limbs, repeat)
        k = _time_backend(karatsuba, limbs, repeat)
        f = _time_backend(ntt_mul, limbs, repeat)
        if t1 is None and k < s:
            t1 = limbs
        if t1 is not None and t2 is None and f < k:
            t2 = limbs
        limbs *= 2
    t1 = t1 or max_limbs
    t2 = max(t2 or max_limbs, t1)
    result = Thresholds(t1, t2)
    if path is not None:
        save_thresholds(result, path)
    return result


_thresholds: Thresholds | None = None


def thresholds() -> Thresholds:
    global _thresholds
    if _thresholds is None:
        _thresholds = load_thresholds()
    return _thresholds


def set_thresholds(t: Thresholds | None) -> None:
    """Override the auto-mode crossovers (None reloads from config)."""
    global _thresholds
    _thresholds = t


def choose_backend(limbs: int) -> str:
    t = thresholds()
    if limbs < t.t1:
        return "schoolbook"
    if limbs < t.t2:
        return "karatsuba"
    return "ntt"


# -- cost meter ----------------------------------------------------------------

@dataclass
class Phase:
    label: str
    precision: int
    cost: int
    wall_ns: int


@dataclass
class CostMeter:
    """Counts multiplication work for one computation.

    Use as a context manager; multiplications inside the block are charged
    to this meter.  The outermost metered operation called in the block
    records a :class:`Phase` (label, precision, cost, wall time).

    ``backend`` forces a multiplication backend for the block ("auto"
    keeps the calibrated choice).  A meter is single-writer: do not share
    one between concurrent computations.
    """

    backend: str = "auto"
    limb_mults: int = 0
    mults_by_precision: Counter = field(default_factory=Counter)
    wall_ns: dict = field(default_factory=dict)
    phases: list = field(default_factory=list)
    _depth: int = 0
    _tokens: list = field(default_factory=list, repr=False)
    _refs: dict = field(default_factory=dict, repr=False)

    def __enter__(self):
        self._tokens.append(_METER.set(self))
        return self

    def __exit__(self, *exc):
        _METER.reset(self._tokens.pop())
        return False

    def charge(self, n: int, cost: int) -> None:
        self.limb_mults += cost
        self.mults_by_precision[n] += 1

    def reset(self) -> None:
        self.limb_mults = 0
        self.mults_by_precision.clear()
        self.wall_ns.clear()
        self.phases.clear()

    def reference_cost(self, n: int) -> int:
        """Cost of one precision-n multiplication on this meter's backend."""
        if n not in self._refs:
            m = (1 << (n + 1)) - 1
            self._refs[n] = _mantissa_product(m, m, n + 1, self.backend)[1]
        return self._refs[n]

    def cost_of(self, label: str, n: int | None = None) -> int:
        return sum(p.cost for p in self.phases
                   if p.label == label and (n is None or p.precision == n))

    def ratio(self, label: str, n: int) -> float:
        return self.cost_of(label, n) / self.reference_cost(n)


_METER: contextvars.ContextVar[CostMeter | None] = contextvars.ContextVar("mpbrent_meter", default=None)
_BACKEND: contextvars.ContextVar[str] = contextvars.ContextVar("mpbrent_backend", default="auto")


def active_meter() -> CostMeter | None:
    return _METER.get()


class use_backend:
    """Context manager selecting the multiplication backend for a block."""

    def __init__(self, name: str):
        if name != "auto" and name not in BACKENDS:
            raise ValueError(f"unknown backend {name!r}")
        self.name = name

    def __enter__(self):
        self._token = _BACKEND.set(self.name)
        return self

    def __exit__(self, *exc):
        _BACKEND.reset(self._token)
        return False


def metered(label: str):
    """Record the decorated operation as a phase of the active meter.

    Only the outermost metered call in a meter block opens a phase, so a
    recip inside a div is charged to the div.
    """

    def deco(fn):
        sig = inspect.signature(fn)

        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            meter = _METER.get()
            if meter is None or meter._depth:
                return fn(*args, **kwargs)
            bound = sig.bind(*args, **kwargs)
            n = bound.arguments.get("n", 0)
            before = meter.limb_mults
            t0 = time.perf_counter_ns()
            meter._depth += 1
            try:
                return fn(*args, **kwargs)
            finally:
                meter._depth -= 1
                dt = time.perf_counter_ns() - t0
                meter.phases.append(Phase(label, n, meter.limb_mults - before, dt))
                meter.wall_ns[label] = meter.wall_ns.get(label, 0) + dt

        return wrapper

    return deco


@dataclass(frozen=True)
class ReportRow:
    label: str
    precision: int
    ratio: float


def meter_report(meter: CostMeter) -> list[ReportRow]:
    """One row per recorded phase: cost relative to M(precision)."""
    if not meter.phases:
        raise EmptyReportError("meter has recorded no operations")
    return [ReportRow(p.label, p.precision, p.cost / meter.reference_cost(p.precision))
            for p in meter.phases]


def _resolve_backend(backend: str | None) -> str:
    if backend and backend != "auto":
        return backend
    meter = _METER.get()
    if meter is not None and meter.backend != "auto":
        return meter.backend
    return _BACKEND.get()


def _mantissa_product(a: int, b: int, bits: int, backend: str | None) -> tuple[int, int]:
    name = _resolve_backend(backend)
    if name == "auto":
        name = choose_backend(limb_count(bits))
    if name == "schoolbook":
        return schoolbook(a, b)
    if name == "karatsuba":
        return karatsuba(a, b)
    if name == "ntt":
        return ntt_mul(a, b, bits)
    raise ValueError(f"unknown backend {name!r}")


@metered("mul")
def mul(x: MPFloat, y: MPFloat, n: int, backend: str | None = None) -> MPFloat:
    """Precision-n product: operands taken as (n+1)-bit fractions, result truncated."""
    if n < 1:
        raise ValueError("precision must be >= 1")
    if x.sign == 0 or y.sign == 0:
        return zero(n)
    w = n + 1
    a = x.man >> (x.prec - w) if x.prec > w else x.man << (w - x.prec)
    b = y.man >> (y.prec - w) if y.prec > w else y.man << (w - y.prec)
    prod, cost = _mantissa_product(a, b, w, backend)
    meter = _METER.get()
    if meter is not None:
        meter.charge(n, cost)
    return from_man_exp(x.sign * y.sign, prod, x.exp + y.exp - 2 * w, n)


def sqr(x: MPFloat, n: int, backend: str | None = None) -> MPFloat:
    return mul(x, x, n, backend)


# -- string I/O ---------------------------------------------------------------

_DEC = re.compile(r"^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$")
_HEX = re.compile(r"^\s*([+-]?)0[xX]([0-9a-fA-F]*)(?:\.([0-9a-fA-F]*))?(?:[pP]([+-]?\d+))?\s*$")


def parse(s: str, n: int) -> MPFloat:
    """Parse ``±d.ddd e±k`` decimal or ``±0x1.hhh p±k`` hex, truncating to n bits."""
    m = _HEX.match(s)
    if m:
        sign, ip, fp, ex = m.groups()
        fp = fp or ""
        if not ip and not fp:
            raise ValueError(f"malformed hex float {s!r}")
        digits = int((ip or "0") + fp, 16)
        e = int(ex or 0) - 4 * len(fp)
        return from_man_exp(-1 if sign == "-" else 1, digits, e, n)
    m = _DEC.match(s)
    if not m or not (m.group(2) or m.group(3)):
        raise ValueError(f"malformed number {s!r}")
    sign, ip, fp, ex = m.groups()
    fp = fp or ""
    digits = int((ip or "0") + fp)
    e10 = int(ex or 0) - len(fp)
    s_ = -1 if sign == "-" else 1
    if e10 >= 0:
        return from_rational(s_ * digits * 10 ** e10, 1, n)
    return from_rational(s_ * digits, 10 ** -e10, n)


def to_hex(x: MPFloat) -> str:
    """Exact hexadecimal form ``±0x1.hhh…p±k``."""
    if x.sign == 0:
        return "0x0p+0"
    frac_bits = x.prec - 1
    pad = (-frac_bits) % 4
    rest = (x.man - (1 << frac_bits)) << pad
    hexdigits = format(rest, "x").zfill((frac_bits + pad) // 4) if frac_bits else ""
    hexdigits = hexdigits.rstrip("0")
    e = x.exp - 1
    body = f"0x1.{hexdigits}" if hexdigits else "0x1"
    return f"{'-' if x.sign < 0 else ''}{body}p{e:+d}"


def _decimal_digits(x: MPFloat, digits: int, mode: str) -> tuple[str, int]:
    """Significant digits of |x| and its decimal exponent (value = 0.d1d2.. * 10**e).

    mode is "down" (truncate), "up" (away from zero) or "nearest".
    """
    q = abs(x.to_fraction())
    e10 = math.floor(x.log2_abs() * math.log10(2)) + 1
    for _ in range(3):
        scaled = q * Fraction(10) ** (digits - e10)
        if mode == "down":
            v = scaled.numerator // scaled.denominator
        elif mode == "up":
            v = -((-scaled.numerator) // scaled.denominator)
        else:
            v = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
        if v >= 10 ** digits:
            e10 += 1
            continue
        if v < 10 ** (digits - 1) and scaled >= 10 ** (digits - 1) - 1:
            if v == 0 or scaled < 10 ** (digits - 1):
                e10 -= 1
                continue
        if v < 10 ** (digits - 1):
            e10 -= 1
            continue
        return str(v), e10
    return str(v), e10


def to_decimal(x: MPFloat, digits: int | None = None, mode: str | None = None) -> str:
    """Decimal string in scientific form ``±d.ddd…e±k``.

    With ``digits`` omitted the output is round-trip faithful: parsing it
    back at ``x.prec`` bits gives x again.  With ``digits`` given the
    output is truncated to that many significant digits unless ``mode``
    says otherwise.
    """
    if x.sign == 0:
        return "0.0"
    if digits is None:
        digits = math.ceil(x.prec * math.log10(2)) + 1
        mode = mode or "up"
    s, e10 = _decimal_digits(x, digits, mode or "down")
    mant = s[0] + ("." + s[1:] if len(s) > 1 else ".0")
    return f"{'-' if x.sign < 0 else ''}{mant}e{e10 - 1:+d}"


def to_fixed(x: MPFloat, digits: int, mode: str = "down", places: bool = False) -> str:
    """Positional decimal string.

    ``digits`` counts significant digits, or digits after the point when
    ``places`` is true.
    """
    if x.sign == 0:
        return "0." + "0" * max(digits - (0 if places else 1), 1) if digits > 1 else "0"
    e_est = math.floor(x.log2_abs() * math.log10(2)) + 1
    if places:
        sig = max(1, digits + e_est)
        s, e10 = _decimal_digits(x, sig, mode)
        if e10 != e_est:
            s, e10 = _decimal_digits(x, max(1, digits + e10), mode)
    else:
        s, e10 = _decimal_digits(x, digits, mode)
    sign = "-" if x.sign < 0 else ""
    if e10 <= 0:
        return f"{sign}0.{'0' * -e10}{s}"
    if e10 >= len(s):
        return f"{sign}{s}{'0' * (e10 - len(s))}"
    return f"{sign}{s[:e10]}.{s[e10:]}"
