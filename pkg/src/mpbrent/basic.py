"""Reciprocal, division, inverse square root and square root by Newton
iteration with a descending precision schedule.

Each iteration only needs to be as accurate as the next one can use, so
the working precision roughly doubles (or triples, for the third-order
inverse square root) from a 53-bit machine seed up to n.  With M(n) the
cost of one precision-n multiplication this gives, asymptotically,

    recip ~ 3 M(n),  div ~ 4 M(n),  inv_sqrt ~ 9/2 M(n),  sqrt ~ 11/2 M(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import core
from .core import MPFloat, add, ldexp, metered, mul, mul_int, one, sub
from .errors import DivisionByZero, DomainError

SEED_BITS = 53
GUARD = 8
INNER_GUARD = 4


@dataclass(frozen=True)
class PrecisionSchedule:
    """Working precisions, full precision first, ending at the seed."""

    entries: tuple[int, ...]
    order: int

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def ascending(self) -> list[int]:
        return list(reversed(self.entries))

    def __eq__(self, other):
        if isinstance(other, (list, tuple)):
            return list(self.entries) == list(other)
        if isinstance(other, PrecisionSchedule):
            return self.entries == other.entries and self.order == other.order
        return NotImplemented


def newton_schedule(n_work: int, order: int = 2, guard: int = GUARD) -> PrecisionSchedule:
    """Precisions n_work, ceil(n_work/order) + guard, ... down to 53 bits."""
    if n_work < SEED_BITS:
        raise ValueError(f"schedule needs n_work >= {SEED_BITS}")
    if order < 2:
        raise ValueError("order must be at least 2")
    out = [n_work]
    while out[-1] > SEED_BITS:
        p = out[-1]
        nxt = max(SEED_BITS, -(-p // order) + guard)
        if nxt >= p:
            nxt = SEED_BITS
        out.append(nxt)
    return PrecisionSchedule(tuple(out), order)


def _split(a: MPFloat) -> tuple[MPFloat, int]:
    """a = f * 2**e with f in [1/2, 1)."""
    return MPFloat(a.sign, a.man, 0, a.prec), a.exp


def _top_float(a: MPFloat) -> float:
    return a.sign * (a.man >> max(0, a.prec - SEED_BITS)) / (1 << min(a.prec, SEED_BITS))


@metered("recip")
def recip(a: MPFloat, n: int, schedule: PrecisionSchedule | None = None) -> MPFloat:
    """1/a to precision n.

    x <- x - x*(a*x - 1); the product a*x is formed at the level's
    precision p, the correction x*eps only at the previous level's.
    """
    if a.sign == 0:
        raise DivisionByZero("reciprocal of zero")
    f, e = _split(a)
    if f.man == 1 << (f.prec - 1):
        # power of two: exact
        return MPFloat(a.sign, 1 << (n - 1), 2 - e, n)
    levels = (schedule or newton_schedule(max(n, SEED_BITS), 2)).ascending()
    # Inner levels carry a few extra bits so that a schedule without guard
    # bits still converges; the last level runs at exactly its entry.
    levels = [p + INNER_GUARD for p in levels[:-1]] + levels[-1:]
    x = core.from_float(1.0 / _top_float(f), SEED_BITS)
    prev = levels[0]
    for p in levels[1:]:
        eps = add(mul(f, x, p), -one(p), p)
        x = sub(x, mul(x, eps, prev), p)
        prev = p
    return ldexp(core.round_to(x, n), -e)


@metered("div")
def div(b: MPFloat, a: MPFloat, n: int) -> MPFloat:
    """b/a = b * (1/a) to precision n."""
    if a.sign == 0:
        raise DivisionByZero("division by zero")
    if b.sign == 0:
        return core.zero(n)
    return mul(b, recip(a, n), n)


def _even_split(a: MPFloat) -> tuple[MPFloat, int]:
    """a = g * 2**k with k even and g in [1/2, 2)."""
    k = a.exp if a.exp % 2 == 0 else a.exp - 1
    return MPFloat(a.sign, a.man, a.exp - k, a.prec), k


@metered("inv_sqrt")
def inv_sqrt(a: MPFloat, n: int, schedule: PrecisionSchedule | None = None) -> MPFloat:
    """1/sqrt(a) to precision n by the third-order iteration

        x <- x - x*(eps - 3/4 eps^2)/2,   eps = a*x^2 - 1.

    At a level of precision p: a*x^2 at p, eps^2 at ~p/3, the final
    product at ~2p/3.
    """
    if a.sign <= 0:
        raise DomainError("inv_sqrt needs a > 0")
    g, k = _even_split(a)
    if g.man == 1 << (g.prec - 1) and g.exp == 1:
        return ldexp(one(n), -(k // 2))
    levels = (schedule or newton_schedule(max(n, SEED_BITS), 3)).ascending()
    x = core.from_float(1.0 / math.sqrt(float(g)), SEED_BITS)
    for p in levels[1:]:
        q = -(-p // 3) + GUARD
        r = -(-2 * p // 3) + GUARD
        x2 = mul(x, x, p)
        eps = add(mul(g, x2, p), -one(p), p)
        e2 = mul(eps, eps, q)
        t = sub(eps, ldexp(mul_int(e2, 3, q), -2), r)
        x = sub(x, ldexp(mul(x, t, r), -1), p)
    return ldexp(core.round_to(x, n), -(k // 2))


@metered("sqrt")
def sqrt(a: MPFloat, n: int) -> MPFloat:
    """sqrt(a) = a * a**(-1/2); sqrt(0) = 0."""
    if a.sign < 0:
        raise DomainError("sqrt of a negative number")
    if a.sign == 0:
        return core.zero(n)
    return mul(a, inv_sqrt(a, n), n)


@metered("sqrt_direct")
def sqrt_direct(a: MPFloat, n: int, form: int = 2) -> MPFloat:
    """Square root by Newton's method applied to x^2 - a directly.

    form 1:  x <- (x + a/x)/2             (a full division per level)
    form 2:  x <- x + (a - x^2)/(2x)      (division at half precision)

    Both are slower than :func:`sqrt`; they exist for comparison.
    """
    if a.sign < 0:
        raise DomainError("sqrt of a negative number")
    if a.sign == 0:
        return core.zero(n)
    g, k = _even_split(a)
    levels = newton_schedule(max(n, SEED_BITS), 2).ascending()
    x = core.from_float(math.sqrt(float(g)), SEED_BITS)
    prev = levels[0]
    for p in levels[1:]:
        if form == 1:
            x = ldexp(add(x, div(g, x, p), p), -1)
        elif form == 2:
            resid = sub(g, mul(x, x, p), p)
            x = add(x, ldexp(div(resid, x, prev), -1), p)
        else:
            raise ValueError("form must be 1 or 2")
        prev = p
    return ldexp(core.round_to(x, n), k // 2)
