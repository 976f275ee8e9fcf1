"""Exact integer multiplication by number-theoretic transforms.

Operands are cut into 16-bit coefficients and convolved modulo three
primes below 2**31, each of the form c * 3 * 2**20 + 1, so transforms of
length 2**k and 3 * 2**k (k <= 20) exist in every field.  The three
residue vectors are recombined by Garner's form of the Chinese remainder
theorem and the carries are released by packing the coefficient array
back into a Python integer.

All three primes are processed together as the rows of one numpy array,
so a "transform" below always means three simultaneous transforms.

Every function that does modular work returns the number of modular
multiplications it performed; callers feed that into a cost meter.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

PRIMES = (2113929217, 2095054849, 2088763393)
GENERATORS = (5, 11, 5)
COEFF_BITS = 16
MAX_LOG2 = 20
# Overshoot (in coefficients) that is folded back by direct evaluation
# instead of moving to the next transform length.
WRAP_LIMIT = 64

_P = np.array(PRIMES, dtype=np.uint64)


def _pcol(ndim):
    return _P.reshape((3,) + (1,) * (ndim - 1))


@lru_cache(maxsize=None)
def _root(p_index: int, order: int, inverse: bool = False) -> int:
    p = PRIMES[p_index]
    if (p - 1) % order:
        raise ValueError(f"no root of unity of order {order} mod {p}")
    w = pow(GENERATORS[p_index], (p - 1) // order, p)
    return pow(w, p - 2, p) if inverse else w


@lru_cache(maxsize=None)
def _twiddles(length: int, inverse: bool) -> np.ndarray:
    """Powers w**j, j < length/2, of a primitive length-th root, per prime."""
    half = length // 2
    out = np.empty((3, half), dtype=np.uint64)
    for i, p in enumerate(PRIMES):
        w = _root(i, length, inverse)
        row = [1] * half
        for j in range(1, half):
            row[j] = row[j - 1] * w % p
        out[i] = row
    return out


@lru_cache(maxsize=None)
def _powers(order: int, count: int, inverse: bool) -> np.ndarray:
    out = np.empty((3, count), dtype=np.uint64)
    for i, p in enumerate(PRIMES):
        w = _root(i, order, inverse)
        row = [1] * count
        for j in range(1, count):
            row[j] = row[j - 1] * w % p
        out[i] = row
    return out


def _addmod(u, v, p):
    s = u + v
    return np.minimum(s, s - p)


def _submod(u, v, p):
    d = u + p - v
    return np.minimum(d, d - p)


def forward(a: np.ndarray) -> int:
    """In-place decimation-in-frequency transform along the last axis.

    ``a`` has shape (3, ..., M) with M a power of two.  Input is in
    natural order, output in bit-reversed order.
    """
    m = a.shape[-1]
    lead = a.shape[:-1]
    blocks = int(np.prod(lead[1:], dtype=np.int64)) if len(lead) > 1 else 1
    p = _P.reshape(3, 1, 1)
    length = m
    work = 0
    while length >= 2:
        half = length // 2
        v4 = a.reshape(3, blocks * (m // length), 2, half)
        u = v4[:, :, 0, :]
        v = v4[:, :, 1, :]
        s = _addmod(u, v, p)
        d = _submod(u, v, p)
        d *= _twiddles(length, False)[:, None, :]
        d %= p
        v4[:, :, 0, :] = s
        v4[:, :, 1, :] = d
        work += blocks * (m // 2)
        length = half
    return work * 3


def inverse(a: np.ndarray) -> int:
    """In-place decimation-in-time inverse (bit-reversed in, natural out).

    The result is scaled by M, not normalized.
    """
    m = a.shape[-1]
    lead = a.shape[:-1]
    blocks = int(np.prod(lead[1:], dtype=np.int64)) if len(lead) > 1 else 1
    p = _P.reshape(3, 1, 1)
    length = 2
    work = 0
    while length <= m:
        half = length // 2
        v4 = a.reshape(3, blocks * (m // length), 2, half)
        u = v4[:, :, 0, :].copy()
        v = v4[:, :, 1, :] * _twiddles(length, True)[:, None, :]
        v %= p
        v4[:, :, 0, :] = _addmod(u, v, p)
        v4[:, :, 1, :] = _submod(u, v, p)
        work += blocks * (m // 2)
        length *= 2
    return work * 3


def _cyclic(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, int]:
    """Cyclic convolution along the last (power-of-two) axis."""
    m = a.shape[-1]
    p = _pcol(a.ndim)
    work = forward(a)
    if b is a:
        fb = a
    else:
        work += forward(b)
        fb = b
    a *= fb
    a %= p
    work += a.size
    work += inverse(a)
    scale = np.array([pow(m, q - 2, q) for q in PRIMES], dtype=np.uint64)
    a *= scale.reshape(p.shape)
    a %= p
    work += a.size
    return a, work


def _conv3(a: np.ndarray, b: np.ndarray | None, m: int) -> tuple[np.ndarray, int]:
    """Cyclic convolution of length 3*m through x^3m - 1 = prod (x^m - w^j)."""
    n = 3 * m
    p3 = _P.reshape(3, 1, 1)
    w = [int(_root(i, 3)) for i in range(3)]
    w = np.array([[1, x, x * x % q] for x, q in zip(w, PRIMES)], dtype=np.uint64)
    work = 0

    def split(x):
        nonlocal work
        blk = x.reshape(3, 3, m)
        out = np.empty((3, 3, m), dtype=np.uint64)
        for j in range(3):
            acc = blk[:, 0, :].copy()
            for t in (1, 2):
                e = (j * t) % 3
                if e == 0:
                    term = blk[:, t, :]
                else:
                    term = blk[:, t, :] * w[:, e][:, None] % p3[:, 0]
                    work += 3 * m
                acc = _addmod(acc, term, p3[:, 0])
            if j:
                acc *= _powers(n, m, False)[:, :] if j == 1 else _powers(n, 2 * m, False)[:, ::2][:, :m]
                acc %= p3[:, 0]
                work += 3 * m
            out[:, j, :] = acc
        return out

    fa = split(a)
    fb = fa if b is None else split(b)
    c, cw = _cyclic(fa, fa if b is None else fb)
    work += cw
    # undo the twist on branches 1 and 2
    c[:, 1, :] = c[:, 1, :] * _powers(n, m, True) % p3[:, 0]
    c[:, 2, :] = c[:, 2, :] * _powers(n, 2 * m, True)[:, ::2][:, :m] % p3[:, 0]
    work += 6 * m
    winv = np.array([[1, pow(int(x), q - 2, q), pow(int(x) * int(x), q - 2, q)]
                     for x, q in zip(w[:, 1], PRIMES)], dtype=np.uint64)
    third = np.array([pow(3, q - 2, q) for q in PRIMES], dtype=np.uint64)[:, None]
    out = np.empty((3, 3, m), dtype=np.uint64)
    for t in range(3):
        acc = c[:, 0, :].copy()
        for j in (1, 2):
            e = (j * t) % 3
            term = c[:, j, :] if e == 0 else c[:, j, :] * winv[:, e][:, None] % p3[:, 0]
            if e:
                work += 3 * m
            acc = _addmod(acc, term, p3[:, 0])
        acc *= third
        acc %= p3[:, 0]
        work += 3 * m
        out[:, t, :] = acc
    return out.reshape(3, n), work


@lru_cache(maxsize=None)
def transform_length(needed: int) -> int:
    """Smallest length 2**k or 3 * 2**k that is >= needed."""
    if needed <= 1:
        return 1
    k = (needed - 1).bit_length()
    best = 1 << k
    if k >= 2 and 3 << (k - 2) >= needed:
        best = 3 << (k - 2)
    if best > 3 << MAX_LOG2 or (best & (best - 1) == 0 and best > 1 << MAX_LOG2):
        raise OverflowError("operand too large for the NTT backend")
    return best


def plan(len_a: int, len_b: int) -> tuple[int, int]:
    """Return (transform length, number of wrapped coefficients)."""
    full = len_a + len_b - 1
    size = transform_length(full)
    if size > full - WRAP_LIMIT:
        smaller = transform_length(max(full - WRAP_LIMIT, len_a, len_b, 1))
        if smaller < size:
            size = smaller
    return size, max(0, full - size)


def _to_coeffs(x: int, count: int) -> np.ndarray:
    raw = x.to_bytes(2 * count, "little")
    return np.frombuffer(raw, dtype="<u2").astype(np.uint64)


def _pack(values: np.ndarray) -> int:
    """Sum of values[k] * 2**(16k) for uint64 values."""
    if values.size == 0:
        return 0
    total = 0
    for j in range(4):
        chunk = ((values >> np.uint64(16 * j)) & np.uint64(0xFFFF)).astype("<u2")
        if chunk.any():
            total += int.from_bytes(chunk.tobytes(), "little") << (16 * j)
    return total


def _garner(r: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Mixed-radix digits (low, t3): value = low + p1*p2*t3, low < p1*p2."""
    p1, p2, p3 = (np.uint64(q) for q in PRIMES)
    r1, r2, r3 = r[0], r[1], r[2]
    inv_p1_p2 = np.uint64(pow(PRIMES[0], PRIMES[1] - 2, PRIMES[1]))
    inv_p1_p3 = np.uint64(pow(PRIMES[0], PRIMES[2] - 2, PRIMES[2]))
    inv_p2_p3 = np.uint64(pow(PRIMES[1], PRIMES[2] - 2, PRIMES[2]))
    t2 = ((r2 + p2 - r1 % p2) % p2) * inv_p1_p2 % p2
    u = ((r3 + p3 - r1 % p3) % p3) * inv_p1_p3 % p3
    t3 = ((u + p3 - t2 % p3) % p3) * inv_p2_p3 % p3
    low = r1 + p1 * t2
    return low, t3, 4 * r.shape[1]


def coefficient_count(x: int) -> int:
    return max(1, -(-x.bit_length() // COEFF_BITS))


def multiply(a: int, b: int, len_a: int | None = None,
             len_b: int | None = None, square: bool | None = None) -> tuple[int, int]:
    """Exact product of two non-negative integers and its modular-mult count.

    ``len_a``/``len_b`` optionally fix the coefficient counts (callers that
    treat an operand as a full n-bit fraction pass the padded length).
    ``square`` defaults to detecting a == b; pass False to force the
    general two-operand transform.
    """
    if a == 0 or b == 0:
        return 0, 0
    la = len_a or coefficient_count(a)
    lb = len_b or coefficient_count(b)
    size, wrap = plan(la, lb)
    if square is None:
        square = a == b
    square = square and a == b and la == lb
    ca = np.zeros((3, size), dtype=np.uint64)
    ca[:, :la] = _to_coeffs(a, la)
    if square:
        cb = None
    else:
        cb = np.zeros((3, size), dtype=np.uint64)
        cb[:, :lb] = _to_coeffs(b, lb)
    if size & (size - 1):
        conv, work = _conv3(ca, cb, size // 3)
    else:
        conv, work = _cyclic(ca, ca if cb is None else cb)
    low, t3, gw = _garner(conv)
    work += gw
    if wrap:
        # Coefficients size .. la+lb-2 were folded onto 0 .. wrap-1;
        # recompute them directly and unfold.
        da = [int(v) for v in _to_coeffs(a, la)]
        db = da if square else [int(v) for v in _to_coeffs(b, lb)]
        high = []
        for k in range(size, la + lb - 1):
            lo_i = max(0, k - lb + 1)
            hi_i = min(la - 1, k)
            high.append(sum(da[i] * db[k - i] for i in range(lo_i, hi_i + 1)))
            work += hi_i - lo_i + 1
        if t3.any():
            raise ArithmeticError("NTT residue exceeded two-prime range")
        fixed = low[:wrap] - np.array(high, dtype=np.uint64)
        low = np.concatenate((fixed, low[wrap:], np.array(high, dtype=np.uint64)))
        return _pack(low), work
    total = _pack(low)
    if t3.any():
        total += PRIMES[0] * PRIMES[1] * _pack(t3)
    return total, work


def convolve(x: list[int], y: list[int]) -> list[int]:
    """Exact linear convolution of two lists of 16-bit digits (testing aid)."""
    if not x or not y:
        return []
    la, lb = len(x), len(y)
    size, wrap = plan(la, lb)
    if wrap:
        size = transform_length(la + lb - 1)
    ca = np.zeros((3, size), dtype=np.uint64)
    ca[:, :la] = np.array(x, dtype=np.uint64)
    cb = np.zeros((3, size), dtype=np.uint64)
    cb[:, :lb] = np.array(y, dtype=np.uint64)
    if size & (size - 1):
        conv, _ = _conv3(ca, cb, size // 3)
    else:
        conv, _ = _cyclic(ca, cb)
    low, t3, _ = _garner(conv)
    p12 = PRIMES[0] * PRIMES[1]
    return [int(lo) + p12 * int(t) for lo, t in zip(low[: la + lb - 1], t3[: la + lb - 1])]
