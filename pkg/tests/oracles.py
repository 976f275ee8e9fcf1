"""Independent reference computations in plain integer arithmetic.

These use nothing from mpbrent beyond reading an MPFloat's fields, so a
bug in the library cannot hide in its own oracle.
"""

import math
from fractions import Fraction


def parts(x):
    """x = m * 2^k exactly, m a signed integer."""
    return x.sign * x.man, x.exp - x.prec


def to_fraction(x):
    m, k = parts(x)
    return Fraction(m) * Fraction(2) ** k


def log2_rel_err(x, num: int, den: int = 1) -> float:
    """log2 |x - num/den| / |num/den|, exact integer arithmetic (-inf if equal)."""
    m, k = parts(x)
    if k >= 0:
        diff = m * den * (1 << k) - num
        scale = 1
    else:
        diff = m * den - num * (1 << -k)
        scale = 1 << -k
    if diff == 0:
        return -math.inf
    return math.log2(abs(diff)) - math.log2(abs(num)) - math.log2(scale)


def _ratio_log2(diff: int, ref: int) -> float:
    if diff == 0:
        return -math.inf
    return math.log2(abs(diff)) - math.log2(abs(ref))


def recip_check(a, r) -> float:
    """log2 |a r - 1|."""
    am, ak = parts(a)
    rm, rk = parts(r)
    s = ak + rk
    p = am * rm
    return _ratio_log2(p - (1 << -s), 1 << -s) if s < 0 else _ratio_log2(p * (1 << s) - 1, 1)


def div_check(b, a, q) -> float:
    """log2 |q a / b - 1| (b, a, q as MPFloats)."""
    return log2_rel_err_product([q, a], b)


def log2_rel_err_product(factors, target) -> float:
    """log2 |prod(factors) / target - 1|."""
    m, k = 1, 0
    for f in factors:
        fm, fk = parts(f)
        m *= fm
        k += fk
    tm, tk = parts(target)
    s = k - tk
    if s >= 0:
        return _ratio_log2(m * (1 << s) - tm, tm)
    return _ratio_log2(m - tm * (1 << -s), tm * (1 << -s))


def sqrt_check(a, r) -> float:
    """log2 |r^2 / a - 1|."""
    return log2_rel_err_product([r, r], a)


def inv_sqrt_check(a, r) -> float:
    """log2 |r^2 a - 1|."""
    am, ak = parts(a)
    rm, rk = parts(r)
    s = ak + 2 * rk
    p = am * rm * rm
    return _ratio_log2(p - (1 << -s), 1 << -s) if s < 0 else _ratio_log2(p * (1 << s) - 1, 1)


def long_division(num: int, den: int, bits: int) -> int:
    """floor(num * 2^bits / den) by schoolbook binary long division."""
    q, r = 0, 0
    total = num << bits
    for i in range(total.bit_length() - 1, -1, -1):
        r = (r << 1) | ((total >> i) & 1)
        q <<= 1
        if r >= den:
            r -= den
            q |= 1
    return q


def isqrt_scaled(a: int, bits: int) -> int:
    """floor(sqrt(a) * 2^bits)."""
    return math.isqrt(a << (2 * bits))


def _arctan_inv(x: int, scale: int) -> int:
    """arctan(1/x) * scale, truncated, by the alternating series."""
    total, term, k, x2 = 0, scale // x, 0, x * x
    while term:
        total += term // (2 * k + 1) if k % 2 == 0 else -(term // (2 * k + 1))
        term //= x2
        k += 1
    return total


def machin_pi_digits(d: int) -> str:
    """'3' followed by the first d decimals of pi (Machin's formula)."""
    guard = 10
    scale = 10 ** (d + guard)
    p = 16 * _arctan_inv(5, scale) - 4 * _arctan_inv(239, scale)
    return str(p // 10 ** guard)


def e_scaled(bits: int) -> int:
    """floor(e * 2^bits) - small, from sum 1/k!."""
    scale = 1 << (bits + 16)
    total, term, k = 0, scale, 0
    while term:
        total += term
        k += 1
        term //= k
    return total >> 16


def tangent_numbers(count: int) -> list[Fraction]:
    """Taylor coefficients t_0..t_{count-1} of tan x (Bernoulli-number form)."""
    # Bernoulli numbers by the Akiyama-Tanigawa algorithm
    def bernoulli(m):
        a = [Fraction(0)] * (m + 1)
        for i in range(m + 1):
            a[i] = Fraction(1, i + 1)
            for j in range(i, 0, -1):
                a[j - 1] = j * (a[j - 1] - a[j])
        return a[0]

    out = []
    for j in range(count):
        if j % 2 == 0:
            out.append(Fraction(0))
            continue
        n = (j + 1) // 2
        b = bernoulli(2 * n)
        out.append((-1) ** (n - 1) * 2 ** (2 * n) * (2 ** (2 * n) - 1) * b / math.factorial(2 * n))
    return out


def elliptic_quadrature(phi_value, digits: int = 45):
    """K and E at modular angle phi by tanh-sinh quadrature (mpmath)."""
    import mpmath
    with mpmath.workdps(digits + 15):
        k2 = mpmath.sin(phi_value) ** 2
        K = mpmath.quad(lambda t: 1 / mpmath.sqrt(1 - k2 * mpmath.sin(t) ** 2), [0, mpmath.pi / 2])
        E = mpmath.quad(lambda t: mpmath.sqrt(1 - k2 * mpmath.sin(t) ** 2), [0, mpmath.pi / 2])
        return +K, +E
