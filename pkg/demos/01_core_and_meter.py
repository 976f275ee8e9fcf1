"""Precision-n floats and the cost meter.

An MPFloat holds sign, an n-bit mantissa and a binary exponent.  Every
operation takes the target precision explicitly and truncates toward zero.
Work is measured in units of M(n), the cost of one n-bit multiplication,
so that ratios like "a reciprocal costs 3 multiplications" can be read off
directly.
"""

from mpbrent import core
from mpbrent.basic import recip
from mpbrent.core import CostMeter, meter_report, mpf, mul

# Construction and exact hex form.  Decimal input is truncated to n bits.
x = mpf("0.1", 60)
print("0.1 at 60 bits   :", core.to_hex(x))
print("back to decimal  :", core.to_decimal(x, 20))
print("truncation shows :", core.to_decimal(mul(x, mpf(10, 60), 60), 20))

# The three multiplication backends return bit-identical products.
n = 5000
a = core.parse("3.14159", n)
b = core.parse("2.71828", n)
prods = {be: mul(a, b, n, backend=be) for be in core.BACKENDS}
print("backends agree   :", len({core.to_hex(p) for p in prods.values()}) == 1)

# Metering: one multiplication is 1.0 M(n); a reciprocal is close to 3.
n = 1 << 16
with CostMeter(backend="ntt") as m:
    mul(a, b, n)
    recip(a, n)
for row in meter_report(m):
    print(f"{row.label:8s} n={row.precision:6d}  {row.ratio:6.3f} M(n)")
