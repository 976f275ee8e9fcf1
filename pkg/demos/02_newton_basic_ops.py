"""Reciprocal, division and square roots by Newton's method.

Each Newton step doubles the number of correct bits, so the iteration is
run at a precision that doubles too: only the final step costs a full
precision-n multiplication, and the whole reciprocal costs about
2 + 1/2 + 1/4 + ... = 3 M(n) (plus a few extra M(n) for division and
square root).  The schedule of working precisions is explicit.
"""

import math

from mpbrent import core
from mpbrent.basic import div, inv_sqrt, newton_schedule, recip, sqrt, sqrt_direct
from mpbrent.core import CostMeter, mpf

print("schedule for 1024 bits:", list(newton_schedule(1024, 2)))

n = 4096
three = mpf(3, n)
r = recip(three, n)
err = abs(3 * r.to_fraction() - 1)
print("1/3 correct bits       :", math.floor(math.log2(err.denominator) - math.log2(err.numerator)))

two = mpf(2, n)
s = sqrt(two, n)
print("sqrt(2) leading digits :", core.to_decimal(s, 40))
print("isqrt agrees           :", s.man >> 8 == math.isqrt(2 << (2 * n - 2)) >> 8)

# Costs at 2^18 bits.  The ratios approach 3, 4, 4.5 and 5.5 as n grows;
# NTT transform lengths round up to powers of two, so the square roots
# sit a little above their constants here.
n = 1 << 18
a = core.from_man_exp(1, (1 << n) - 12345, 0, n)
for label, fn in (("recip", lambda: recip(a, n)), ("div", lambda: div(two, a, n)),
                  ("inv_sqrt", lambda: inv_sqrt(a, n)), ("sqrt", lambda: sqrt(a, n)),
                  ("sqrt_direct", lambda: sqrt_direct(a, n, form=2))):
    with CostMeter(backend="ntt") as m:
        fn()
    print(f"{label:12s} {m.ratio(label, n):6.3f} M(n)")
