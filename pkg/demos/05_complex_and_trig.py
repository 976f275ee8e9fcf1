"""Complex arithmetic, the complex AGM and the trigonometric functions.

A complex product needs three real multiplications and a square two.
The complex logarithm comes from the same AGM construction as the real
one, and sin, cos and artan are read off the imaginary parts of clog and
cexp.
"""

from mpbrent import core
from mpbrent.core import CostMeter
from mpbrent.elementary import pi
from mpbrent.mpcomplex import MPComplex, cexp, clog, cmul, csqrt, csquare, mpc, to_string, trig

n = 256
z, w = mpc(3, 4, n), mpc(1, -2, n)
print("z * w       :", to_string(cmul(z, w, n), 20))
print("sqrt(-4)    :", to_string(csqrt(mpc(-4, 0, n), n), 20))
print("log(2+i)    :", to_string(clog(mpc(2, 1, n), n), 20))
# the real part is pi/2 rounded to n bits, seen through cos
print("exp(i pi/2) :", to_string(cexp(MPComplex(core.zero(n), core.ldexp(pi(n), -1)), n), 20))

for label, fn in (("cmul", lambda: cmul(z, w, n)), ("csquare", lambda: csquare(z, n))):
    with CostMeter() as m:
        fn()
    print(f"{label}: {sum(m.mults_by_precision.values())} real multiplications")

x = core.parse("0.5", n)
for kind in ("sin", "cos", "artan"):
    print(f"{kind}(0.5) = {core.to_fixed(trig(kind, x, n), 40, 'nearest')}")
