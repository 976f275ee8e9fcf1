"""pi, log and exp from the arithmetic-geometric mean.

The AGM converges quadratically, so pi (Gauss-Legendre) and log (through
the complete elliptic integral K for a tiny modulus) take O(log n)
square roots and multiplications; exp then follows by Newton's method on
log.  The three reference tables are rebuilt and checked against their
printed values.
"""

from mpbrent import bench, core
from mpbrent.core import CostMeter
from mpbrent.elementary import agm, compute_pi, mp_exp, mp_log

for tid, build in bench.TABLES.items():
    res = build()
    print(f"Table {tid}: {'ok' if res.ok else res.failures}  ({res.seconds * 1000:.0f} ms)")
    for row in res.rows[:4]:
        print("   ", "  ".join(row))

n = 3500
print("pi to 60 places:", core.to_fixed(compute_pi(n), 60, "down", places=True))

tr = agm(core.one(64), core.parse("4e-6", 64), 64)
print("agm(1, 4e-6) iterations:", len(tr.a_seq) - 1)

n = 1024
x = core.parse("1e6", n)
L = mp_log(x, n)
print("log(1e6)       :", core.to_fixed(L, 30, "nearest"))
print("exp(log(1e6))  :", core.to_fixed(mp_exp(L, n), 20, "nearest"))

# Cost grows like log n multiplications.
for k in (12, 14, 16):
    n = 1 << k
    with CostMeter(backend="ntt") as m:
        compute_pi(n)
    print(f"pi at 2^{k}: {m.ratio('pi', n):6.1f} M(n)")
