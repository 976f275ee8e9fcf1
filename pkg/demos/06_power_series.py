"""Truncated power series: products, reciprocals, log, exp and powers.

Series multiplication uses an FFT (coefficients packed into one big
integer product) above a small threshold, so reciprocal, log and exp via
Newton's method cost a small constant times one series product.  Powers
P^m go through exp(m log P) and their cost does not depend on m.
Coefficients can be floats, exact rationals or multiple-precision values.
"""

from fractions import Fraction

from mpbrent import bench, series
from mpbrent.series import (OpCounter, ps_atan, ps_exp, ps_log, ps_mul, ps_pow, ps_recip,
                            variable)

R = series.RATIONAL
x = variable(8, R)
print("atan(x)           :", [str(c) for c in ps_atan(x).to_list()])
print("exp(x)            :", [str(c) for c in ps_exp(x).to_list()])
print("(1+x)^10          :", [int(c) for c in ps_pow(series.series([1, 1], 11, R), 10).to_list()])
print("1/(1-x)           :", [int(c) for c in ps_recip(series.series([1, -1], 8, R)).to_list()])

# The Newton iteration for exp doubles the number of exact terms.
p = [Fraction(0), Fraction(1), Fraction(-1, 2), Fraction(1, 3)] + [Fraction(0)] * 12
trace = []
ps_exp(series.series(p, field=R), trace=trace)
print("exp Newton steps  :", len(trace))

# Operation counts relative to one FFT product.
n = 4096
for rec in bench._series_records(n, "ntt"):
    print(f"{rec.op:9s} {rec.ratio_to_mul:5.2f} x ps_mul")

counts = []
for m in (3, 3 << 20):
    c = OpCounter()
    ps_pow(series.series([1.0, 1.0 / m], 1024), m, method="fft", counter=c)
    counts.append(c.count)
print("ps_pow ops, m = 3 vs 3*2^20:", counts)

# Text format used by the command line tool.
print(series.dumps(ps_log(series.series([1, Fraction(1, 2)], 4, R))), end="")
