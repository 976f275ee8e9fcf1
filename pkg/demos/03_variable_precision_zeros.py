"""Zero finders that raise the working precision as they converge.

When evaluating f to m bits costs about m^alpha, a solver that only asks
for as many bits as the current iterate deserves pays a small constant
times one full-precision evaluation.  The constant depends on the method;
the closed forms are available from asymptotic_constant.
"""

from mpbrent import zeros
from mpbrent.core import mpf, mul, sub
from mpbrent.zeros import (FunctionOracle, asymptotic_constant, discrete_newton,
                           inverse_quadratic, secant)


def f(x, m):
    """x^2 - 2, evaluated to about m bits."""
    p = max(8, m + 2 * max(x.exp, 0) + 4)
    return sub(mul(x, x, p), mpf(2, 8), p)


n = 1 << 14
for name, run in (("discrete Newton", lambda o: discrete_newton(o, mpf(1.5), n)),
                  ("secant", lambda o: secant(o, mpf(1), mpf(2), n)),
                  ("inverse quadratic", lambda o: inverse_quadratic(o, mpf(1), mpf(2), mpf(1.5), n))):
    rep = run(FunctionOracle(f))
    print(f"{name:18s} cost {rep.total_cost / n:5.3f} n   precisions {[m for _, m in rep.eval_log][-5:]}")

print()
print("alpha  C_N     C_S     C_Q     C_C")
for a in (1, 2, 4, 8):
    print(f"{a:5d} " + " ".join(f"{asymptotic_constant(k, a):7.4f}" for k in "NSQC"))

# The cubic method overtakes inverse quadratic interpolation for steep
# enough cost growth; with these formulas the sign change is near 5.57.
print("C_C = C_Q at alpha =", round(zeros.cubic_quadratic_crossover(), 4))
