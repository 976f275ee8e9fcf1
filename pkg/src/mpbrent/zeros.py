"""Variable-precision zero finding.

The point of these methods is that an iterate which is only accurate to
s bits does not need f evaluated to n bits.  Each solver plans the
accuracy of its iterates backward from n (dividing by the order of
convergence at each step, plus a few guard bits), then asks the oracle
for exactly the accuracy each evaluation needs:

    discrete Newton   two evaluations per stage at n, n/2, n/4, ...
    secant            n, 2n rho^-2, 2n rho^-3, ...           rho = 1.618...
    inverse quadratic n, (1 - s + s^2) n, 3 s^3 n, 3 s^4 n, ... s = 1/1.839...

If evaluating f with absolute error 2^-m costs m^alpha, the total cost
divided by n^alpha tends to the asymptotic constants C_N, C_S, C_Q
computed by :func:`asymptotic_constant`.

All solvers start with a cheap 64-bit phase to get into the region of
fast convergence; its cost is charged but is negligible for large n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import basic, core
from .core import MPFloat, add, mul, sub
from .errors import CapabilityError, ConvergenceError, DegenerateSecantError, DomainError

BOOT_BITS = 64
# The bootstrap hands over once its step drops below 2^-BOOT_STOP, while
# the iterates still form a convergence chain (accuracies growing by the
# order each step); points clustered at the 64-bit limit would upset the
# interpolation step's sensitivity to its older points.
BOOT_STOP = 24
BOOT_ACCURACY = 36    # accuracy credited to the bootstrap's final iterate
GUARD = 8
EXTRA = 16            # working-precision slack for the combinatory arithmetic
NOISE_GUARD = 8       # extra bits on every interpolation point's f-value

PHI = (1 + math.sqrt(5)) / 2


class FunctionOracle:
    """f(x) to a requested absolute accuracy, with a cost model.

    ``f(x, m)`` must return an MPFloat within 2^-m of f(x).  Each call to
    :meth:`eval` charges m**alpha cost units.  ``derivatives[k-1](x, m)``
    gives the k-th derivative with the same contract; derivative calls
    are counted separately and not charged to ``cost``.
    """

    def __init__(self, f: Callable[[MPFloat, int], MPFloat], alpha: float = 1,
                 derivatives: Sequence[Callable[[MPFloat, int], MPFloat]] = ()):
        if alpha < 1:
            raise DomainError("cost exponent alpha must be >= 1")
        self.f = f
        self.alpha = int(alpha) if float(alpha).is_integer() else alpha
        self.derivatives = tuple(derivatives)
        self.cost = 0
        self.calls = 0
        self.derivative_calls = 0

    def charge(self, m: int):
        return m ** self.alpha

    def eval(self, x: MPFloat, m: int) -> MPFloat:
        self.cost += self.charge(m)
        self.calls += 1
        return self.f(x, m)

    def derivative(self, k: int, x: MPFloat, m: int) -> MPFloat:
        if k > len(self.derivatives):
            raise CapabilityError(f"derivative of order {k} not supplied")
        self.derivative_calls += 1
        return self.derivatives[k - 1](x, m)


@dataclass
class SolverReport:
    root: MPFloat
    eval_log: list = field(default_factory=list)   # (iteration, m)
    total_cost: float = 0
    converged: bool = False
    method: str = ""
    notes: list = field(default_factory=list)

    def trace_lines(self, alpha: float = 1) -> list[str]:
        """'iteration exponent cost' lines for the bench trace."""
        a = int(alpha) if float(alpha).is_integer() else alpha
        return [f"{it} {m} {m ** a}" for it, m in self.eval_log]


class _Run:
    """Book-keeping shared by the solvers: logged, shifted evaluations."""

    def __init__(self, oracle: FunctionOracle, n: int, method: str):
        self.oracle = oracle
        self.n = n
        self.method = method
        self.log: list[tuple[int, int]] = []
        self.iteration = 0
        self.shift = 0          # -(exponent of x) - (exponent of f')
        self.cap = max(8, 4 * math.ceil(math.log2(max(n, 2))))

    def eval(self, x: MPFloat, bits: float) -> MPFloat:
        """f(x) accurate enough to give about ``bits`` relative bits in x."""
        m = max(8, math.ceil(bits) + 4 + self.shift)
        self.log.append((self.iteration, m))
        return self.oracle.eval(x, m)

    def eval_raw(self, x: MPFloat, m: int) -> MPFloat:
        self.log.append((self.iteration, m))
        return self.oracle.eval(x, m)

    def set_scale(self, x: MPFloat, slope: MPFloat | float):
        s = float(slope)
        ex = x.exp if x.sign else 0
        es = math.floor(math.log2(abs(s))) + 1 if s else 0
        self.shift = -ex - es

    def tick(self):
        self.iteration += 1
        if self.iteration > self.cap:
            raise ConvergenceError(
                f"{self.method}: no convergence after {self.cap} iterations", self.log)

    def report(self, root: MPFloat, converged: bool) -> SolverReport:
        a = self.oracle.alpha
        return SolverReport(core.round_to(root, self.n), list(self.log),
                            sum(m ** a for _, m in self.log), converged, self.method)


def _rel_step(x_new: MPFloat, x_old: MPFloat) -> float:
    """log2 |x_new - x_old| / |x_new| (-inf if equal)."""
    d = sub(x_new, x_old, 64)
    if d.sign == 0:
        return -math.inf
    if x_new.sign == 0:
        return math.inf
    return d.log2_abs() - x_new.log2_abs()


def plan_targets(n: int, order: float, floor: int = BOOT_ACCURACY,
                 guard: int = GUARD) -> list[int]:
    """Accuracies the successive steps aim for, ascending and ending at n.

    Working backward, each step's target is ceil(next / order) + guard;
    targets at or below ``floor`` are covered by the bootstrap.
    """
    out = [n]
    while True:
        nxt = math.ceil(out[-1] / order) + guard
        if nxt <= floor or nxt >= out[-1]:
            break
        out.append(nxt)
    return out[::-1]


def _exponents(targets: Sequence[int], accs: Sequence[float], r: int) -> list[float]:
    """Accuracy each point's f-value must have.

    Step k uses points k .. k+r-1 (newest last) and produces point k+r
    with accuracy targets[k].  Perturbing f at a point in role j (0 =
    newest) by delta moves the interpolated zero by about delta times
    e_newest ... e_(j-1) / e_own^j, so that point needs absolute error

        2^-(T - sum of newer accuracies + j * own accuracy).

    On an ideal chain this gives T, (1 - s + s^2) T, 3 s^3 T for inverse
    quadratic interpolation and T, 2 T / rho^2 for the secant method.
    ``accs`` holds the accuracies of the r starting points; later points
    are credited with their planned targets.  Each requirement gets
    NOISE_GUARD extra bits: the factors above hold only up to constants,
    and a point landing a few bits short inflates the others' factors.
    """
    acc = list(accs) + list(targets)
    npoints = r + len(targets) - 1
    need = [0.0] * npoints
    for k, t in enumerate(targets):
        newest = k + r - 1
        for j in range(k, newest + 1):
            role = newest - j
            req = t - sum(acc[j + 1:newest + 1]) + role * acc[j]
            need[j] = max(need[j], req)
    return [max(8.0, v) + NOISE_GUARD for v in need]


# -- single steps ------------------------------------------------------------

def _secant_step(xa, fa, xb, fb, p) -> MPFloat:
    df = sub(fb, fa, p)
    if df.sign == 0:
        raise DegenerateSecantError("f(x_i) = f(x_{i-1}) at working precision")
    dx = sub(xb, xa, p)
    return sub(xb, mul(fb, basic.div(dx, df, p), p), p)


def _iqi_step(pts, vals, p, note) -> MPFloat:
    (x0, x1, x2), (f0, f1, f2) = pts, vals
    d21 = sub(f2, f1, p)
    d10 = sub(f1, f0, p)
    d20 = sub(f2, f0, p)
    if d21.sign == 0 or d10.sign == 0 or d20.sign == 0:
        note("degenerate interpolation data; secant step")
        if d21.sign:
            return _secant_step(x1, f1, x2, f2, p)
        return _secant_step(x0, f0, x2, f2, p)
    q1 = basic.div(sub(x2, x1, p), d21, p)
    q0 = basic.div(sub(x1, x0, p), d10, p)
    q2 = basic.div(sub(q1, q0, p), d20, p)
    # inverse Newton form: x = x2 - f2*q1 + f2*f1*q2
    return add(sub(x2, mul(f2, q1, p), p), mul(mul(f2, f1, p), q2, p), p)


def _boot_eval(run: _Run, x: MPFloat) -> MPFloat:
    ex = x.exp if x.sign else 0
    return run.eval_raw(x, max(8, BOOT_BITS + 8 - ex))


def _bootstrap(run: _Run, pts: list[MPFloat], step, keep: int):
    """Iterate ``step`` at 64 bits until the step is below 2^-BOOT_STOP relative.

    Returns (points, values, accuracies, exact_root) for the last ``keep``
    iterates.  Accuracies are estimated from the step sizes; the newest
    point is credited with the sum of its predecessors' (the convergence
    law of the interpolation methods), capped by the 64-bit arithmetic.
    """
    pts = [core.round_to(x, BOOT_BITS) for x in pts]
    vals = [_boot_eval(run, x) for x in pts]
    for x, v in zip(pts, vals):
        if v.sign == 0:
            return pts, vals, [], x
    while True:
        run.tick()
        x = step(pts[-keep:], vals[-keep:], BOOT_BITS)
        v = _boot_eval(run, x)
        pts.append(x)
        vals.append(v)
        if v.sign == 0:
            return pts, vals, [], x
        if _rel_step(x, pts[-2]) <= -BOOT_STOP:
            break
    tail = pts[-keep - 1:]
    accs = [max(1.0, -_rel_step(tail[i + 1], tail[i])) for i in range(1, keep)]
    accs.append(min(BOOT_BITS - 6, sum(accs)))
    return pts[-keep:], vals[-keep:], accs, None


def _confirm_root(run: _Run, x: MPFloat) -> bool:
    """Is f exactly zero at x, even at full accuracy?"""
    return run.eval(x, run.n).sign == 0


def _interpolating_solver(run: _Run, pts, vals, accs, order: float, step):
    """Shared ascent for the secant and inverse-interpolation methods."""
    r = len(accs)
    n = run.n
    x_last, x_prev = pts[-1], pts[-2]
    slope = basic.div(sub(vals[-1], vals[-2], 64), sub(x_last, x_prev, 64), 64) \
        if sub(x_last, x_prev, 64).sign else core.one(64)
    if slope.sign == 0:
        raise DegenerateSecantError("flat function at the bootstrap iterates")
    run.set_scale(x_last, slope)

    targets = plan_targets(n, order, floor=math.floor(accs[-1]))
    npoints = r + len(targets) - 1
    need = _exponents(targets, accs, r)
    # the bootstrap points are re-evaluated at the accuracy the ascent needs
    seq = list(pts[-r:])
    fvals = []
    for j, x in enumerate(seq):
        fvals.append(run.eval(x, need[j]))
    for k, t in enumerate(targets):
        run.tick()
        p = t + EXTRA
        x_new = step(seq[k:k + r], fvals[k:k + r], p)
        seq.append(x_new)
        j = k + r
        if j < npoints:
            fvals.append(run.eval(x_new, need[j]))
            if fvals[-1].sign == 0 and _confirm_root(run, x_new):
                return run.report(x_new, True)
    root = seq[-1]
    prev_target = targets[-2] if len(targets) > 1 else accs[-1]
    if _rel_step(root, seq[-2]) <= -(prev_target - 24):
        return run.report(root, True)
    # Behind schedule: continue at full accuracy until the steps vanish.
    seq = seq[-r:]
    fvals = [run.eval(x, n) for x in seq]
    while True:
        run.tick()
        x_new = step(seq, fvals, n + EXTRA)
        small = _rel_step(x_new, seq[-1]) <= -(n - 4)
        seq = seq[1:] + [x_new]
        if small:
            return run.report(x_new, True)
        fvals = fvals[1:] + [run.eval(x_new, n)]


def secant(f: FunctionOracle, x0: MPFloat, x1: MPFloat, n: int) -> SolverReport:
    """Variable-precision secant method."""
    if core.cmp(x0, x1) == 0:
        raise DomainError("secant needs two distinct starting points")
    run = _Run(f, n, "secant")
    step = lambda P, V, p: _secant_step(P[0], V[0], P[1], V[1], p)
    pts, vals, accs, hit = _bootstrap(run, [x0, x1], step, 2)
    if hit is not None and _confirm_root(run, hit):
        return run.report(hit, True)
    if hit is not None:
        raise ConvergenceError("f vanished at 64 bits but not at full accuracy", run.log)
    return _interpolating_solver(run, pts, vals, accs, PHI, step)


def inverse_quadratic(f: FunctionOracle, x0: MPFloat, x1: MPFloat, x2: MPFloat,
                      n: int) -> SolverReport:
    """Variable-precision inverse quadratic interpolation."""
    run = _Run(f, n, "inverse_quadratic")
    notes = []
    step = lambda P, V, p: _iqi_step(P, V, p, notes.append)
    pts, vals, accs, hit = _bootstrap(run, [x0, x1, x2], step, 3)
    if hit is not None and _confirm_root(run, hit):
        rep = run.report(hit, True)
        rep.notes = notes
        return rep
    if hit is not None:
        raise ConvergenceError("f vanished at 64 bits but not at full accuracy", run.log)
    rep = _interpolating_solver(run, pts, vals, accs, _rho_q(), step)
    rep.notes = notes
    return rep


def _newton_diff_step(run: _Run, x: MPFloat, fx: MPFloat, bits: float, p: int):
    """One discrete Newton step with h = f(x)."""
    if fx.sign == 0:
        h = core.ldexp(core.one(p), (x.exp if x.sign else 0) - math.ceil(bits / 2))
    else:
        h = core.round_to(fx, p)
    xh = add(x, h, p)
    h = sub(xh, x, p)
    fh = run.eval(xh, bits) if bits else _boot_eval(run, xh)
    g = basic.div(sub(fh, fx, p), h, p)
    if g.sign == 0:
        raise DegenerateSecantError("difference quotient vanished")
    return sub(x, basic.div(fx, g, p), p), g


def discrete_newton(f: FunctionOracle, x0: MPFloat, n: int) -> SolverReport:
    """Newton's method with g_i = (f(x+h) - f(x))/h, h = f(x)."""
    run = _Run(f, n, "discrete_newton")
    x = core.round_to(x0, BOOT_BITS)
    fx = _boot_eval(run, x)
    if fx.sign == 0 and _confirm_root(run, x):
        return run.report(x, True)
    g = core.one(64)
    while True:
        run.tick()
        x_new, g = _newton_diff_step(run, x, fx, 0, BOOT_BITS)
        done = _rel_step(x_new, x) <= -BOOT_STOP
        x = x_new
        fx = _boot_eval(run, x)
        if fx.sign == 0:
            if _confirm_root(run, x):
                return run.report(x, True)
        if done:
            break
    run.set_scale(x, g)
    targets = plan_targets(n, 2)
    prev = x
    for t in targets:
        run.tick()
        fx = run.eval(x, t)
        if fx.sign == 0 and _confirm_root(run, x):
            return run.report(x, True)
        prev = x
        x, g = _newton_diff_step(run, x, fx, t, t + EXTRA)
    last = targets[-2] if len(targets) > 1 else BOOT_ACCURACY
    if _rel_step(x, prev) <= -(last - 24):
        return run.report(x, True)
    while True:
        run.tick()
        fx = run.eval(x, n)
        prev = x
        x, g = _newton_diff_step(run, x, fx, n, n + EXTRA)
        if _rel_step(x, prev) <= -(n - 4):
            return run.report(x, True)


def _taylor_step(run: _Run, x: MPFloat, fx: MPFloat, k: int, bits: float,
                 acc: float, p: int) -> MPFloat:
    """Zero of the degree-k Taylor polynomial of f about x, added to x.

    Derivative j only needs absolute accuracy 2^-(bits - j*acc) since it
    multiplies delta^j with delta ~ 2^-acc.
    """
    coef = [fx]
    fact = 1
    for j in range(1, k + 1):
        fact *= j
        m = max(8, math.ceil(bits - (j - 1) * acc) + 4 + run.shift)
        d = run.oracle.derivative(j, x, m)
        coef.append(core.div_int(d, fact, p))
    if coef[1].sign == 0:
        raise ConvergenceError("zero derivative in Taylor step", run.log)
    # Newton on the polynomial, from the linear estimate.
    delta = -basic.div(fx, coef[1], p)
    for _ in range(2 * k + 4):
        val = coef[k]
        dval = core.zero(p)
        for c in reversed(coef[:k]):
            dval = add(mul(dval, delta, p), val, p)
            val = add(mul(val, delta, p), c, p)
        if dval.sign == 0:
            break
        corr = basic.div(val, dval, p)
        delta = sub(delta, corr, p)
        if corr.sign == 0 or delta.sign == 0 or \
                corr.log2_abs() - delta.log2_abs() < -(p - 4):
            break
    return add(x, delta, p)


def solve_with_derivatives(f: FunctionOracle, x0: MPFloat, n: int, k: int = 4) -> SolverReport:
    """Direct Taylor-series method of order k+1.

    With f evaluated at accuracies n, n/(k+1), n/(k+1)^2, ... the cost is
    about (1 + 1/k) w(n).
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if len(f.derivatives) < k:
        raise CapabilityError(f"solve_with_derivatives(k={k}) needs {k} derivative callables")
    run = _Run(f, n, "taylor")
    x = core.round_to(x0, BOOT_BITS)
    while True:
        fx = _boot_eval(run, x)
        if fx.sign == 0 and _confirm_root(run, x):
            return run.report(x, True)
        run.tick()
        ex = x.exp if x.sign else 0
        d1 = f.derivative(1, x, BOOT_BITS + 8 - ex)
        if d1.sign == 0:
            raise ConvergenceError("zero derivative during bootstrap", run.log)
        x_new = sub(x, basic.div(fx, d1, BOOT_BITS), BOOT_BITS)
        done = _rel_step(x_new, x) <= -BOOT_STOP
        x = x_new
        if done:
            break
    run.set_scale(x, d1)
    targets = plan_targets(n, k + 1, floor=BOOT_ACCURACY)
    acc = BOOT_ACCURACY
    prev = x
    for t in targets:
        run.tick()
        fx = run.eval(x, t)
        if fx.sign == 0 and _confirm_root(run, x):
            return run.report(x, True)
        prev = x
        x = _taylor_step(run, x, fx, k, t, acc, t + EXTRA)
        acc = t
    last = targets[-2] if len(targets) > 1 else BOOT_ACCURACY
    if _rel_step(x, prev) <= -(last - 24):
        return run.report(x, True)
    while True:
        run.tick()
        fx = run.eval(x, n)
        prev = x
        x = _taylor_step(run, x, fx, k, n, acc, n + EXTRA)
        if _rel_step(x, prev) <= -(n - 4):
            return run.report(x, True)


# -- asymptotic constants -------------------------------------------------------

def _poly_root(coeffs, lo, hi) -> float:
    """The real root of a polynomial in (lo, hi), polished by Newton."""
    roots = np.roots(coeffs)
    r = next(float(z.real) for z in roots if abs(z.imag) < 1e-12 and lo < z.real < hi)
    p = np.poly1d(coeffs)
    dp = p.deriv()
    for _ in range(3):
        r -= p(r) / dp(r)
    return r


def _rho_q() -> float:
    """Order of inverse quadratic interpolation: rho^3 = rho^2 + rho + 1."""
    return _poly_root([1, -1, -1, -1], 1.5, 2.0)


def _mu() -> float:
    """mu^4 + mu^3 + mu^2 + mu = 1; 1/mu is the inverse-cubic order."""
    return _poly_root([1, 1, 1, 1, -1], 0.4, 0.6)


def asymptotic_constant(method: str, alpha: float) -> float:
    """C_N, C_S, C_Q or C_C at cost exponent alpha (method 'N', 'S', 'Q', 'C')."""
    if alpha < 1:
        raise DomainError("asymptotic constants need alpha >= 1")
    m = method.upper()[:1]
    if m == "N":
        return 2 / (1 - 2.0 ** -alpha)
    if m == "S":
        r = PHI
        return 1 + (2 * r ** -2) ** alpha / (1 - r ** -alpha)
    if m == "Q":
        s = 1 / _rho_q()
        return 1 + (1 - s + s * s) ** alpha + (3 * s ** 3) ** alpha / (1 - s ** alpha)
    if m == "C":
        u = _mu()
        return (1 + (1 - u + u * u) ** alpha + (1 - u - u * u + 2 * u ** 3) ** alpha
                + (4 * u ** 4) ** alpha / (1 - u ** alpha))
    raise ValueError(f"unknown method {method!r}")


def cubic_quadratic_crossover(lo: float = 1.0, hi: float = 16.0, tol: float = 1e-10) -> float:
    """alpha where inverse cubic interpolation starts to beat quadratic."""
    g = lambda a: asymptotic_constant("C", a) - asymptotic_constant("Q", a)
    if g(lo) <= 0 or g(hi) >= 0:
        raise ValueError("no sign change in the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
