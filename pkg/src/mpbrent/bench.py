"""Reconstructions of the three published tables, their golden values,
and the cost-ratio benchmark suites behind ``mpbrent table`` and
``mpbrent bench``.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass
from decimal import Decimal

import numpy as np

from . import core, series
from .basic import div, inv_sqrt, recip, sqrt, sqrt_direct
from .core import CostMeter, MPFloat
from .elementary import agm, compute_pi, ln2, mp_exp, mp_log, pi, working_precision
from .mpcomplex import (MPComplex, cagm, cdiv, cldexp, clog, cmul, cone, crecip,
                        csqrt, csquare, mpc)

# -- golden values --------------------------------------------------------------

# Convergence of the Gauss-Legendre method: errors of A^2/T and (A+B)^2/(4T)
# after iterations 0..9.
TABLE_8_1 = (
    ("8.6e-1", "2.3e-1"),
    ("4.6e-2", "1.0e-3"),
    ("8.8e-5", "7.4e-9"),
    ("3.1e-10", "1.8e-19"),
    ("3.7e-21", "5.5e-41"),
    ("5.5e-43", "2.4e-84"),
    ("1.2e-86", "2.3e-171"),
    ("5.8e-174", "1.1e-345"),
    ("1.3e-348", "1.1e-694"),
    ("6.9e-698", "6.1e-1393"),
)

# agm(1, 4e-6): log(10^6) = pi / (2 a_7)
TABLE_9_1 = (
    ("1.000000000e0", "4.000000000e-6"),
    ("5.000020000e-1", "2.000000000e-3"),
    ("2.510010000e-1", "3.162283985e-2"),
    ("1.413119199e-1", "8.909188753e-2"),
    ("1.152019037e-1", "1.122040359e-1"),
    ("1.137029698e-1", "1.136930893e-1"),
    ("1.136980295e-1", "1.136980294e-1"),
    ("1.136980295e-1", "1.136980295e-1"),
)
TABLE_9_1_RESULT = "13.81551056"

# agm(1, 4/z), z = 10^6 (2 + i): log z = pi / (2 a_7)
TABLE_12_1 = (
    (("1.0000000e0", "0.0000000"), ("1.6000000e-6", "-8.0000000e-7")),
    (("5.0000080e-1", "-4.0000000e-7"), ("1.3017017e-3", "-3.0729008e-4")),
    (("2.5065125e-1", "-1.5384504e-4"), ("2.5686505e-2", "-2.9907884e-3")),
    (("1.3816888e-1", "-1.5723167e-3"), ("8.0373334e-2", "-4.6881008e-3")),
    (("1.0927111e-1", "-3.1302088e-3"), ("1.0540970e-1", "-3.6719673e-3")),
    (("1.0734040e-1", "-3.4010880e-3"), ("1.0732355e-1", "-3.4064951e-3")),
    (("1.0733198e-1", "-3.4037916e-3"), ("1.0733198e-1", "-3.4037918e-3")),
)
TABLE_12_1_RESULT = ("14.620230", "0.46364761")


@dataclass
class TableResult:
    table: str
    header: tuple
    rows: list                  # tuples of display strings
    failures: list              # human-readable mismatch descriptions
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.failures


def _decimal(x: MPFloat) -> Decimal:
    f = x.to_fraction()
    return Decimal(f.numerator) / Decimal(f.denominator)


def _within_sig(value: MPFloat, golden: str, figures: int) -> bool:
    """|value - golden| <= half a unit in the last printed figure (plus a
    hair for the binary conversion)."""
    from decimal import localcontext
    with localcontext() as ctx:
        ctx.prec = 60
        g = Decimal(golden)
        v = _decimal(value) if value.sign else Decimal(0)
        if g == 0:
            return abs(v) <= Decimal(10) ** -(figures - 1)
        unit = Decimal(10) ** (g.adjusted() - figures + 1)
        return abs(v - g) <= unit / 2 + abs(g) * Decimal(10) ** -17


def _sig(x: MPFloat, figures: int) -> str:
    return core.to_decimal(x, figures, "nearest")


def _exp10(s: str) -> int:
    return int(s.split("e")[1])


def table_8_1(n: int = 4800) -> TableResult:
    """Errors of A^2/T and (A+B)^2/(4T) per Gauss-Legendre iteration."""
    t0 = time.perf_counter()
    trace = []
    compute_pi(n, trace=trace)
    ref = pi(n + 256)
    rows, failures = [], []
    for row in trace[:len(TABLE_8_1)]:
        cells = [str(row.iteration)]
        for col, v in enumerate((row.a2_over_t, row.ab2_over_4t)):
            err = abs(core.sub(v, ref, n + 256))
            golden = TABLE_8_1[row.iteration][col]
            if err.sign == 0 or err.log2_abs() < -working_precision(n) + 8:
                cells.append(f"<2^-{working_precision(n) - 8}")
                if _exp10(golden) * math.log2(10) > -working_precision(n) + 16:
                    failures.append(f"row {row.iteration} col {col + 1}: error vanished, expected {golden}")
                continue
            shown = _sig(err, 2)
            cells.append(shown)
            if abs(_exp10(shown) - _exp10(golden)) > 1:
                failures.append(f"row {row.iteration} col {col + 1}: {shown} vs {golden}")
        rows.append(tuple(cells))
    if len(trace) < len(TABLE_8_1):
        failures.append(f"only {len(trace)} iterations recorded")
    return TableResult("8.1", ("iteration", "A^2/T - pi", "pi - (A+B)^2/(4T)"), rows, failures,
                       time.perf_counter() - t0)


def table_9_1(n: int = 64) -> TableResult:
    """agm(1, 4e-6) and log(10^6) = pi / (2 a_7)."""
    t0 = time.perf_counter()
    tr = agm(core.one(n), core.parse("4e-6", n), n)
    rows, failures = [], []
    for i, (a, b) in enumerate(zip(tr.a_seq, tr.b_seq)):
        if i >= len(TABLE_9_1):
            break
        rows.append((str(i), _sig(a, 10), _sig(b, 10)))
        for v, g, name in ((a, TABLE_9_1[i][0], "a"), (b, TABLE_9_1[i][1], "b")):
            if not _within_sig(v, g, 10):
                failures.append(f"{name}_{i}: {_sig(v, 10)} vs {g}")
    if len(tr.a_seq) < len(TABLE_9_1):
        failures.append(f"AGM stopped after {len(tr.a_seq) - 1} iterations")
    a7 = tr.a_seq[min(7, len(tr.a_seq) - 1)]
    L = div(pi(n), core.ldexp(a7, 1), n)
    shown = core.to_fixed(L, 10, "nearest")
    rows.append(("pi/(2a_7)", shown, ""))
    if shown != TABLE_9_1_RESULT:
        failures.append(f"pi/(2a_7) = {shown} vs {TABLE_9_1_RESULT}")
    return TableResult("9.1", ("i", "a_i", "b_i"), rows, failures, time.perf_counter() - t0)


def _csig(z: MPComplex, figures: int) -> str:
    return f"({_sig(z.re, figures)}, {_sig(z.im, figures)})"


def table_12_1(n: int = 64) -> TableResult:
    """Complex AGM for log(10^6 (2 + i))."""
    t0 = time.perf_counter()
    z = mpc(2_000_000, 1_000_000, n)
    b0 = cldexp(crecip(z, n + 16), 2)
    tr = cagm(cone(n), b0, n)
    rows, failures = [], []
    for j, (a, b) in enumerate(zip(tr.a_seq, tr.b_seq)):
        if j >= len(TABLE_12_1):
            break
        rows.append((str(j), _csig(a, 8), _csig(b, 8)))
        for v, g, name in ((a, TABLE_12_1[j][0], "a"), (b, TABLE_12_1[j][1], "b")):
            for part, gp in ((v.re, g[0]), (v.im, g[1])):
                if not _within_sig(part, gp, 8):
                    failures.append(f"{name}_{j}: {_csig(v, 8)} vs ({g[0]}, {g[1]})")
                    break
    L = clog(z, n)
    re = core.to_fixed(L.re, 8, "nearest")
    im = core.to_fixed(L.im, 8, "nearest")
    rows.append(("log z", re, im))
    if (re, im) != TABLE_12_1_RESULT:
        failures.append(f"log z = {re} + {im}i vs {TABLE_12_1_RESULT[0]} + {TABLE_12_1_RESULT[1]}i")
    return TableResult("12.1", ("j", "a_j", "b_j"), rows, failures, time.perf_counter() - t0)


TABLES = {"8.1": table_8_1, "9.1": table_9_1, "12.1": table_12_1}


# -- benchmark suites -----------------------------------------------------------

@dataclass
class BenchRecord:
    op: str
    n_bits: int
    backend: str
    ratio_to_mul: float
    wall_ns: int

    def as_dict(self):
        return asdict(self)


MIN_BITS = 64
SUITES = ("basic", "elem", "series")
DEFAULT_SIZES = {
    "basic": (1 << 12, 1 << 14, 1 << 16, 1 << 18),
    "elem": (1 << 14, 1 << 15, 1 << 16, 1 << 17),
    "series": (256, 1024, 4096),
}


def _random_fraction(rng: random.Random, n: int) -> MPFloat:
    """Uniform-ish in [1/2, 1) with all n bits random."""
    return core.from_man_exp(1, rng.getrandbits(n) | (1 << (n - 1)), 0, n)


def _metered(label, fn, n, backend):
    with CostMeter(backend=backend) as m:
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
    return BenchRecord(label, n, backend, round(m.ratio(label, n), 6), dt)


def _basic_ops(n, rng):
    a, b = _random_fraction(rng, n), _random_fraction(rng, n)
    z = MPComplex(_random_fraction(rng, n), _random_fraction(rng, n))
    w = MPComplex(_random_fraction(rng, n), -_random_fraction(rng, n))
    return [
        ("mul", lambda: core.mul(a, b, n)),
        ("recip", lambda: recip(a, n)),
        ("div", lambda: div(b, a, n)),
        ("inv_sqrt", lambda: inv_sqrt(a, n)),
        ("sqrt", lambda: sqrt(a, n)),
        ("sqrt_direct", lambda: sqrt_direct(a, n, form=2)),
        ("cmul", lambda: cmul(z, w, n)),
        ("csquare", lambda: csquare(z, n)),
        ("cdiv", lambda: cdiv(z, w, n)),
        ("crecip", lambda: crecip(w, n)),
        ("csqrt", lambda: csqrt(w, n)),
    ]


def _elem_ops(n, rng):
    x = core.parse("3.7", n)
    r = core.parse("0.3", n)
    # warm the constant cache outside the meter
    pi(working_precision(n) + 64)
    ln2(working_precision(n) + 64)
    return [
        ("pi", lambda: compute_pi(n)),
        ("log", lambda: mp_log(x, n)),
        ("exp", lambda: mp_exp(r, n)),
    ]


def run_suite(suite: str, sizes=None, backend: str = "ntt") -> list[BenchRecord]:
    """Records sorted by (op, n_bits); deterministic apart from wall_ns."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    sizes = tuple(sizes or DEFAULT_SIZES[suite])
    out = []
    for n in sizes:
        if suite == "series":
            out.extend(_series_records(n, backend))
            continue
        if n < MIN_BITS:
            out.append(BenchRecord(f"skipped:{suite}", n, backend, float("nan"), 0))
            continue
        rng = random.Random(n)
        ops = _basic_ops(n, rng) if suite == "basic" else _elem_ops(n, rng)
        for label, fn in ops:
            out.append(_metered(label, fn, n, backend))
    out.sort(key=lambda r: (r.op, r.n_bits))
    return out


def _series_records(order: int, backend: str) -> list[BenchRecord]:
    """Scalar-operation ratios to ps_mul at the given order (FFT path)."""
    if order < series.FFT_THRESHOLD:
        return [BenchRecord("skipped:series", order, backend, float("nan"), 0)]
    rng = np.random.default_rng(order)
    j = np.arange(2, order + 1)
    unit = series.series(np.concatenate([[1.0], rng.standard_normal(order - 1) / j ** 2]))
    nil = series.series(np.concatenate([[0.0], rng.standard_normal(order - 1) / j ** 2]))
    pw = series.series([1.0, 1.0 / 3.0], order)
    ops = [
        ("ps_mul", lambda c: series.ps_mul(unit, unit, method="fft", counter=c)),
        ("ps_recip", lambda c: series.ps_recip(unit, method="fft", counter=c)),
        ("ps_log", lambda c: series.ps_log(unit, method="fft", counter=c)),
        ("ps_exp", lambda c: series.ps_exp(nil, method="fft", counter=c)),
        ("ps_exp4", lambda c: series.ps_exp(nil, order=4, method="fft", counter=c)),
        ("ps_pow", lambda c: series.ps_pow(pw, 3, method="fft", counter=c)),
        ("ps_atan", lambda c: series.ps_atan(nil, method="fft", counter=c)),
    ]
    counts, out = {}, []
    for label, fn in ops:
        c = series.OpCounter()
        t0 = time.perf_counter_ns()
        fn(c)
        counts[label] = (c.count, time.perf_counter_ns() - t0)
    m = counts["ps_mul"][0]
    for label, (k, dt) in counts.items():
        out.append(BenchRecord(label, order, "ntt", round(k / m, 6), dt))
    return out


def cost_slope(records: list[BenchRecord], op: str) -> float:
    """Least-squares slope of ratio_to_mul against log2 n."""
    pts = [(math.log2(r.n_bits), r.ratio_to_mul) for r in records if r.op == op]
    if len(pts) < 2:
        raise ValueError(f"need at least two sizes for {op}")
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


CSV_FIELDS = ("op", "n_bits", "backend", "ratio_to_mul", "wall_ns")
