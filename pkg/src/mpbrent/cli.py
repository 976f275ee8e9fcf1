"""Command-line interface.

    mpbrent eval <target> [args] [--digits D | --bits B]
    mpbrent table {8.1,9.1,12.1} [--check]
    mpbrent bench {basic,elem,series} [--sizes N,N,...]
    mpbrent series <op> [--input FILE] [--order N] [--power M]
    mpbrent calibrate [--path FILE]

Exit codes: 0 success, 2 usage, 3 domain or range error, 4 golden mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import bench, core, series
from .basic import sqrt
from .elementary import agm, mp_exp, mp_log, pi
from .errors import MPError
from .mpcomplex import trig

EXIT_USAGE, EXIT_DOMAIN, EXIT_GOLDEN = 2, 3, 4

EVAL_TARGETS = {
    # name: (arity, fn(args, bits))
    "pi": (0, lambda a, n: pi(n)),
    "log": (1, lambda a, n: mp_log(a[0], n)),
    "exp": (1, lambda a, n: mp_exp(a[0], n)),
    "sin": (1, lambda a, n: trig("sin", a[0], n)),
    "cos": (1, lambda a, n: trig("cos", a[0], n)),
    "artan": (1, lambda a, n: trig("artan", a[0], n)),
    "agm": (2, lambda a, n: agm(a[0], a[1], n).limit),
    "sqrt": (1, lambda a, n: sqrt(a[0], n)),
}

HEADER = ("values are computed with truncating arithmetic and guard bits; "
          "the last printed digit may differ by one unit from the correctly rounded value")


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10)) + 32


def bits_to_digits(bits: int) -> int:
    return max(1, math.floor((bits - 32) / math.log2(10)))


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mpbrent",
        description="Multiple-precision evaluation of elementary functions (AGM methods).",
        epilog="Exit codes: 0 ok, 2 usage, 3 domain/range error, 4 golden check failed. "
               "Digits are emitted from truncated arithmetic: pi as a digit prefix, "
               "function values rounded to nearest; the last digit may be off by one unit.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--backend", choices=("auto",) + core.BACKENDS, default="auto")
        sp.add_argument("--output", choices=("plain", "csv", "jsonl"), default="plain")

    e = sub.add_parser("eval", help="evaluate a constant or function")
    e.add_argument("target", choices=sorted(EVAL_TARGETS))
    e.add_argument("args", nargs="*", help="decimal or hex arguments")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--digits", type=int, help="decimal digits (places for pi, significant otherwise)")
    g.add_argument("--bits", type=int, help="working precision in bits")
    e.add_argument("--rounding", choices=("auto", "down", "nearest"), default="auto",
                   help="digit emission: auto = prefix for pi, nearest for function values")
    common(e)

    t = sub.add_parser("table", help="reconstruct a reference table")
    t.add_argument("id", choices=sorted(bench.TABLES))
    t.add_argument("--check", action="store_true", help="compare with the embedded golden values")
    common(t)

    b = sub.add_parser("bench", help="run a cost-ratio benchmark suite")
    b.add_argument("suite", choices=bench.SUITES)
    b.add_argument("--sizes", help="comma-separated sizes (bits, or series order); 2^k allowed")
    b.add_argument("--backend", choices=core.BACKENDS, default="ntt")
    b.add_argument("--output", choices=("plain", "csv", "jsonl"), default="csv")

    s = sub.add_parser("series", help="power-series operations on the text format")
    s.add_argument("op", choices=("mul", "recip", "log", "exp", "pow", "atan", "diff", "integrate"))
    s.add_argument("--input", default="-", help="series file ('-' for stdin)")
    s.add_argument("--input2", help="second operand for mul")
    s.add_argument("--order", type=int, help="truncation order of the result")
    s.add_argument("--power", type=int, default=2, help="exponent for pow")
    s.add_argument("--field", help="coefficient field: float64, rational or mpN")

    c = sub.add_parser("calibrate", help="measure the multiplication thresholds T1, T2")
    c.add_argument("--path", help="config file to write (default: $MPBRENT_CALIB; "
                                  "without either, only print the thresholds)")
    c.add_argument("--max-limbs", type=int, default=4096)
    return p


def _size(tok: str) -> int:
    tok = tok.strip()
    if tok.startswith("2^"):
        return 1 << int(tok[2:])
    return int(tok)


def _emit(rows: list[dict], fields: list[str], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
    elif fmt == "jsonl":
        for r in rows:
            out.write(json.dumps({k: r[k] for k in fields}, sort_keys=False) + "\n")
    else:
        widths = [max(len(f), *(len(str(r[f])) for r in rows)) if rows else len(f) for f in fields]
        out.write("  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(str(r[f]).ljust(w) for f, w in zip(fields, widths)).rstrip() + "\n")


def format_value(x, digits: int, places: bool, mode: str) -> str:
    if x.sign and abs(x.exp) > 100:
        return core.to_decimal(x, digits, mode)
    return core.to_fixed(x, digits, mode, places=places)


def cmd_eval(ns, out) -> int:
    arity, fn = EVAL_TARGETS[ns.target]
    if len(ns.args) != arity:
        raise UsageError(f"{ns.target} takes {arity} argument(s), got {len(ns.args)}")
    digits = ns.digits if ns.digits is not None else (bits_to_digits(ns.bits) if ns.bits else 30)
    if digits < 1:
        raise UsageError("--digits must be positive")
    bits = ns.bits if ns.bits else digits_to_bits(digits)
    try:
        args = [core.parse(a, bits + 64) for a in ns.args]
    except ValueError as exc:
        raise UsageError(f"cannot parse argument: {exc}") from exc
    try:
        with core.use_backend(ns.backend):
            value = fn(args, bits)
    except (MPError, OverflowError, ZeroDivisionError) as exc:
        sys.stderr.write(f"mpbrent: {ns.target}({', '.join(ns.args)}): "
                         f"{type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    is_const = ns.target == "pi"
    mode = ns.rounding if ns.rounding != "auto" else ("down" if is_const else "nearest")
    text = format_value(value, digits, is_const, mode)
    if ns.output == "plain":
        out.write(f"# {HEADER}\n{text}\n")
    else:
        _emit([{"target": ns.target, "args": " ".join(ns.args), "digits": digits,
                "bits": bits, "value": text}],
              ["target", "args", "digits", "bits", "value"], ns.output, out)
    return 0


def cmd_table(ns, out) -> int:
    with core.use_backend(ns.backend):
        res = bench.TABLES[ns.id]()
    fields = list(res.header)
    rows = [dict(zip(fields, r + ("",) * (len(fields) - len(r)))) for r in res.rows]
    if ns.output == "plain":
        out.write(f"Table {res.table}\n")
    _emit(rows, fields, ns.output, out)
    if ns.check:
        if res.ok:
            if ns.output == "plain":
                out.write("check: all values match the golden table\n")
            return 0
        for f in res.failures:
            sys.stderr.write(f"mismatch: {f}\n")
        return EXIT_GOLDEN
    return 0


def cmd_bench(ns, out) -> int:
    try:
        sizes = [_size(t) for t in ns.sizes.split(",")] if ns.sizes else None
    except ValueError as exc:
        raise UsageError(f"bad --sizes: {exc}") from exc
    recs = bench.run_suite(ns.suite, sizes, ns.backend)
    rows = [r.as_dict() for r in recs]
    _emit(rows, list(bench.CSV_FIELDS), ns.output, out)
    if ns.output == "plain":
        for op in sorted({r.op for r in recs if not r.op.startswith("skipped")}):
            if sum(1 for r in recs if r.op == op) >= 2 and ns.suite == "elem":
                out.write(f"slope {op}: {bench.cost_slope(recs, op):.3f}\n")
    return 0


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def cmd_series(ns, out) -> int:
    field = series.field_by_name(ns.field) if ns.field else None
    try:
        P = series.loads(_read(ns.input), field)
        Q = series.loads(_read(ns.input2), field or P.field) if ns.input2 else None
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    n = ns.order if ns.order is not None else P.order
    op = ns.op
    if op == "mul":
        if Q is None:
            raise UsageError("mul needs --input2")
        R = series.ps_mul(P, Q, n)
    elif op == "recip":
        R = series.ps_recip(P, n)
    elif op == "log":
        R = series.ps_log(P, n)
    elif op == "exp":
        R = series.ps_exp(P, n)
    elif op == "pow":
        R = series.ps_pow(P, ns.power, n)
    elif op == "atan":
        R = series.ps_atan(P, n)
    elif op == "diff":
        R = series.ps_diff(P)
    else:
        R = series.ps_integrate(P)
    out.write(series.dumps(R))
    return 0


def cmd_calibrate(ns, out) -> int:
    path = ns.path or os.environ.get("MPBRENT_CALIB")
    t = core.calibrate(path, max_limbs=ns.max_limbs)
    out.write(f"T1={t.t1}\nT2={t.t2}\n")
    return 0


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "bench": cmd_bench,
            "series": cmd_series, "calibrate": cmd_calibrate}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[ns.verb](ns, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"mpbrent: error: {exc}\n")
        return EXIT_USAGE
    except (MPError, OverflowError, ZeroDivisionError) as exc:
        sys.stderr.write(f"mpbrent: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


def run(argv=None) -> str:
    """Run the CLI and return what it printed (for tests and notebooks)."""
    buf = io.StringIO()
    code = main(argv, buf)
    if code:
        raise SystemExit(code)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
