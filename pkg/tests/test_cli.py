import csv
import io
import json
import math
import shutil
import subprocess
import sys

import pytest

from mpbrent import cli, series
from oracles import machin_pi_digits


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), buf)
    return code, buf.getvalue()


def value(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert len(lines) == 1
    return lines[0]


def test_digits_to_bits():
    assert cli.digits_to_bits(10) == math.ceil(10 * math.log2(10)) + 32


def test_eval_examples():
    code, out = run("eval", "pi", "--digits", "50")
    assert code == 0
    assert value(out) == "3.14159265358979323846264338327950288419716939937510"
    assert value(run("eval", "log", "1e6", "--digits", "10")[1]) == "13.81551056"
    assert value(run("eval", "artan", "0.5", "--digits", "8")[1]) == "0.46364761"


def test_eval_pi_many_digits():
    out = value(run("eval", "pi", "--digits", "300")[1])
    assert out.replace(".", "") == machin_pi_digits(300)


def test_eval_header_documents_truncation():
    out = run("eval", "pi", "--digits", "5")[1]
    assert out.startswith("# ") and "truncat" in out.splitlines()[0]


def test_eval_other_targets():
    assert value(run("eval", "exp", "1", "--digits", "20")[1]) == "2.7182818284590452354"
    assert value(run("eval", "sqrt", "2", "--digits", "12")[1]) == "1.41421356237"
    assert value(run("eval", "sin", "1", "--digits", "10")[1]) == "0.8414709848"
    assert value(run("eval", "cos", "1", "--digits", "10")[1]) == "0.5403023059"
    assert value(run("eval", "agm", "1", "2", "--digits", "10")[1]) == "1.456791031"
    assert value(run("eval", "sqrt", "0x1p2", "--bits", "64")[1]).startswith("2.0")


def test_eval_rounding_option():
    assert value(run("eval", "log", "1e6", "--digits", "10", "--rounding", "down")[1]) \
        == "13.81551055"


def test_eval_formats():
    code, out = run("eval", "pi", "--digits", "10", "--output", "jsonl")
    rec = json.loads(out)
    assert rec["value"] == "3.1415926535" and rec["bits"] == cli.digits_to_bits(10)
    code, out = run("eval", "pi", "--digits", "10", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "3.1415926535"


def test_eval_errors(capsys):
    assert run("eval", "log", "-1")[0] == 3
    err = capsys.readouterr().err
    assert "log" in err and "-1" in err and "DomainError" in err
    assert run("eval", "log", "abc")[0] == 2
    assert run("eval", "log")[0] == 2
    assert run("eval", "nosuch")[0] == 2
    assert run("eval", "pi", "--digits", "5", "--bits", "40")[0] == 2
    assert run("eval", "exp", "1e30", "--digits", "5")[0] == 3


@pytest.mark.parametrize("tid", ["8.1", "9.1", "12.1"])
def test_table_check(tid):
    code, out = run("table", tid, "--check")
    assert code == 0 and "match" in out


def test_table_rows():
    out = run("table", "9.1", "--output", "csv")[1]
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[2]["a_i"] == "2.510010000e-1" and rows[2]["b_i"] == "3.162283985e-2"
    out = run("table", "8.1", "--output", "jsonl")[1]
    row4 = json.loads(out.splitlines()[4])
    assert row4["A^2/T - pi"].endswith("e-21")
    assert row4["pi - (A+B)^2/(4T)"].endswith("e-41")
    out = run("table", "12.1", "--output", "csv")[1]
    row4 = list(csv.DictReader(io.StringIO(out)))[4]
    assert row4["a_j"] == "(1.0927111e-1, -3.1302088e-3)"


def test_table_mismatch_exit(monkeypatch):
    from mpbrent import bench
    bad = list(bench.TABLE_9_1)
    bad[2] = ("2.510010001e-1", bad[2][1])
    monkeypatch.setattr(bench, "TABLE_9_1", tuple(bad))
    assert run("table", "9.1", "--check")[0] == 4


def test_unknown_table():
    assert run("table", "7.7")[0] == 2


def test_bench_basic_and_determinism():
    args = ("bench", "basic", "--sizes", "64,2^12", "--output", "csv")
    outs = []
    for _ in range(2):
        code, out = run(*args)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        outs.append([(r["op"], r["n_bits"], r["backend"], r["ratio_to_mul"]) for r in rows])
    assert outs[0] == outs[1]
    header = out.splitlines()[0]
    assert header == "op,n_bits,backend,ratio_to_mul,wall_ns"
    recip = [r for r in outs[0] if r[0] == "recip" and r[1] == "4096"]
    assert 2.0 < float(recip[0][3]) < 4.5


def test_bench_small_size_skipped():
    out = run("bench", "basic", "--sizes", "32", "--output", "jsonl")[1]
    rec = json.loads(out.splitlines()[0])
    assert rec["op"].startswith("skipped") and math.isnan(rec["ratio_to_mul"])


def test_bench_series_jsonl():
    out = run("bench", "series", "--sizes", "4096", "--output", "jsonl")[1]
    recs = {json.loads(l)["op"]: json.loads(l) for l in out.splitlines()}
    assert 6.5 < recs["ps_exp"]["ratio_to_mul"] < 11.5


def test_bench_elem_plain_slopes():
    out = run("bench", "elem", "--sizes", "2^10,2^11,2^12", "--output", "plain")[1]
    assert "slope log:" in out and "slope pi:" in out


def test_bench_bad_sizes():
    assert run("bench", "basic", "--sizes", "x")[0] == 2


def test_series_verb(tmp_path):
    p = tmp_path / "p.txt"
    p.write_text(series.dumps(series.series([1, 1], 11, series.RATIONAL)))
    code, out = run("series", "pow", "--input", str(p), "--power", "10")
    assert code == 0
    R = series.loads(out)
    assert R.to_list() == [math.comb(10, j) for j in range(11)]
    q = tmp_path / "q.txt"
    q.write_text(series.dumps(series.series([1, -1], 4, series.RATIONAL)))
    out = run("series", "mul", "--input", str(p), "--input2", str(q), "--order", "4")[1]
    assert series.loads(out).to_list() == [1, 0, -1, 0]
    assert run("series", "mul", "--input", str(p))[0] == 2
    assert run("series", "log", "--input", str(tmp_path / "missing"))[0] == 2


def test_series_round_trip_through_cli(tmp_path):
    p = tmp_path / "p.txt"
    P = series.series([0, 0.5, -0.25, 0.125], 8)
    p.write_text(series.dumps(P))
    e = tmp_path / "e.txt"
    e.write_text(run("series", "exp", "--input", str(p))[1])
    back = series.loads(run("series", "log", "--input", str(e))[1])
    assert max(abs(a - b) for a, b in zip(back.to_list(), P.to_list())) < 1e-14


def test_calibrate_writes_config(tmp_path, monkeypatch):
    path = tmp_path / "cal.cfg"
    monkeypatch.setenv("MPBRENT_CALIB", str(path))
    code, out = run("calibrate", "--max-limbs", "64")
    assert code == 0 and out.startswith("T1=")
    text = path.read_text()
    assert "T1=" in text and "T2=" in text


def test_help_mentions_truncation():
    with pytest.raises(SystemExit):
        cli._parser().parse_args(["--help"])


@pytest.mark.skipif(shutil.which("mpbrent") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["mpbrent", "eval", "pi", "--digits", "20"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[-1] == "3.14159265358979323846"
    r = subprocess.run(["mpbrent", "eval", "log", "--", "-1"], capture_output=True, text=True)
    assert r.returncode == 3
    r = subprocess.run([sys.executable, "-m", "mpbrent.cli", "table", "9.1", "--check"],
                       capture_output=True, text=True)
    assert r.returncode == 0
