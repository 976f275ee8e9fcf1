import math
import random

import pytest

from mpbrent import core, ntt
from mpbrent.core import CostMeter, MPFloat, add, mul, round_to
from mpbrent.errors import EmptyReportError, ExponentOverflow
from oracles import log2_rel_err_product, parts, to_fraction


def rand_float(rng, n, spread=64):
    return core.from_man_exp(rng.choice((-1, 1)), rng.getrandbits(n) | (1 << (n - 1)),
                             rng.randint(-spread, spread), n)


def test_normalization_and_limbs():
    x = core.mpf(3, 100)
    assert x.man.bit_length() == 100
    assert len(x.limbs) == 2
    assert x.limbs[0] >> 63 == 1
    assert x.limbs[-1] & ((1 << 28) - 1) == 0   # 128 - 100 low bits empty
    z = core.zero(100)
    assert z.limbs == () and z.exp == 0


def test_debug_validator_rejects_garbage():
    with pytest.raises(ValueError):
        MPFloat(1, 3, 0, 10)
    with pytest.raises(ValueError):
        MPFloat(0, 1, 0, 10)


def test_mul_identity():
    rng = random.Random(1)
    for n in (53, 256, 1000):
        x = rand_float(rng, n)
        assert mul(core.one(n), x, n) == x


@pytest.mark.parametrize("backend", ["karatsuba", "ntt"])
def test_backends_agree_with_schoolbook(backend):
    rng = random.Random(2)
    n = 256
    for _ in range(1000):
        x, y = rand_float(rng, n), rand_float(rng, n)
        ref = mul(x, y, n, "schoolbook")
        got = mul(x, y, n, backend)
        if got != ref:
            assert log2_rel_err_product([got], ref) <= -254


def test_mul_error_bound():
    rng = random.Random(3)
    for n in (64, 300, 5000):
        for _ in range(50):
            x, y = rand_float(rng, n), rand_float(rng, n)
            assert log2_rel_err_product([x, y], mul(x, y, n)) <= -n + 2


def test_ntt_convolution_exact():
    rng = random.Random(4)
    for la, lb in ((1, 1), (7, 300), (513, 511), (2000, 3)):
        a = [rng.getrandbits(16) for _ in range(la)]
        b = [rng.getrandbits(16) for _ in range(lb)]
        ref = [0] * (la + lb - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                ref[i + j] += u * v
        assert ntt.convolve(a, b) == ref


def test_add_identities():
    rng = random.Random(5)
    for n in (64, 256):
        x = rand_float(rng, n)
        assert add(x, core.zero(n), n) == x
        assert add(x, -x, n).sign == 0


def test_add_tiny_term():
    x = add(core.one(256), core.ldexp(core.one(256), -200), 256)
    assert to_fraction(x) == 1 + core.exact(1).to_fraction() / 2 ** 200
    m, k = parts(x)
    # bits 1..199 below the leading one are zero, bit 200 is set
    assert m == (1 << (-k)) + (1 << (-k - 200))


def test_round_to_truncates_toward_zero():
    x = add(core.one(200), core.ldexp(core.one(200), -100), 200)
    assert round_to(x, 64) == 1
    assert round_to(-x, 64) == -1
    assert round_to(x, x.prec) is x


def test_exponent_overflow_detected():
    x = core.ldexp(core.one(64), core.EXP_MAX - 2)
    with pytest.raises(ExponentOverflow):
        mul(x, x, 64)
    with pytest.raises(OverflowError):
        core.ldexp(x, 10)


def test_string_round_trip():
    rng = random.Random(6)
    for n in (53, 100, 333):
        for _ in range(30):
            x = rand_float(rng, n, spread=300)
            assert core.parse(core.to_decimal(x), n) == x
            assert core.parse(core.to_hex(x), n) == x
    assert core.to_hex(core.mpf(1, 53)) == "0x1p+0"
    assert core.parse("-0x1.8p1", 53) == -3


def test_meter_report():
    with CostMeter(backend="ntt") as m:
        with pytest.raises(EmptyReportError):
            core.meter_report(m)
        x = core.mpf(3, 4096)
        mul(x, x, 4096)
    rows = core.meter_report(m)
    assert len(rows) == 1 and rows[0].label == "mul" and rows[0].ratio == 1.0


def test_meter_monotone_and_nested_phase():
    from mpbrent.basic import div
    with CostMeter(backend="ntt") as m:
        seen = []
        a = core.mpf(3, 2048)
        for _ in range(3):
            div(core.one(2048), a, 2048)
            seen.append(m.limb_mults)
    assert seen == sorted(seen)
    # the recip inside div does not open its own phase
    assert [p.label for p in m.phases] == ["div"] * 3


def test_backend_choice_respects_thresholds():
    core.set_thresholds(core.Thresholds(4, 16))
    try:
        assert core.choose_backend(3) == "schoolbook"
        assert core.choose_backend(4) == "karatsuba"
        assert core.choose_backend(16) == "ntt"
    finally:
        core.set_thresholds(None)


def test_calibration_file_round_trip(tmp_path):
    p = tmp_path / "calib.cfg"
    core.save_thresholds(core.Thresholds(11, 222), p)
    assert core.load_thresholds(p) == core.Thresholds(11, 222)


@pytest.mark.parametrize("alpha", [1 / 2, 1 / 3])
def test_lemma_1_1_geometric_sum(alpha):
    n = 1 << 20
    m = CostMeter(backend="ntt")
    total, k = 0, 0
    while alpha ** k * n >= 64:
        total += m.reference_cost(int(alpha ** k * n))
        k += 1
    ratio = total / m.reference_cost(n)
    target = 1 / (1 - alpha)
    assert abs(ratio - target) <= 0.25 * target
