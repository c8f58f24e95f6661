import io
import json
import statistics

import pytest

from chaoshash.errors import PreconditionError
from chaoshash.hasher import REFERENCE_VECTORS, hash_message
from chaoshash.preprocess import HashParams
from chaoshash.statlab import (
    avalanche_experiment,
    bench_linear,
    carrier_length_bound,
    case_battery,
    iteration_count,
    nibble_uniformity,
    stats_from_B,
    uniformity_experiment,
)


def test_stats_constant():
    s = stats_from_B([64, 64], 128)
    assert (s.B_bar, s.P, s.delta_B, s.delta_P) == (64, 0.5, 0, 0)


def test_stats_hand_values():
    s = stats_from_B([50, 92], 128)
    assert s.B_min == 50 and s.B_max == 92 and s.B_bar == 71
    assert s.delta_B == pytest.approx((2 * 21**2) ** 0.5)
    assert s.delta_B == pytest.approx(29.698, abs=1e-3)


def test_stats_against_stdlib():
    B = [60, 71, 64, 59, 66, 70, 62, 65]
    s = stats_from_B(B, 128)
    assert s.B_bar == pytest.approx(statistics.mean(B))
    assert s.delta_B == pytest.approx(statistics.stdev(B))
    assert s.delta_P == pytest.approx(statistics.stdev([b / 128 for b in B]))


def test_table_first_row_is_self_consistent():
    # B_bar=67.57, delta_B=8.89 reported with P=52.78%, delta_P=6.95%
    assert 67.57 / 128 == pytest.approx(0.5278, abs=1e-4)
    assert 8.89 / 128 == pytest.approx(0.0695, abs=1e-4)


def test_stats_degenerate():
    s = stats_from_B([40], 80)
    assert s.delta_B is None and s.delta_P is None
    with pytest.raises(PreconditionError):
        stats_from_B([], 80)
    with pytest.raises(PreconditionError):
        stats_from_B([81], 80)


def test_single_trial_report():
    r = avalanche_experiment(1, 64, HashParams(n=32), seed=5)
    assert r.trials == 1 and sum(r.histogram.values()) == 1
    assert r.delta_B is None and r.delta_P is None


def test_avalanche_report_consistency():
    r = avalanche_experiment(40, 200, HashParams(n=80), seed=9)
    assert len(r.B_values) == 40 and sum(r.histogram.values()) == 40
    assert all(0 <= b <= 80 for b in r.B_values)
    assert r.B_bar == pytest.approx(sum(r.B_values) / 40)
    assert r.P == pytest.approx(r.B_bar / 80)


def test_avalanche_seed_and_threads():
    params = HashParams(n=64, key=7)
    a = avalanche_experiment(30, 100, params, seed=2**64 - 1)
    b = avalanche_experiment(30, 100, params, seed=2**64 - 1, threads=4)
    assert a.to_json() == b.to_json()
    c = avalanche_experiment(30, 100, params, seed=1)
    assert c.B_values != a.B_values


def test_avalanche_json_fields():
    data = json.loads(avalanche_experiment(3, 16, HashParams(n=16), seed=4).to_json())
    assert set(data) == {
        "trials", "message_bits", "digest_bits", "B_values", "B_min", "B_max",
        "B_bar", "P", "delta_B", "delta_P", "histogram", "seed", "key",
    }
    assert data["seed"] == 4


def test_histogram_csv():
    r = avalanche_experiment(10, 50, HashParams(n=16), seed=1)
    buf = io.StringIO()
    r.write_histogram_csv(buf)
    rows = buf.getvalue().splitlines()
    assert rows[0] == "distance,count"
    assert sum(int(line.split(",")[1]) for line in rows[1:]) == 10


def test_avalanche_rejects_bad_input():
    with pytest.raises(PreconditionError):
        avalanche_experiment(0, 10)
    with pytest.raises(PreconditionError):
        avalanche_experiment(1, 10, seed=-1)


def test_uniformity_examples():
    assert nibble_uniformity(["0123456789ABCDEF"] * 3).chi2 == 0
    T = 40
    assert nibble_uniformity(["7" * T]).chi2 == pytest.approx(15 * T)
    with pytest.raises(PreconditionError):
        nibble_uniformity([])


def test_uniformity_accepts_digests():
    digests = [hash_message(bytes([i])) for i in range(20)]
    result = nibble_uniformity(digests)
    assert result.total == 20 * 64


def test_uniformity_experiment_threads():
    a = uniformity_experiment(20, 64, HashParams(n=32), seed=3)
    b = uniformity_experiment(20, 64, HashParams(n=32), seed=3, threads=4)
    assert a == b and a.total == 20 * 8


@pytest.mark.parametrize("l, stages", [(119, (120, 128, 255, 512)), (0, (1, 3, 5, 512))])
def test_iteration_count_traces(l, stages):
    c = iteration_count(l)
    assert c.stages == stages and c.d_bits == 512 and c.within_bound


def test_iteration_count_matches_pipeline():
    for message in (b"", b"a", b"x" * 100, b"y" * 1000):
        c = iteration_count(8 * len(message))
        assert hash_message(message).iterations == c.iterations
        assert c.d_bits % 512 == 0


def test_bound_small_values():
    assert carrier_length_bound(0) == 515
    assert carrier_length_bound(1) == 519
    assert carrier_length_bound(3) == 2 * 3 + 2 * 2 + 515


def test_bound_sweep_prefix():
    assert all(iteration_count(l).within_bound for l in range(5000))


def test_bench_single_size():
    r = bench_linear([4096], repetitions=3)
    assert r.doubling_ratios == []
    assert len(r.per_bit_cost) == 1 and r.per_bit_cost[0] > 0
    assert r.rows[0].iteration_count == iteration_count(4096).iterations


def test_bench_validation():
    with pytest.raises(PreconditionError):
        bench_linear([4096], repetitions=2)
    with pytest.raises(PreconditionError):
        bench_linear([8192, 4096])
    with pytest.raises(PreconditionError):
        bench_linear([100])


def test_battery():
    ascii7 = HashParams(encoding="ascii7")
    result = case_battery(
        [
            ("upper", b"The original text", ascii7),
            ("lower", b"the original text", ascii7),
            ("again", b"The original text", ascii7),
            ("bad", b"\xff", ascii7),
        ]
    )
    hexes = [r.hex for r in result.rows]
    assert hexes[0] == REFERENCE_VECTORS[b"The original text"]
    assert hexes[1] == REFERENCE_VECTORS[b"the original text"]
    assert result.distances[0][2] == 0
    assert 0 < result.distances[0][1] <= 256
    assert result.rows[3].hex is None and "ascii7" in result.rows[3].error
    assert result.distances[0][3] is None


def test_battery_seven_cases():
    base = bytes(range(32, 127)) * 4
    cases = [
        ("original", base),
        ("one char changed", base[:10] + b"#" + base[11:]),
        ("word inserted", base[:50] + b"word" + base[50:]),
        ("char removed", base[:-1]),
        ("case swapped", base.swapcase()),
        ("keyed", base),
        ("blank appended", base + b" "),
    ]
    rows = [(label, msg, HashParams(n=128, key=42 if label == "keyed" else None)) for label, msg in cases]
    result = case_battery(rows)
    assert len({r.hex for r in result.rows}) == 7
    buf = io.StringIO()
    result.write_distance_csv(buf)
    assert len(buf.getvalue().splitlines()) == 1 + 21


def test_doubling_ratio_pairs_timings_by_round():
    from chaoshash.statlab import BenchReport, BenchRow

    # round 2 ran on a machine twice as slow; per-round ratios stay at 2
    a = BenchRow(4096, 0, 0, 2.0, (1.0, 2.0, 1.0))
    b = BenchRow(8192, 0, 0, 4.0, (2.0, 4.0, 2.0))
    report = BenchReport([a, b], slope=0.0, linearity=1.0, seed=0)
    assert report.doubling_ratios == [(4096, 2.0)]
