from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaoshash.bitcore import Configuration, hamming
from chaoshash.dynamics import Point, f_neg, g_neg_step, iterate, reach_strategy
from chaoshash.errors import DimensionError, ExhaustedStrategyError
from chaoshash.keystream import strategy_from


@st.composite
def points(draw, max_n=32, max_len=64):
    n = draw(st.integers(1, max_n))
    x = draw(st.text("01", min_size=n, max_size=n))
    s = draw(st.lists(st.integers(0, n - 1), max_size=max_len))
    return Point(strategy_from(s, n), Configuration(x))


def parity_oracle(p: Point) -> str:
    """Bit b negated iff b occurs an odd number of times."""
    counts = Counter(p.strategy.tolist())
    return "".join(str(int(c) ^ (counts[i] % 2)) for i, c in enumerate(p.config.to01()))


@pytest.mark.parametrize("s, x, expected", [(2, "0000", "0010"), (0, "1111", "0111")])
def test_f_neg(s, x, expected):
    assert f_neg(s, Configuration(x)).to01() == expected


def test_f_neg_range():
    with pytest.raises(DimensionError):
        f_neg(4, Configuration("0000"))
    with pytest.raises(DimensionError):
        f_neg(-1, Configuration("0000"))


@given(points(), st.data())
def test_f_neg_involution(p, data):
    s = data.draw(st.integers(0, p.config.n - 1))
    assert f_neg(s, f_neg(s, p.config)) == p.config


def test_g_neg_step_examples():
    p = g_neg_step(Point(strategy_from([2, 0], 4), Configuration("0000")))
    assert p.strategy.tolist() == [0] and p.config.to01() == "0010"
    q = g_neg_step(Point(strategy_from([0], 1), Configuration("1")))
    assert len(q.strategy) == 0 and q.config.to01() == "0"
    with pytest.raises(ExhaustedStrategyError):
        g_neg_step(q)


@given(points(), st.data())
def test_double_step_on_same_index_is_identity(p, data):
    j = data.draw(st.integers(0, p.config.n - 1))
    start = Point(strategy_from([j, j], p.config.n), p.config)
    end = g_neg_step(g_neg_step(start))
    assert end.config == p.config and len(end.strategy) == 0


@pytest.mark.parametrize("s, x, expected", [([0, 1], "00", "11"), ([0, 0], "10", "10"), ([], "101", "101")])
def test_iterate_examples(s, x, expected):
    assert iterate(Point(strategy_from(s, len(x)), Configuration(x))).to01() == expected


@given(points())
def test_iterate_parity_law(p):
    assert iterate(p).to01() == parity_oracle(p)


@given(points())
def test_iterate_equals_repeated_steps(p):
    q = p
    while len(q.strategy):
        q = g_neg_step(q)
    assert q.config == iterate(p)


@given(points())
def test_distance_bounded_by_strategy_length(p):
    d = hamming(p.config, iterate(p))
    terms = p.strategy.tolist()
    assert d <= len(terms)
    if len(set(terms)) == len(terms):
        assert d == len(terms)
    else:
        assert d < len(terms)


def test_reach_strategy_examples():
    assert reach_strategy(Configuration("0000"), Configuration("1010")).tolist() == [0, 2]
    assert reach_strategy(Configuration("0110"), Configuration("0110")).tolist() == []
    with pytest.raises(DimensionError):
        reach_strategy(Configuration("01"), Configuration("011"))


@given(st.text("01", min_size=256, max_size=256), st.text("01", min_size=256, max_size=256))
def test_reach_strategy_replays(a, b):
    x, y = Configuration(a), Configuration(b)
    s = reach_strategy(x, y)
    assert len(s) <= 256
    assert s.tolist() == sorted(s.tolist())
    assert iterate(Point(s, x)) == y


def test_point_dimension_check():
    with pytest.raises(DimensionError):
        Point(strategy_from([0], 3), Configuration("0000"))
