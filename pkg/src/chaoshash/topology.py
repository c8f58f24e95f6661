"""Distance on (strategy, configuration) points and constructive chaos checks.

The strategy part of the distance is a series weighted by powers of 1/10;
it is evaluated on a finite prefix of ``depth`` terms, which underestimates
the full series by less than 10**-depth.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, TextIO

import numpy as np

from .bitcore import Configuration, hamming
from .dynamics import Point
from .errors import DepthError, DimensionError
from .keystream import Strategy

DEFAULT_DEPTH = 15


@dataclass(frozen=True)
class DistanceValue:
    config_part: int
    strategy_part: float
    truncation_depth: int

    @property
    def total(self) -> float:
        return self.config_part + self.strategy_part

    def __float__(self) -> float:
        return self.total


def lyapunov_reference(n: int) -> float:
    """Known Lyapunov exponent of the negation iterations, ln(n).  Reference only."""
    return math.log(n)


def d_e(a: Configuration, b: Configuration) -> int:
    return hamming(a, b)


def d_s_exact(s: Strategy, t: Strategy, depth: int = DEFAULT_DEPTH) -> Fraction:
    """(9/n) * sum_{i=1..depth} |s_i - t_i| / 10**i, term 0 weighted 1/10."""
    if s.n != t.n:
        raise DimensionError(f"strategies index different sizes: {s.n} != {t.n}")
    if len(s) < depth or len(t) < depth:
        raise DepthError(f"need {depth} strategy terms, have {min(len(s), len(t))}")
    diffs = np.abs(s.terms[:depth] - t.terms[:depth]).tolist()
    numerator = sum(d * 10 ** (depth - 1 - i) for i, d in enumerate(diffs))
    return Fraction(9 * numerator, s.n * 10**depth)


def d_s(s: Strategy, t: Strategy, depth: int = DEFAULT_DEPTH) -> float:
    return float(d_s_exact(s, t, depth))


def distance(x: Point, y: Point, depth: int = DEFAULT_DEPTH) -> DistanceValue:
    return DistanceValue(
        config_part=d_e(x.config, y.config),
        strategy_part=d_s(x.strategy, y.strategy, depth),
        truncation_depth=depth,
    )


@dataclass(frozen=True)
class Witness:
    step: int
    distance: DistanceValue


def _flip_rows(point: Point, steps: int) -> np.ndarray:
    """Row k holds the configuration after k updates, k = 0..steps."""
    rows = np.zeros((steps + 1, point.config.n), dtype=np.uint8)
    rows[0] = point.config.bits
    for k, s in enumerate(point.strategy.terms[:steps].tolist(), start=1):
        rows[k] = rows[k - 1]
        rows[k, s] ^= 1
    return rows


def expansivity_witness(
    x: Point, y: Point, horizon: int, depth: int = DEFAULT_DEPTH
) -> Optional[Witness]:
    """Smallest k <= horizon with d(G^k x, G^k y) >= 1, or None.

    The strategy part is always below 1, so this is the first step at
    which the two configurations differ.  The reported distance uses as
    many remaining strategy terms as are available, up to ``depth``.
    """
    if x.config.n != y.config.n:
        raise DimensionError(f"length mismatch: {x.config.n} != {y.config.n}")
    horizon = min(horizon, len(x.strategy), len(y.strategy))
    xs, ys = _flip_rows(x, horizon), _flip_rows(y, horizon)
    differing = np.flatnonzero((xs != ys).any(axis=1))
    if differing.size == 0:
        return None
    k = int(differing[0])
    rest_x, rest_y = x.strategy[k:], y.strategy[k:]
    used = min(depth, len(rest_x), len(rest_y))
    dist = DistanceValue(
        config_part=int(np.count_nonzero(xs[k] != ys[k])),
        strategy_part=d_s(rest_x, rest_y, used),
        truncation_depth=used,
    )
    return Witness(k, dist)


def divergence_trace(x: Point, y: Point, steps: int, depth: int = DEFAULT_DEPTH) -> List[DistanceValue]:
    """d(G^k x, G^k y) for k = 0..steps."""
    if x.config.n != y.config.n:
        raise DimensionError(f"length mismatch: {x.config.n} != {y.config.n}")
    need = steps + depth
    if len(x.strategy) < need or len(y.strategy) < need:
        raise DepthError(f"need {need} strategy terms for {steps} steps at depth {depth}")
    xs, ys = _flip_rows(x, steps), _flip_rows(y, steps)
    return [
        DistanceValue(
            config_part=int(np.count_nonzero(xs[k] != ys[k])),
            strategy_part=d_s(x.strategy[k:], y.strategy[k:], depth),
            truncation_depth=depth,
        )
        for k in range(steps + 1)
    ]


def write_trace_csv(trace: List[DistanceValue], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["step", "d_e", "d_s", "d"])
    for k, value in enumerate(trace):
        writer.writerow([k, value.config_part, repr(value.strategy_part), repr(value.total)])
