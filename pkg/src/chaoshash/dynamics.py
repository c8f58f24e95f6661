"""Chaotic iterations of the negation map on n-bit configurations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitcore import Configuration
from .errors import DimensionError, ExhaustedStrategyError
from .keystream import Strategy


@dataclass(frozen=True)
class Point:
    """A (strategy prefix, configuration) pair."""

    strategy: Strategy
    config: Configuration

    def __post_init__(self):
        if self.strategy.n != self.config.n:
            raise DimensionError(
                f"strategy indexes {self.strategy.n} components but the configuration has {self.config.n}"
            )


def f_neg(s: int, x: Configuration) -> Configuration:
    """Negate component ``s``."""
    if not 0 <= s < x.n:
        raise DimensionError(f"component {s} out of range for n={x.n}")
    bits = x.bits.copy()
    bits[s] ^= 1
    return Configuration._wrap(bits)


def g_neg_step(p: Point) -> Point:
    """Flip the head component, then drop the head of the strategy."""
    if len(p.strategy) == 0:
        raise ExhaustedStrategyError("strategy is exhausted")
    return Point(p.strategy[1:], f_neg(p.strategy[0], p.config))


def flip_mask(strategy: Strategy) -> np.ndarray:
    """1 at every component that occurs an odd number of times."""
    counts = np.bincount(strategy.terms, minlength=strategy.n)
    return (counts & 1).astype(np.uint8)


def iterate(p: Point) -> Configuration:
    """Apply every strategy term in order and return the final configuration.

    Negations commute and are involutions, so the result only depends on
    the parity of each component's multiplicity.
    """
    return Configuration._wrap(p.config.bits ^ flip_mask(p.strategy))


def reach_strategy(x: Configuration, y: Configuration) -> Strategy:
    """Shortest strategy driving ``x`` to ``y``: the differing indices, ascending."""
    if x.n != y.n:
        raise DimensionError(f"length mismatch: {x.n} != {y.n}")
    return Strategy(np.flatnonzero(x.bits != y.bits), x.n)
