"""Byte stream (u^t) read from rotations of D, and the strategy built from it."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence

import numpy as np

from .bitcore import BitString
from .errors import DimensionError, PreconditionError
from .preprocess import HashParams

PASSES = 8


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class UStream:
    terms: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "terms", _frozen(self.terms, np.uint8))

    def __len__(self) -> int:
        return int(self.terms.size)

    def __eq__(self, other):
        if not isinstance(other, UStream):
            return NotImplemented
        return np.array_equal(self.terms, other.terms)


@dataclass(frozen=True, eq=False)
class Strategy:
    """Finite update schedule: component indices in [0, n)."""

    terms: np.ndarray
    n: int

    def __post_init__(self):
        terms = _frozen(self.terms, np.int64)
        if terms.ndim != 1:
            raise DimensionError("strategy terms must be one-dimensional")
        if terms.size and (terms.min() < 0 or terms.max() >= self.n):
            raise DimensionError(f"strategy terms must lie in [0, {self.n})")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return int(self.terms.size)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Strategy(self.terms[index], self.n)
        return int(self.terms[index])

    def __eq__(self, other):
        if not isinstance(other, Strategy):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.terms, other.terms)

    def tolist(self) -> list:
        return self.terms.tolist()


def build_u(d: BitString, rotation: str = "left") -> UStream:
    """Read D as bytes over eight passes, rotating one more bit each pass.

    Pass p reads D rotated by p bits (to the left by default), split into
    8-bit blocks MSB first; the passes are concatenated in order.
    """
    if len(d) % 8:
        raise DimensionError(f"length {len(d)} is not a multiple of 8")
    if rotation not in ("left", "right"):
        raise ValueError(f"rotation must be 'left' or 'right', not {rotation!r}")
    sign = -1 if rotation == "left" else 1
    passes = [np.packbits(np.roll(d.bits, sign * p)) for p in range(PASSES)]
    return UStream(np.concatenate(passes) if passes[0].size else np.zeros(0, np.uint8))


def build_strategy(u: UStream, params: HashParams) -> Strategy:
    """S^0 = key mod n (keyed) or u^0 mod n (unkeyed); then
    S^t = (u^t + 2 S^(t-1) + t) mod n."""
    n, key = params.n, params.key
    if len(u) == 0:
        raise PreconditionError("cannot build a strategy from an empty stream")
    s0 = (key if key is not None else int(u.terms[0])) % n
    increments = (u.terms[1:].astype(np.int64) + np.arange(1, len(u))) % n
    terms = accumulate(increments.tolist(), lambda s, c: (2 * s + c) % n, initial=s0)
    return Strategy(np.fromiter(terms, dtype=np.int64, count=len(u)), n)


def strategy_from(values: Sequence[int], n: int) -> Strategy:
    return Strategy(np.asarray(values, dtype=np.int64), n)
