"""Bit-sequence carrier and the primitive transformations built on it.

Bit index 0 is the leftmost bit of the displayed text form.  Values are
backed by read-only ``uint8`` numpy arrays holding 0/1, so instances are
immutable and cheap to share between threads.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .errors import DimensionError, PreconditionError

BitLike = Union["BitString", str, Iterable[int], np.ndarray]

_HEX = "0123456789ABCDEF"


def _as_bit_array(value) -> np.ndarray:
    if isinstance(value, BitString):
        return value.bits
    if isinstance(value, str):
        text = "".join(value.split())
        if text.strip("01"):
            raise ValueError(f"not a bit string: {value!r}")
        arr = np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
        return arr.astype(np.uint8)
    arr = np.asarray(list(value) if not isinstance(value, np.ndarray) else value)
    if arr.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if arr.ndim != 1 or not np.isin(arr, (0, 1)).all():
        raise ValueError("bits must be a flat sequence of 0/1 values")
    return arr.astype(np.uint8)


class BitString:
    """Immutable ordered sequence of bits."""

    __slots__ = ("_bits",)

    def __init__(self, bits: BitLike = ()):
        # _as_bit_array returns a fresh copy unless handed another BitString
        arr = _as_bit_array(bits)
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray):
        # trusted constructor: arr already holds 0/1 uint8
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        obj._bits = arr
        return obj

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        """Parse the canonical form (whitespace between groups is ignored)."""
        return cls(text)

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        if value < 0 or (width < value.bit_length()):
            raise PreconditionError(f"{value} does not fit in {width} bits")
        return cls(format(value, f"0{width}b") if width else "")

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return int(self._bits.size)

    def __iter__(self):
        return iter(self._bits.tolist())

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitString._wrap(self._bits[index].copy())
        return int(self._bits[index])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((len(self), np.packbits(self._bits).tobytes()))

    def __add__(self, other: "BitString") -> "BitString":
        return BitString._wrap(np.concatenate([self._bits, _as_bit_array(other)]))

    def to_text(self, group: int = 8) -> str:
        """Render as space-separated groups of ``group`` bits."""
        s = self.to01()
        return " ".join(s[i : i + group] for i in range(0, len(s), group))

    def to01(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def to_int(self) -> int:
        return int(self.to01(), 2) if len(self) else 0

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        s = self.to01()
        if len(s) > 64:
            s = s[:64] + "..."
        return f"{type(self).__name__}('{s}', len={len(self)})"


class Configuration(BitString):
    """Fixed-length system state; ``n`` is its length."""

    __slots__ = ()

    def __init__(self, bits: BitLike = ()):
        super().__init__(bits)
        if len(self) < 1:
            raise DimensionError("a configuration needs at least one bit")

    @property
    def n(self) -> int:
        return len(self)

    @classmethod
    def zeros(cls, n: int) -> "Configuration":
        return cls._wrap(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_hex(cls, text: str) -> "Configuration":
        """Inverse of :func:`to_hex`."""
        text = text.strip()
        try:
            value = int(text, 16)
        except ValueError:
            raise ValueError(f"not a hexadecimal string: {text!r}") from None
        return cls(format(value, f"0{4 * len(text)}b"))


def rotate_left(s: BitString, k: int) -> BitString:
    """Circular rotation: bit i of the result is bit (i+k) mod len of ``s``."""
    if k < 0:
        raise PreconditionError("rotation amount must be non-negative")
    if len(s) == 0:
        return s
    return type(s)._wrap(np.roll(s.bits, -(k % len(s))))


def rotate_right(s: BitString, k: int) -> BitString:
    if k < 0:
        raise PreconditionError("rotation amount must be non-negative")
    if len(s) == 0:
        return s
    return type(s)._wrap(np.roll(s.bits, k % len(s)))


def reverse(s: BitString) -> BitString:
    return type(s)._wrap(s.bits[::-1].copy())


def xor_fold(s: BitString, n: int) -> Configuration:
    """XOR together the consecutive n-bit blocks of ``s``."""
    if n <= 0 or len(s) == 0 or len(s) % n:
        raise PreconditionError(f"length {len(s)} is not a positive multiple of {n}")
    blocks = s.bits.reshape(-1, n)
    return Configuration._wrap(np.bitwise_xor.reduce(blocks, axis=0))


def hamming(a: BitString, b: BitString) -> int:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} != {len(b)}")
    return int(np.count_nonzero(a.bits != b.bits))


def to_hex(c: BitString) -> str:
    """Uppercase hex, one symbol per 4-bit group read left to right."""
    if len(c) == 0 or len(c) % 4:
        raise DimensionError(f"length {len(c)} is not a positive multiple of 4")
    nibbles = c.bits.reshape(-1, 4) @ np.array([8, 4, 2, 1])
    return "".join(_HEX[v] for v in nibbles.tolist())
