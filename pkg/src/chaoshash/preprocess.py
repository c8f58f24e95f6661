"""Message normalization: from raw bytes to the carrier D and the start state x0.

Pipeline: encode -> mark (append 1, length, 1) -> mirror -> cyclic
expansion to a block boundary -> XOR fold into n bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Optional, TextIO, Tuple, Union

import numpy as np

from .bitcore import BitString, Configuration, xor_fold
from .errors import DimensionError, EncodingError, PreconditionError

BLOCK_BITS = 512
MAX_DIGEST_BITS = 256
KEY_LIMIT = 1 << 64


class Encoding(str, Enum):
    ASCII7 = "ascii7"
    RAW8 = "raw8"


@dataclass(frozen=True)
class HashParams:
    """Digest size, message encoding and key.

    ``key`` is None for the unkeyed mode, otherwise an unsigned 64-bit
    integer.  Only ``key mod n`` influences the digest.
    """

    n: int = 256
    encoding: Encoding = Encoding.RAW8
    key: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "encoding", Encoding(self.encoding))
        check_digest_bits(self.n)
        if self.key is not None and not 0 <= self.key < KEY_LIMIT:
            raise PreconditionError(f"key must be an unsigned 64-bit integer, got {self.key}")

    @property
    def keyed(self) -> bool:
        return self.key is not None

    @property
    def effective_key(self) -> Optional[int]:
        return None if self.key is None else self.key % self.n


def check_digest_bits(n: int) -> None:
    if not isinstance(n, int) or n < 4 or n % 4 or n > MAX_DIGEST_BITS:
        raise DimensionError(f"digest size must be a multiple of 4 in [4, 256], got {n!r}")


@dataclass(frozen=True)
class NormalizedInput:
    d: BitString
    x0: Configuration
    stage_log: Tuple[BitString, BitString, BitString, BitString] = field(repr=False)

    @property
    def stages(self) -> dict:
        return dict(zip(("encoded", "marked", "mirrored", "expanded"), self.stage_log))


def encode_message(message: bytes, mode: Union[Encoding, str] = Encoding.RAW8) -> BitString:
    """Concatenate per-byte codes, MSB first: 7 bits each (ascii7) or 8 (raw8)."""
    mode = Encoding(mode)
    data = np.frombuffer(bytes(message), dtype=np.uint8)
    if mode is Encoding.ASCII7:
        bad = np.flatnonzero(data >= 128)
        if bad.size:
            pos = int(bad[0])
            raise EncodingError(pos, int(data[pos]), mode.value)
    bits = np.unpackbits(data).reshape(-1, 8)
    if mode is Encoding.ASCII7:
        bits = bits[:, 1:]
    return BitString._wrap(bits.reshape(-1).copy())


def pad_mark(s: BitString) -> BitString:
    """Append "1", the minimal binary form of the new length, then "1"."""
    length = len(s) + 1
    return s + "1" + format(length, "b") + "1"


def mirror(s: BitString) -> BitString:
    """Palindrome of length 2L-1: ``s`` then its first L-1 bits reversed."""
    if len(s) == 0:
        raise PreconditionError("cannot mirror an empty bit string")
    return BitString._wrap(np.concatenate([s.bits, s.bits[-2::-1]]))


def expanded_length(length: int, n: int = MAX_DIGEST_BITS) -> int:
    """Smallest positive multiple of lcm(512, n) that is >= ``length``."""
    unit = math.lcm(BLOCK_BITS, n)
    return max(1, -(-length // unit)) * unit


def expand_to_blocks(s: BitString, n: int = MAX_DIGEST_BITS) -> BitString:
    """Repeat ``s`` cyclically and truncate at the next block boundary."""
    if len(s) == 0:
        raise PreconditionError("cannot expand an empty bit string")
    return BitString._wrap(np.resize(s.bits, expanded_length(len(s), n)))


def normalize_bits(encoded: BitString, n: int = MAX_DIGEST_BITS) -> NormalizedInput:
    """Run the pipeline from an already encoded message."""
    check_digest_bits(n)
    marked = pad_mark(encoded)
    mirrored = mirror(marked)
    d = expand_to_blocks(mirrored, n)
    return NormalizedInput(d=d, x0=xor_fold(d, n), stage_log=(encoded, marked, mirrored, d))


def normalize(message: bytes, params: HashParams = HashParams()) -> NormalizedInput:
    return normalize_bits(encode_message(message, params.encoding), params.n)


def write_stages(norm: NormalizedInput, out: TextIO) -> None:
    """One ``name: bits`` line per stage, bits in the grouped text form."""
    for name, value in norm.stages.items():
        out.write(f"{name}: {value.to_text()}\n")
    out.write(f"x0: {norm.x0.to_text()}\n")


def read_stages(lines: Iterable[str]) -> Dict[str, BitString]:
    """Parse ``name: bits`` lines; blank lines and ``#`` comments are skipped."""
    stages = {}
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"line {number}: expected 'name: bits'")
        stages[name.strip()] = BitString.from_text(value)
    return stages
