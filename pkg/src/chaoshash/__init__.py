"""Keyed hash function built on chaotic iterations of the bitwise negation map."""

from .bitcore import BitString, Configuration, hamming, reverse, rotate_left, to_hex, xor_fold
from .dynamics import Point, f_neg, g_neg_step, iterate, reach_strategy
from .errors import (
    ChaosHashError,
    DepthError,
    DimensionError,
    EncodingError,
    ExhaustedStrategyError,
    HashFileError,
    PreconditionError,
)
from .hasher import CANONICAL, LITERAL, Digest, IterationScheme, hash_bits, hash_file, hash_message
from .keystream import Strategy, UStream, build_strategy, build_u
from .preprocess import Encoding, HashParams, NormalizedInput, normalize

__version__ = "0.1.0"
