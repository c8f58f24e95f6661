"""Diffusion/confusion statistics, digest uniformity and complexity checks.

Random messages come from numpy's ``default_rng`` seeded with the pair
``(seed, trial)``: SeedSequence hashes that entropy into an independent
stream per trial, so results do not depend on scheduling or thread count.
"""

from __future__ import annotations

import csv
import gc
import json
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import median
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .bitcore import BitString, hamming
from .errors import ChaosHashError, PreconditionError
from .hasher import CANONICAL, Digest, IterationScheme, hash_bits, hash_message
from .preprocess import HashParams, expanded_length

SEED_LIMIT = 1 << 64
HEX_SYMBOLS = "0123456789ABCDEF"


def _check_seed(seed: int) -> None:
    if not 0 <= seed < SEED_LIMIT:
        raise PreconditionError(f"seed must be an unsigned 64-bit integer, got {seed}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_message(seed: int, trial: int, bits: int) -> BitString:
    rng = trial_rng(seed, trial)
    return BitString._wrap(rng.integers(0, 2, size=bits, dtype=np.uint8))


# -- avalanche ---------------------------------------------------------------


@dataclass(frozen=True)
class DiffusionStats:
    B_min: int
    B_max: int
    B_bar: float
    P: float
    delta_B: Optional[float]
    delta_P: Optional[float]


def stats_from_B(B_values: Sequence[int], n: int) -> DiffusionStats:
    """Min, max, mean changed bits, mean changed probability and their
    sample deviations (N - 1 denominator).  Deviations are None for N < 2."""
    B = np.asarray(B_values, dtype=np.float64)
    if B.size == 0:
        raise PreconditionError("no distances given")
    if B.min() < 0 or B.max() > n:
        raise PreconditionError(f"distances must lie in [0, {n}]")
    N = B.size
    B_bar = float(B.sum() / N)
    P = B_bar / n
    delta_B = delta_P = None
    if N >= 2:
        delta_B = math.sqrt(float(((B - B_bar) ** 2).sum()) / (N - 1))
        delta_P = math.sqrt(float(((B / n - P) ** 2).sum()) / (N - 1))
    return DiffusionStats(int(B.min()), int(B.max()), B_bar, P, delta_B, delta_P)


@dataclass(frozen=True)
class AvalancheReport:
    trials: int
    message_bits: int
    digest_bits: int
    B_values: Tuple[int, ...] = field(repr=False)
    B_min: int
    B_max: int
    B_bar: float
    P: float
    delta_B: Optional[float]
    delta_P: Optional[float]
    histogram: Dict[int, int]
    seed: int
    key: Optional[int] = None

    @property
    def mode(self) -> int:
        """Most frequent distance (smallest one on ties)."""
        return max(sorted(self.histogram), key=lambda b: self.histogram[b])

    def to_json(self) -> str:
        data = asdict(self)
        data["B_values"] = list(self.B_values)
        data["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return json.dumps(data, indent=2) + "\n"

    def write_histogram_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["distance", "count"])
        for distance, count in sorted(self.histogram.items()):
            writer.writerow([distance, count])


def _avalanche_trial(seed: int, trial: int, message_bits: int, params: HashParams, scheme) -> int:
    rng = trial_rng(seed, trial)
    bits = rng.integers(0, 2, size=message_bits, dtype=np.uint8)
    position = int(rng.integers(message_bits))
    before = hash_bits(BitString._wrap(bits.copy()), params, scheme)
    bits[position] ^= 1
    after = hash_bits(BitString._wrap(bits), params, scheme)
    return hamming(before.config, after.config)


def avalanche_experiment(
    trials: int,
    message_bits: int,
    params: HashParams = HashParams(),
    seed: int = 0,
    threads: int = 1,
    scheme: IterationScheme = CANONICAL,
) -> AvalancheReport:
    """Hash random messages before and after toggling one random bit."""
    if trials < 1 or message_bits < 1:
        raise PreconditionError("trials and message_bits must be positive")
    _check_seed(seed)

    def run(trial: int) -> int:
        return _avalanche_trial(seed, trial, message_bits, params, scheme)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            B = list(pool.map(run, range(trials)))
    else:
        B = [run(t) for t in range(trials)]

    stats = stats_from_B(B, params.n)
    return AvalancheReport(
        trials=trials,
        message_bits=message_bits,
        digest_bits=params.n,
        B_values=tuple(B),
        histogram=dict(sorted(Counter(B).items())),
        seed=seed,
        key=params.key,
        **asdict(stats),
    )


# -- uniformity --------------------------------------------------------------


@dataclass(frozen=True)
class UniformityResult:
    counts: Dict[str, int]
    chi2: float

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def max_ratio(self) -> float:
        """Largest symbol count over the uniform expectation."""
        return max(self.counts.values()) / (self.total / 16)

    def to_json(self, **extra) -> str:
        data = {**extra, "counts": self.counts, "chi2": self.chi2, "total": self.total}
        return json.dumps(data, indent=2) + "\n"

    def write_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["symbol", "count"])
        writer.writerows(self.counts.items())


def nibble_uniformity(digests: Sequence) -> UniformityResult:
    """Pooled hex-symbol counts and Pearson chi-square against uniform."""
    hexes = [d.hex if isinstance(d, Digest) else str(d).upper() for d in digests]
    if not hexes:
        raise PreconditionError("no digests given")
    pooled = Counter("".join(hexes))
    counts = {s: pooled.get(s, 0) for s in HEX_SYMBOLS}
    expected = sum(counts.values()) / 16
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    return UniformityResult(counts, chi2)


def uniformity_experiment(
    count: int,
    message_bits: int,
    params: HashParams = HashParams(),
    seed: int = 0,
    threads: int = 1,
    scheme: IterationScheme = CANONICAL,
) -> UniformityResult:
    _check_seed(seed)

    def run(trial: int) -> Digest:
        return hash_bits(random_message(seed, trial, message_bits), params, scheme)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            digests = list(pool.map(run, range(count)))
    else:
        digests = [run(t) for t in range(count)]
    return nibble_uniformity(digests)


# -- complexity --------------------------------------------------------------


def carrier_length_bound(l: int) -> int:
    """2l + 2*ceil(log2(l+1)) + 515."""
    # ceil(log2(m)) == (m - 1).bit_length() for m >= 1
    return 2 * l + 2 * l.bit_length() + 515


@dataclass(frozen=True)
class IterationCount:
    message_bits: int
    stages: Tuple[int, int, int, int]
    d_bits: int
    iterations: int
    bound: int

    @property
    def slack(self) -> int:
        return self.bound - self.d_bits

    @property
    def within_bound(self) -> bool:
        return self.d_bits <= self.bound


def iteration_count(l: int, n: int = 256, scheme: IterationScheme = CANONICAL) -> IterationCount:
    """Trace the carrier length symbolically for an encoded message of ``l`` bits.

    ``stages`` lists the lengths after appending the first "1", after the
    length block and trailing "1", after mirroring, and after expansion.
    """
    if l < 0:
        raise PreconditionError("message length must be non-negative")
    marked = l + 1 + (l + 1).bit_length() + 1
    mirrored = 2 * marked - 1
    d_bits = expanded_length(mirrored, n)
    return IterationCount(
        message_bits=l,
        stages=(l + 1, marked, mirrored, d_bits),
        d_bits=d_bits,
        iterations=scheme.steps(d_bits),
        bound=carrier_length_bound(l),
    )


@dataclass(frozen=True)
class BenchRow:
    input_bits: int
    iteration_count: int
    d_bits: int
    wall_time: float
    samples: Tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class BenchReport:
    rows: List[BenchRow]
    slope: float
    linearity: float
    seed: int

    @property
    def per_bit_cost(self) -> List[float]:
        return [r.wall_time / r.input_bits for r in self.rows]

    @property
    def doubling_ratios(self) -> List[Tuple[int, float]]:
        """T(2l)/T(l) for each consecutive pair of sizes that doubles.

        Each ratio is the median over repetitions of the ratio between two
        back-to-back timings, which cancels slow drifts in machine speed.
        """
        out = []
        for a, b in zip(self.rows, self.rows[1:]):
            if b.input_bits == 2 * a.input_bits:
                if a.samples and len(a.samples) == len(b.samples):
                    ratio = median(tb / ta for ta, tb in zip(a.samples, b.samples))
                else:
                    ratio = b.wall_time / a.wall_time
                out.append((a.input_bits, ratio))
        return out

    def to_json(self) -> str:
        data = {
            "seed": self.seed,
            "rows": [
                {k: v for k, v in asdict(r).items() if k != "samples"} for r in self.rows
            ],
            "timing": {
                "slope": self.slope,
                "linearity": self.linearity,
                "per_bit_cost": self.per_bit_cost,
                "doubling_ratios": [{"input_bits": l, "ratio": r} for l, r in self.doubling_ratios],
            },
        }
        return json.dumps(data, indent=2) + "\n"

    def write_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["input_bits", "iteration_count", "d_bits", "wall_time"])
        for r in self.rows:
            writer.writerow([r.input_bits, r.iteration_count, r.d_bits, repr(r.wall_time)])


def bench_linear(
    sizes: Sequence[int],
    params: HashParams = HashParams(),
    repetitions: int = 3,
    seed: int = 0,
    scheme: IterationScheme = CANONICAL,
) -> BenchReport:
    """Median wall time of end-to-end hashing for each message size in bits."""
    if repetitions < 3:
        raise PreconditionError("at least 3 repetitions are needed for a median")
    if list(sizes) != sorted(sizes) or any(l < 4096 for l in sizes):
        raise PreconditionError("sizes must be ascending and at least 4096 bits (512 bytes)")
    _check_seed(seed)
    if time.get_clock_info("perf_counter").resolution <= 0:
        raise ChaosHashError("no usable high-resolution timer")

    messages = [random_message(seed, index, l) for index, l in enumerate(sizes)]
    timings = [[] for _ in sizes]
    digests = [None] * len(sizes)
    # round-robin over sizes so a burst of machine noise hits every size once
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repetitions):
            for index, message in enumerate(messages):
                start = time.perf_counter()
                digests[index] = hash_bits(message, params, scheme)
                timings[index].append(time.perf_counter() - start)
    finally:
        if gc_was_enabled:
            gc.enable()

    rows = []
    for l, digest, times in zip(sizes, digests, timings):
        expected = iteration_count(l, params.n, scheme)
        if digest.iterations != expected.iterations:
            raise AssertionError(
                f"instrumented {digest.iterations} iterations for l={l}, traced {expected.iterations}"
            )
        rows.append(BenchRow(l, digest.iterations, expected.d_bits, median(times), tuple(times)))

    if len(rows) >= 2:
        x = np.array([r.input_bits for r in rows], dtype=float)
        y = np.array([r.wall_time for r in rows])
        slope, intercept = np.polyfit(x, y, 1)
        residual = y - (slope * x + intercept)
        total = ((y - y.mean()) ** 2).sum()
        linearity = float(1 - (residual**2).sum() / total) if total > 0 else 1.0
    else:
        slope, linearity = rows[0].wall_time / rows[0].input_bits, 1.0
    return BenchReport(rows, float(slope), linearity, seed)


# -- case battery ------------------------------------------------------------


@dataclass(frozen=True)
class BatteryRow:
    label: str
    hex: Optional[str]
    error: Optional[str] = None


@dataclass(frozen=True)
class BatteryResult:
    rows: List[BatteryRow]
    # distances[i][j] is None when either digest is missing or sizes differ
    distances: List[List[Optional[int]]]

    def write_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["label", "digest", "error"])
        for r in self.rows:
            writer.writerow([r.label, r.hex or "", r.error or ""])

    def write_distance_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["label_a", "label_b", "hamming"])
        for i, a in enumerate(self.rows):
            for j in range(i + 1, len(self.rows)):
                d = self.distances[i][j]
                writer.writerow([a.label, self.rows[j].label, "" if d is None else d])

    def to_json(self) -> str:
        return json.dumps({"rows": [asdict(r) for r in self.rows], "distances": self.distances}, indent=2) + "\n"


def case_battery(inputs: Sequence[Tuple[str, bytes, HashParams]], scheme: IterationScheme = CANONICAL) -> BatteryResult:
    """Hash every labelled input and tabulate pairwise digest distances."""
    rows, digests = [], []
    for label, message, params in inputs:
        try:
            digest = hash_message(message, params, scheme)
        except ChaosHashError as exc:
            rows.append(BatteryRow(label, None, str(exc)))
            digests.append(None)
        else:
            rows.append(BatteryRow(label, digest.hex))
            digests.append(digest)
    distances = [
        [
            hamming(a.config, b.config) if a is not None and b is not None and a.n == b.n else None
            for b in digests
        ]
        for a in digests
    ]
    return BatteryResult(rows, distances)
