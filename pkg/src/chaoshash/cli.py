"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 input or encoding error,
3 internal assertion failure.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from pathlib import Path
from typing import List, Optional

from . import statlab, topology
from .bitcore import BitString
from .dynamics import Point
from .errors import ChaosHashError, DimensionError, EncodingError, HashFileError, PreconditionError
from .hasher import CANONICAL, LITERAL, applied_strategy, hash_file, hash_message
from .preprocess import Encoding, HashParams, encode_message, normalize_bits

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

SCHEMES = {"canonical": CANONICAL, "literal": LITERAL}
DEFAULT_BENCH_SIZES = [2**k for k in range(13, 21)]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=256, help="digest size in bits (multiple of 4, at most 256)")
    common.add_argument("--key", type=_u64, default=None, help="64-bit key; omit for the unkeyed mode")
    common.add_argument("--ascii7", action="store_true", help="encode bytes on 7 bits (ASCII input only)")
    common.add_argument("--scheme", choices=sorted(SCHEMES), default="canonical")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")

    parser = _Parser(prog="chaoshash", description="Chaotic-iteration keyed hash and its statistics harness.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("hash", parents=[common], help="hash files ('-' reads stdin)")
    p.add_argument("files", nargs="*")

    p = sub.add_parser("avalanche", parents=[common], help="one-bit toggle experiment")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--msg-bits", type=int, default=1000)

    p = sub.add_parser("uniformity", parents=[common], help="pooled hex-symbol chi-square")
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--msg-bits", type=int, default=1000)

    p = sub.add_parser("bench", parents=[common], help="wall time against message size")
    p.add_argument("--sizes", type=int, nargs="+", default=DEFAULT_BENCH_SIZES, help="message sizes in bits")
    p.add_argument("--repetitions", type=int, default=3)

    p = sub.add_parser("battery", parents=[common], help="hash several files and compare digests")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("trace", parents=[common], help="distance trace for a message and a one-bit variant")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--text")
    source.add_argument("--file")
    p.add_argument("--flip", type=int, default=0, help="index of the encoded message bit to toggle")
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--depth", type=int, default=topology.DEFAULT_DEPTH)
    return parser


def _params(args) -> HashParams:
    return HashParams(n=args.n, encoding=Encoding.ASCII7 if args.ascii7 else Encoding.RAW8, key=args.key)


def _cmd_hash(args, params, scheme, out) -> int:
    if not args.files:
        raise UsageError("hash needs at least one file ('-' for stdin)")
    status = EXIT_OK
    for name in args.files:
        try:
            if name == "-":
                if params.encoding is Encoding.ASCII7:
                    raise UsageError("stdin is hashed in raw8 mode only")
                digest = hash_message(sys.stdin.buffer.read(), params, scheme)
            else:
                digest = hash_file(name, params, scheme)
        except (HashFileError, EncodingError) as exc:
            print(f"chaoshash: {exc}", file=sys.stderr)
            status = EXIT_INPUT
            continue
        out.write(f"{digest.hex}  {name}\n")
    return status


def _cmd_avalanche(args, params, scheme, out) -> int:
    report = statlab.avalanche_experiment(args.trials, args.msg_bits, params, args.seed, args.threads, scheme)
    if args.format == "json":
        out.write(report.to_json())
    elif args.format == "csv":
        out.write(f"# seed={report.seed}\n")
        report.write_histogram_csv(out)
    else:
        out.write(
            f"seed {report.seed}\ntrials {report.trials}\nmessage_bits {report.message_bits}\n"
            f"digest_bits {report.digest_bits}\nB_min {report.B_min}\nB_max {report.B_max}\n"
            f"B_bar {report.B_bar:.4f}\nP {report.P:.4f}\n"
            f"delta_B {_fmt(report.delta_B)}\ndelta_P {_fmt(report.delta_P)}\nmode {report.mode}\n"
        )
    return EXIT_OK


def _fmt(value) -> str:
    return "NA" if value is None else f"{value:.4f}"


def _cmd_uniformity(args, params, scheme, out) -> int:
    result = statlab.uniformity_experiment(args.count, args.msg_bits, params, args.seed, args.threads, scheme)
    if args.format == "json":
        out.write(result.to_json(seed=args.seed))
    elif args.format == "csv":
        out.write(f"# seed={args.seed}\n")
        result.write_csv(out)
    else:
        counts = " ".join(f"{s}:{c}" for s, c in result.counts.items())
        out.write(f"seed {args.seed}\ndigests {args.count}\nchi2 {result.chi2:.4f}\ncounts {counts}\n")
    return EXIT_OK


def _cmd_bench(args, params, scheme, out) -> int:
    report = statlab.bench_linear(args.sizes, params, args.repetitions, args.seed, scheme)
    if args.format == "json":
        out.write(report.to_json())
    elif args.format == "csv":
        out.write(f"# seed={report.seed}\n")
        report.write_csv(out)
    else:
        out.write(f"seed {report.seed}\n")
        for row in report.rows:
            out.write(f"l={row.input_bits} iterations={row.iteration_count} time={row.wall_time:.6f}s\n")
        for l, ratio in report.doubling_ratios:
            out.write(f"T({2 * l})/T({l}) = {ratio:.3f}\n")
        out.write(f"slope {report.slope:.3e} s/bit\nlinearity {report.linearity:.5f}\n")
    return EXIT_OK


def _cmd_battery(args, params, scheme, out) -> int:
    inputs = []
    for name in args.files:
        try:
            data = Path(name).read_bytes()
        except OSError as exc:
            print(f"chaoshash: {name}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
        inputs.append((name, data, params))
    result = statlab.case_battery(inputs, scheme)
    if args.format == "json":
        out.write(result.to_json())
    elif args.format == "csv":
        result.write_csv(out)
        out.write("\n")
        result.write_distance_csv(out)
    else:
        for row in result.rows:
            out.write(f"{row.hex or 'ERROR ' + str(row.error)}  {row.label}\n")
        result.write_distance_csv(out)
    return EXIT_OK


def _cmd_trace(args, params, scheme, out) -> int:
    if args.text is not None:
        data = args.text.encode("utf-8")
    else:
        try:
            data = Path(args.file).read_bytes()
        except OSError as exc:
            raise HashFileError(args.file, exc.strerror) from exc
    encoded = encode_message(data, params.encoding)
    if not 0 <= args.flip < len(encoded):
        raise UsageError(f"--flip must be in [0, {len(encoded)})")
    bits = encoded.bits.copy()
    bits[args.flip] ^= 1
    points = []
    for message in (encoded, BitString(bits)):
        norm = normalize_bits(message, params.n)
        points.append(Point(applied_strategy(norm, params, scheme), norm.x0))
    trace = topology.divergence_trace(points[0], points[1], args.steps, args.depth)
    topology.write_trace_csv(trace, out)
    return EXIT_OK


COMMANDS = {
    "hash": _cmd_hash,
    "avalanche": _cmd_avalanche,
    "uniformity": _cmd_uniformity,
    "bench": _cmd_bench,
    "battery": _cmd_battery,
    "trace": _cmd_trace,
}


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        params = _params(args)
    except (UsageError, DimensionError, PreconditionError) as exc:
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_USAGE

    buffer = io.StringIO()
    try:
        status = COMMANDS[args.command](args, params, SCHEMES[args.scheme], buffer)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, DimensionError) as exc:
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChaosHashError as exc:
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"chaoshash: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    text = buffer.getvalue()
    if args.output:
        Path(args.output).write_text(text)
    else:
        with contextlib.suppress(BrokenPipeError):
            sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
