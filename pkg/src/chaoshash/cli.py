"""``chaoshash`` command line.

Exit codes: 0 success, 1 verification or property failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import analysis, pipeline
from .dynamics import CellState, ContractError, PhasePoint, Strategy, f0, identity, orbit
from .metric import distance
from .rng import SplitMix64

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 already; keep its message format
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaoshash", description="Chaotic-iterations hash function and chaos analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("hash", help="hash a file or standard input")
    p.add_argument("file", nargs="?", default="-", help="input file, '-' for stdin")
    p.add_argument("--mode", choices=["ascii7", "bytes"], default="ascii7")
    p.add_argument("--out", choices=["hex", "bin"], default="hex")

    p = sub.add_parser("vectors", help="golden-vector files")
    vsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = vsub.add_parser("verify", help="recompute every digest of a JSON Lines vector file")
    v.add_argument("file")

    p = sub.add_parser("analyze", help="run a chaos-analysis experiment")
    asub = p.add_subparsers(dest="experiment", required=True, parser_class=_Parser)

    a = asub.add_parser("avalanche")
    a.add_argument("--trials", type=_positive, required=True)
    a.add_argument("--msg-len", type=_positive, required=True)
    a.add_argument("--seed", type=_nonneg, required=True)
    a.add_argument("--workers", type=_positive, default=1)

    a = asub.add_parser("sensitivity")
    a.add_argument("--n", type=_positive, required=True)
    a.add_argument("--delta", type=_fraction, required=True)
    a.add_argument("--points", type=_positive, required=True)
    a.add_argument("--seed", type=_nonneg, default=0)

    a = asub.add_parser("expansivity")
    a.add_argument("--n", type=_positive, required=True)
    a.add_argument("--max-prefix", type=_nonneg, required=True)
    a.add_argument("--max-period", type=_positive, required=True)
    a.add_argument("--horizon", type=_nonneg, required=True)
    a.add_argument("--sample", type=_positive, default=None, help="check this many random pairs instead of all")
    a.add_argument("--seed", type=_nonneg, default=0)

    a = asub.add_parser("continuity")
    a.add_argument("--n", type=_positive, required=True)
    a.add_argument("--pairs", type=_positive, required=True)
    a.add_argument("--m", type=_positive, required=True)
    a.add_argument("--seed", type=_nonneg, default=0)

    for a in asub.choices.values():
        a.add_argument("--json", type=Path, default=None, help="write the report here")

    p = sub.add_parser("simulate", help="print an orbit of G_f")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--steps", type=_nonneg, required=True)
    p.add_argument("--f", choices=["f0", "identity"], default="f0")
    return parser


# -- hash / vectors -----------------------------------------------------------


def cmd_hash(args: argparse.Namespace) -> int:
    try:
        data = sys.stdin.buffer.read() if args.file == "-" else Path(args.file).read_bytes()
    except OSError as exc:
        print(f"chaoshash: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        digest = pipeline.hash(data, args.mode)
    except pipeline.EncodingError as exc:
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out == "bin":
        sys.stdout.buffer.write(digest.to_bytes())
        sys.stdout.flush()
    else:
        print(digest.hex)
    return EXIT_OK


def vector_bytes(message: str) -> bytes:
    """Bytes of a vector-file message: each code point 0..255 is one byte."""
    return message.encode("latin-1")


def read_vectors(path: Path) -> list[tuple[int, dict[str, Any]]]:
    """Parse a vector file into ``(line number, record)`` pairs; ``UsageError`` names a bad line."""
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                message, mode, digest = record["message"], record["mode"], record["digest"]
                if not isinstance(message, str) or mode not in ("ascii7", "bytes"):
                    raise ValueError("bad field types")
                if len(digest) != 64 or digest.upper() != digest:
                    raise ValueError("digest is not 64 uppercase hex characters")
                int(digest, 16)
                vector_bytes(message)
            except (ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"line {lineno}: malformed vector ({exc})") from exc
            records.append((lineno, record))
    return records


def cmd_vectors(args: argparse.Namespace) -> int:
    try:
        records = read_vectors(Path(args.file))
    except OSError as exc:
        print(f"chaoshash: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"chaoshash: {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    mismatched = []
    for lineno, record in records:
        try:
            got = pipeline.hash(vector_bytes(record["message"]), record["mode"]).hex
        except pipeline.EncodingError as exc:
            print(f"chaoshash: {args.file}: line {lineno}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if got != record["digest"]:
            mismatched.append(lineno)
            print(f"line {lineno}: expected {record['digest']} got {got}")
    if mismatched:
        print(f"{len(mismatched)} of {len(records)} vectors mismatched: lines {', '.join(map(str, mismatched))}")
        return EXIT_FAIL
    print(f"{len(records)} vectors ok")
    return EXIT_OK


# -- analyze ------------------------------------------------------------------


def _write_report(path: Path | None, report: dict[str, Any]) -> None:
    if path is not None:
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _analyze_avalanche(args: argparse.Namespace) -> tuple[bool, dict[str, Any], str]:
    report = analysis.avalanche_experiment(args.trials, args.msg_len, args.seed, workers=args.workers)
    summary = (
        f"avalanche: {report.trials} trials, mean {report.mean}, stddev {report.stddev}, "
        f"min {report.min}, max {report.max}"
    )
    return report.all_changed, report.to_json(), summary


def _analyze_sensitivity(args: argparse.Namespace) -> tuple[bool, dict[str, Any], str]:
    if args.delta <= 0:
        raise UsageError("--delta must be positive")
    rng = SplitMix64(args.seed)
    reports = []
    ok = True
    for _ in range(args.points):
        x = analysis.random_point(rng, args.n)
        try:
            reports.append(analysis.sensitivity_witness(x, args.delta).to_json())
        except analysis.PropertyViolation:
            ok = False
    ok = ok and all(r["achieved_separation"] == args.n for r in reports)
    out = {
        "n": args.n,
        "delta": f"{args.delta.numerator}/{args.delta.denominator}",
        "points": args.points,
        "seed": str(args.seed),
        "all_separated": ok,
        "reports": reports,
    }
    separated = sum(r["achieved_separation"] == args.n for r in reports)
    return ok, out, f"sensitivity: {separated}/{args.points} witnesses separated all {args.n} cells"


def _analyze_expansivity(args: argparse.Namespace) -> tuple[bool, dict[str, Any], str]:
    report = analysis.expansivity_scan(
        args.n, args.max_prefix, args.max_period, args.horizon, sample=args.sample, seed=args.seed
    )
    summary = (
        f"expansivity: {report.pairs_checked} pairs, min max-separation {report.min_max_separation}, "
        f"{len(report.failures)} failures, {len(report.sharp_failures)} sharp-claim failures"
    )
    return report.ok, report.to_json(), summary


def _analyze_continuity(args: argparse.Namespace) -> tuple[bool, dict[str, Any], str]:
    rng = SplitMix64(args.seed)
    f = f0(args.n)
    failures = []
    for i in range(args.pairs):
        x, y = analysis.random_continuity_pair(rng, args.n, args.m)
        if not analysis.continuity_prefix_check(f, x, y, args.m):
            failures.append(i)
    out = {"n": args.n, "pairs": args.pairs, "m": args.m, "seed": str(args.seed), "failures": failures}
    return not failures, out, f"continuity: {args.pairs - len(failures)}/{args.pairs} pairs passed"


_EXPERIMENTS = {
    "avalanche": _analyze_avalanche,
    "sensitivity": _analyze_sensitivity,
    "expansivity": _analyze_expansivity,
    "continuity": _analyze_continuity,
}


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        ok, report, summary = _EXPERIMENTS[args.experiment](args)
    except (ContractError, UsageError, analysis.BudgetExceeded) as exc:
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_report(args.json, report)
    print(summary + ("" if ok else "  [PROPERTY VIOLATED]"))
    return EXIT_OK if ok else EXIT_FAIL


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        if args.n > 16:
            raise ContractError("simulate supports at most 16 cells")
        state = CellState.from_string(args.state)
        if state.n != args.n:
            raise ContractError(f"state has {state.n} cells, expected {args.n}")
        start = PhasePoint(Strategy.parse(args.strategy), state)
    except ContractError as exc:
        print(f"chaoshash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    f = f0(args.n) if args.f == "f0" else identity(args.n)
    for t, point in enumerate(orbit(f, start, args.steps)):
        print(f"{t} {point.strategy.head()} {point.state} {distance(start, point).to_decimal()}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"hash": cmd_hash, "vectors": cmd_vectors, "analyze": cmd_analyze, "simulate": cmd_simulate}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
