import argparse
import json
import sys
from typing import Callable, List, Optional, TextIO

from .config import DEFAULT_UPB_RESTARTS, DEFAULT_UPB_TOL, resolve_upb_config, resolve_verify_config
from .constructions import (
    BasisSet,
    HolePattern,
    PartitionSpec,
    canonicalize_holes,
    compose_direct_sum,
    theorem1_construct,
    theorem2_construct,
)
from .documents import MalformedDocumentError, dumps_basis, load_basis
from .fixtures import FIXTURES, fixture_basis
from .notation import format_basis
from .partitions import enumerate_partitions
from .verification import verify_umeb, verify_upb


EXIT_OK = 0
EXIT_FAILED_VERDICT = 1
EXIT_BAD_INPUT = 2
EXIT_MALFORMED_DOCUMENT = 3


def _parse_int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of integers (got {text!r})") from None


def _write_basis(basis: BasisSet, out: str) -> TextIO:
    """
    Write the document to `out` ("-" for stdout).

    Returns the stream summary lines should go to, so stdout stays pure JSON
    when the document itself is written there.
    """
    text = dumps_basis(basis)
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return sys.stderr
    with open(out, "w", encoding="utf-8") as f:
        f.write(text)
    return sys.stdout


def _summary(stream: TextIO, basis: BasisSet, out: str) -> None:
    where = "stdout" if out == "-" else out
    print(f"▶ Wrote {len(basis)} states in C^{basis.d} x C^{basis.d_prime} to {where}.", file=stream, flush=True)


def cmd_construct_t1(args: argparse.Namespace) -> int:
    if args.mask:
        pattern = HolePattern.from_mask(args.mask.split("/"))
        if args.d is not None and args.d != pattern.d:
            raise ValueError(f"--d {args.d} does not match the mask's {pattern.d} rows")
        if args.dprime is not None and args.dprime != pattern.d_prime:
            raise ValueError(f"--dprime {args.dprime} does not match the mask's {pattern.d_prime} columns")
    else:
        if args.d is None or args.dprime is None:
            raise ValueError("--holes needs --d and --dprime")
        pattern = HolePattern.parse(args.d, args.dprime, args.holes)

    basis = theorem1_construct(pattern, pullback=not args.canonical)
    stream = _write_basis(basis, args.out)
    _summary(stream, basis, args.out)
    b = canonicalize_holes(pattern).b
    print(f"  pattern {'/'.join(pattern.to_mask())}", file=stream, flush=True)
    print(f"  canonical b = ({','.join(str(x) for x in b)})", file=stream, flush=True)
    return EXIT_OK


def cmd_construct_t2(args: argparse.Namespace) -> int:
    spec = PartitionSpec.from_parts(args.d, args.dprime, _parse_int_list(args.parts))
    basis = theorem2_construct(spec)
    stream = _write_basis(basis, args.out)
    _summary(stream, basis, args.out)
    print(f"  partition {spec.describe()}", file=stream, flush=True)
    return EXIT_OK


def cmd_compose(args: argparse.Namespace) -> int:
    left = load_basis(args.left)
    right = load_basis(args.right)
    basis = compose_direct_sum(left, right, args.offset, d_prime=args.dprime)
    stream = _write_basis(basis, args.out)
    _summary(stream, basis, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    basis = load_basis(args.input)
    config = resolve_verify_config(
        tol=args.tol,
        oracle_margin=args.oracle_margin,
        oracle_restarts=args.oracle_restarts,
        oracle_iters=args.oracle_iters,
        generic_trials=args.generic_trials,
        seed=args.seed,
        workers=args.workers,
    )
    if args.verbose:
        sys.stderr.write(f"▶ Verifying {len(basis)} states in C^{basis.d} x C^{basis.d_prime}...\n")
        sys.stderr.flush()
    report = verify_umeb(basis, config, verbose=args.verbose)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True), flush=True)
    return EXIT_OK if report.passed else EXIT_FAILED_VERDICT


def cmd_verify_upb(args: argparse.Namespace) -> int:
    basis = load_basis(args.input)
    config = resolve_upb_config(restarts=args.restarts, tol=args.upb_tol, seed=args.seed)
    result = verify_upb(basis.states, grid_resolution=config.restarts, tol=config.tol, seed=config.seed)
    report = {
        "passed": result.passed,
        "best_residual": result.best_residual,
        "restarts": result.restarts,
        "tol": result.tol,
        "seed": config.seed,
    }
    print(json.dumps(report, indent=2, sort_keys=True), flush=True)
    return EXIT_OK if result.passed else EXIT_FAILED_VERDICT


def cmd_partitions(args: argparse.Namespace) -> int:
    for spec in enumerate_partitions(args.d, args.dprime, ordered=args.ordered):
        print(f"{spec.describe()}: {spec.member_count} members", flush=True)
    return EXIT_OK


def cmd_fixtures(args: argparse.Namespace) -> int:
    basis = fixture_basis(args.name)
    stream = _write_basis(basis, args.out)
    _summary(stream, basis, args.out)
    return EXIT_OK


def cmd_show(args: argparse.Namespace) -> int:
    basis = load_basis(args.input)
    for line in format_basis(basis):
        print(line, flush=True)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umeb-builder",
        description=(
            "Construct unextendible maximally entangled bases (UMEBs) in C^d x C^d', "
            "compose them, and verify orthonormality, maximal entanglement and "
            "unextendibility. Bases are exchanged as JSON documents."
        ),
    )
    parser.add_argument("--tol", type=float, default=None, help="Exact-construction tolerance (default: 1e-9).")
    parser.add_argument(
        "--oracle-margin",
        type=float,
        default=None,
        help="An oracle value >= 1 - margin counts as an extension (default: 1e-6).",
    )
    parser.add_argument(
        "--oracle-restarts", type=int, default=None, help="Random restarts of the numeric oracle (default: 64)."
    )
    parser.add_argument(
        "--oracle-iters", type=int, default=None, help="Hill-climbing iterations per restart (default: 2000)."
    )
    parser.add_argument(
        "--generic-trials",
        type=int,
        default=None,
        help="Random combinations sampled for the complement's generic rank (default: 64, minimum 50).",
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed of every randomized check (default: 0).")
    parser.add_argument(
        "--workers", type=int, default=None, help="Threads used for oracle restarts (default: 1)."
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Print each verification step and its measured metric to stderr.",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct-t1", help="Hole-pattern construction: d(d'-1) states.")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--dprime", type=int, default=None)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--holes", type=str, help='Ignored entries as "row:col,row:col,...".')
    source.add_argument(
        "--mask", type=str, help='Pattern rows separated by "/", with "*" on the ignored entry, e.g. "*00/*00".'
    )
    p.add_argument(
        "--canonical",
        action="store_true",
        help="Emit the staircase basis in canonical coordinates instead of pulling it back.",
    )
    p.add_argument("--out", type=str, default="-", help="Output document path (default: stdout).")
    p.set_defaults(func=cmd_construct_t1)

    p = sub.add_parser("construct-t2", help="Partition construction: d(d'-r) states.")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--dprime", type=int, required=True)
    p.add_argument("--parts", type=str, required=True, help='Block widths, e.g. "4,5"; r = d\' - sum.')
    p.add_argument("--out", type=str, default="-", help="Output document path (default: stdout).")
    p.set_defaults(func=cmd_construct_t2)

    p = sub.add_parser("compose", help="Direct sum of two documents on disjoint column blocks.")
    p.add_argument("--left", type=str, required=True)
    p.add_argument("--right", type=str, required=True)
    p.add_argument("--offset", type=int, required=True, help="Column shift applied to the right document.")
    p.add_argument("--dprime", type=int, default=None, help="Output width (default: smallest that fits).")
    p.add_argument("--out", type=str, default="-", help="Output document path (default: stdout).")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("verify", help="Print a verification report; exit 0 iff the verdict is UMEB or MEB.")
    p.add_argument("--in", dest="input", type=str, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-upb", help="Search for a product state orthogonal to a product set.")
    p.add_argument("--in", dest="input", type=str, required=True)
    p.add_argument(
        "--restarts",
        type=int,
        default=None,
        help=f"Alternating-minimization restarts (default: {DEFAULT_UPB_RESTARTS}; env UMEB_BUILDER_UPB_RESTARTS).",
    )
    p.add_argument(
        "--upb-tol",
        type=float,
        default=None,
        help=f"Residual below which a product state counts as found (default: {DEFAULT_UPB_TOL}; env UMEB_BUILDER_UPB_TOL).",
    )
    p.set_defaults(func=cmd_verify_upb)

    p = sub.add_parser("partitions", help="List partition specs d' = a_1 + ... + a_s + r and member counts.")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--dprime", type=int, required=True)
    p.add_argument("--ordered", action="store_true", help="Treat every ordering of the parts as its own spec.")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("fixtures", help="Write a named reference basis.")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--out", type=str, default="-", help="Output document path (default: stdout).")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("show", help="Print each state of a document in ket notation.")
    p.add_argument("--in", dest="input", type=str, required=True)
    p.set_defaults(func=cmd_show)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except MalformedDocumentError as exc:
        sys.stderr.write(f"error: {exc}\n")
        sys.stderr.flush()
        return EXIT_MALFORMED_DOCUMENT
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        sys.stderr.flush()
        return EXIT_BAD_INPUT
