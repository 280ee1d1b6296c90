"""Command-line front end.

Exit codes: 0 success, 1 validation or property failure, 2 parse/IO error,
3 domain-size guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cones import enumerate_mescs
from .core import Domain, Gamble, InvariantViolation, MassFunction, expectation
from .documents import (
    ParseError,
    extremes_to_json,
    fan_to_dot,
    fan_to_json,
    frac_decimal,
    frac_str,
    load_document,
    parse_rational,
)
from .extremes import build_fan, enumerate_extremes, lower_expectation, upper_expectation
from .oracle import DomainTooLargeError, cross_check

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_TOO_LARGE = 3


def _render(value: Fraction, decimal: bool) -> str:
    return frac_decimal(value) if decimal else frac_str(value)


def _load_pbox(path: str):
    doc = load_document(path)
    return doc.to_pbox()


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        pbox = _load_pbox(args.file)
    except InvariantViolation as exc:
        print("INVALID p-box:")
        for v in exc.violations:
            print(f"  {v}")
        return EXIT_INVALID
    print(f"OK: valid p-box on {pbox.n} points")
    return EXIT_OK


def cmd_extremes(args: argparse.Namespace) -> int:
    pbox = _load_pbox(args.file)
    points = enumerate_extremes(pbox, args.method)
    if args.format == "json":
        print(json.dumps(extremes_to_json(pbox, points), indent=2))
        return EXIT_OK
    print(f"{len(points)} extreme point(s) (method={args.method})")
    for k, p in enumerate(points, start=1):
        f_vals = " ".join(_render(v, args.decimal) for v in p.cdf.values)
        m_vals = " ".join(_render(v, args.decimal) for v in p.mass().values)
        print(f"extreme {k}:")
        print(f"  F: {f_vals}")
        print(f"  p: {m_vals}")
        print(f"  witnesses ({len(p.witnesses)}):")
        for g in p.witnesses:
            print(f"    {g.describe()}")
    return EXIT_OK


def cmd_fan(args: argparse.Namespace) -> int:
    pbox = _load_pbox(args.file)
    fan = build_fan(pbox)
    wrote = False
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(fan_to_dot(fan))
        print(f"wrote DOT graph to {args.dot}")
        wrote = True
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(fan_to_json(fan), fh, indent=2)
            fh.write("\n")
        print(f"wrote JSON graph to {args.json}")
        wrote = True
    if not wrote:
        print(fan_to_dot(fan), end="")
    cross = sum(1 for e in fan.edges if e.cross)
    print(
        f"fan: {len(fan.nodes)} cones, {len(fan.edges)} edges "
        f"({cross} cross-point), {len(fan.extremes)} extreme points"
    )
    return EXIT_OK


def _parse_vector(raw: str, n: int, what: str) -> tuple[Fraction, ...]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if len(parts) != n:
        raise ParseError(f"{what} needs {n} values, got {len(parts)}")
    return tuple(parse_rational(p) for p in parts)


def cmd_bounds(args: argparse.Namespace) -> int:
    pbox = _load_pbox(args.file)
    values = _parse_vector(args.gamble, pbox.n, "--gamble")
    h = Gamble(pbox.domain, values)
    if args.at_distribution:
        masses = _parse_vector(args.at_distribution, pbox.n, "--at-distribution")
        dist = MassFunction(pbox.domain, masses)
        print(f"expectation at given masses: {_render(expectation(dist, h), args.decimal)}")
    low_val, low_pt = lower_expectation(h, pbox)
    up_val, up_pt = upper_expectation(h, pbox)
    print(f"lower: {_render(low_val, args.decimal)}")
    print(f"  at F: {' '.join(_render(v, args.decimal) for v in low_pt.cdf.values)}")
    print(f"upper: {_render(up_val, args.decimal)}")
    print(f"  at F: {' '.join(_render(v, args.decimal) for v in up_pt.cdf.values)}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    pbox = _load_pbox(args.file)
    report = cross_check(pbox, trials=args.trials, seed=args.seed)
    print(report.render())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_enumerate_mescs(args: argparse.Namespace) -> int:
    domain = Domain.of_size(args.n)
    count = 0
    for g in enumerate_mescs(domain):
        print(g.describe())
        count += 1
    print(f"{count} structural generator families for n={args.n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbox",
        description="Extreme points and exact expectation bounds of p-boxes on finite domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a p-box document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("extremes", help="list all extreme points")
    p.add_argument("file")
    p.add_argument("--method", choices=("structural", "bfs"), default="structural")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--decimal", action="store_true", help="approximate decimal rendering")
    p.set_defaults(func=cmd_extremes)

    p = sub.add_parser("fan", help="export the cone adjacency graph")
    p.add_argument("file")
    p.add_argument("--dot", metavar="OUT", help="write Graphviz DOT to OUT")
    p.add_argument("--json", metavar="OUT", help="write JSON graph to OUT")
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("bounds", help="lower/upper expectation of a gamble")
    p.add_argument("file")
    p.add_argument("--gamble", required=True, help="comma-separated rational values")
    p.add_argument(
        "--at-distribution",
        metavar="MASSES",
        help="also print the expectation at these comma-separated masses",
    )
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("check", help="cross-check against the brute-force oracle")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate-mescs", help="dump structural generator families")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate_mescs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainTooLargeError as exc:
        print(f"domain too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return code


if __name__ == "__main__":
    sys.exit(main())
