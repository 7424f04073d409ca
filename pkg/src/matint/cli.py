"""Command-line front end: validate, solve, query, verify, export."""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .affine import as_fraction
from .errors import (
    DomainError,
    FingerprintMismatchError,
    InputError,
    MatintError,
    ValidationError,
)
from .serialization import (
    format_rational,
    load_instance,
    load_result,
    save_result,
)
from .solver import envelope_export, query, solve
from .verify import certify

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_INPUT = 2


def _parse_lambda(text: str, p: int):
    parts = [piece.strip() for piece in text.split(",")]
    if len(parts) != p:
        raise InputError(f"lambda needs {p} coordinates, got {len(parts)}")
    return tuple(as_fraction(piece) for piece in parts)


def cmd_validate(args) -> int:
    from .instance import validate_instance

    instance = load_instance(args.instance)
    report = validate_instance(instance)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_SEMANTIC


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if args.exact_requery:
        print(
            "note: --exact-requery changes reported values at query time only",
            file=sys.stderr,
        )
    result = solve(instance, args.epsilon, args.oracle, n_jobs=args.parallel)
    save_result(result, args.output)
    print(f"cells: {result.cell_count}")
    print(f"hyperplanes: {result.hyperplane_count}")
    print(f"distinct strategies: {len(result.distinct_strategies)}")
    print(f"oracle calls: {result.oracle_calls}")
    print(f"wall time: {result.wall_time:.3f}s")
    print(f"result written to {args.output}")
    return EXIT_OK


def cmd_query(args) -> int:
    instance = load_instance(args.instance)
    result = load_result(args.result)
    lam = _parse_lambda(getattr(args, "lambda"), instance.p)
    answer = query(result, instance, lam, exact_requery=args.exact_requery)
    removed = ",".join(str(e) for e in answer.strategy)
    print(f"remove {{{removed}}}; value {format_rational(answer.value)}; cell {answer.cell_index}")
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    result = load_result(args.result)
    report = certify(
        result, instance, samples=args.samples, seed=args.seed, exhaustive=args.exhaustive
    )
    for line in report.lines():
        print(line)
    print("verdict:", "pass" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_SEMANTIC


def _format_point(point) -> str:
    return "(" + " ".join(format_rational(x) for x in point) + ")"


def cmd_export(args) -> int:
    result = load_result(args.result)
    records = envelope_export(result)
    p = len(records[0].interior) if records else 0
    rows = []
    for record in records:
        for entry in record.strategies:
            strategy = "+".join(str(e) for e in entry.strategy)
            slopes = [format_rational(g) for g in entry.value_form.gradient]
            if p == 1:
                coords = [v[0] for v in record.vertices]
                rows.append(
                    [
                        record.index,
                        format_rational(min(coords)),
                        format_rational(max(coords)),
                        strategy,
                        format_rational(entry.value_form.constant),
                        slopes[0],
                        ";".join(format_rational(b) for b in record.breakpoints),
                    ]
                )
            else:
                rows.append(
                    [
                        record.index,
                        ";".join(_format_point(v) for v in record.vertices),
                        strategy,
                        format_rational(entry.value_form.constant),
                        *slopes,
                    ]
                )
    if p == 1:
        header = ["cell", "lambda_from", "lambda_to", "strategy", "constant", "slope", "breakpoints"]
    else:
        header = ["cell", "vertices", "strategy", "constant"] + [f"slope_{i}" for i in range(p)]
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        widths = [max(len(str(row[i])) for row in [header] + rows) for i in range(len(header))]
        for row in [header] + rows:
            print("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matint",
        description="Certified approximation of multi-parametric matroid interdiction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check the model assumptions of an instance file")
    p_validate.add_argument("instance")
    p_validate.set_defaults(func=cmd_validate)

    p_solve = sub.add_parser("solve", help="decompose the polytope and certify strategies per cell")
    p_solve.add_argument("instance")
    p_solve.add_argument("--epsilon", required=True, help="approximation slack, rational in (0,1)")
    p_solve.add_argument(
        "--oracle",
        default="brute",
        help="brute | partition-dp | synthetic:BETA (rational beta in (0,1])",
    )
    p_solve.add_argument("--output", required=True, help="path of the result file to write")
    p_solve.add_argument("--exact-requery", action="store_true")
    p_solve.add_argument("--parallel", type=int, default=1, metavar="N", help="per-cell worker processes")
    p_solve.set_defaults(func=cmd_solve)

    p_query = sub.add_parser("query", help="answer one parameter vector from a result file")
    p_query.add_argument("result")
    p_query.add_argument("instance")
    p_query.add_argument("--lambda", required=True, help="comma-separated rational coordinates")
    p_query.add_argument("--exact-requery", action="store_true",
                         help="report the exact value of the chosen strategy instead of the certified bound")
    p_query.set_defaults(func=cmd_query)

    p_verify = sub.add_parser("verify", help="certify a result file against exhaustive exact values")
    p_verify.add_argument("result")
    p_verify.add_argument("instance")
    p_verify.add_argument("--samples", type=int, default=200)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--exhaustive", action="store_true",
                          help="check crossings of all strategies' forms (one parameter only)")
    p_verify.set_defaults(func=cmd_verify)

    p_export = sub.add_parser("export", help="write the per-cell envelope data to stdout")
    p_export.add_argument("result")
    p_export.add_argument("--format", choices=("csv", "table"), default="csv")
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, FingerprintMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        for line in exc.report.lines():
            print(line)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except MatintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    raise SystemExit(main())
