"""``bernpart`` command line.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage error,
3 internal-consistency error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from . import asymptotics as asy
from . import partitions as part
from .bigfloat import MAX_PRECISION, MIN_PRECISION, BigFloat, PrecisionError
from .exact_core import bernoulli, format_rational
from .report import VerificationReport

log = logging.getLogger("bernpart")

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_MAX = 200

CHECKS = (
    "rid2",
    "partition-sum",
    "exact-ratio",
    "difference-eq",
    "bessel-poly",
    "footnote",
    "sinc-identity",
    "sinc-limit",
    "sum-unity",
    "monotone",
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def parse_range(text: str) -> list[int]:
    """'7' -> [7]; '2..10' -> [2, ..., 10]."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/2, got {text!r}") from None


def resolve_precision(args: argparse.Namespace, default: int = asy.DEFAULT_PRECISION) -> int:
    if args.precision is not None:
        precision = args.precision
    elif os.environ.get("BERNPART_PRECISION"):
        try:
            precision = int(os.environ["BERNPART_PRECISION"])
        except ValueError:
            raise UsageError("BERNPART_PRECISION must be an integer") from None
    else:
        precision = default
    if not MIN_PRECISION <= precision <= MAX_PRECISION:
        raise UsageError(f"precision must be in [{MIN_PRECISION}, {MAX_PRECISION}], got {precision}")
    return precision


def check_cap(args: argparse.Namespace, value: int, what: str) -> None:
    if value > args.max and not args.allow_large:
        raise UsageError(f"{what} = {value} exceeds --max {args.max}; pass --allow-large to proceed")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def document(command: str, parameters: dict, results: dict, reports: Sequence[VerificationReport] = ()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "results": results,
        "reports": [r.to_dict() for r in reports],
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _csv_cell(value: Any, quote: bool) -> str:
    text = str(value)
    if quote or any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def dump_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], quoted: set[str]) -> str:
    """Fractions and other text columns named in ``quoted`` are always quoted."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v, h in quoted) for h, v in zip(header, row)))
    return "\n".join(lines) + "\n"


def reports_text(reports: Sequence[VerificationReport]) -> str:
    lines = []
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.check}  {params}  residual={r.residual}")
    return "\n".join(lines) + "\n"


def reports_csv(reports: Sequence[VerificationReport]) -> str:
    rows = [
        [r.check, json.dumps(r.params, sort_keys=True), str(r.passed).lower(), r.lhs, r.rhs, r.residual]
        for r in reports
    ]
    return dump_csv(
        ["check", "params", "pass", "lhs", "rhs", "residual"],
        rows,
        {"check", "params", "lhs", "rhs", "residual"},
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_bernoulli(args: argparse.Namespace) -> tuple[str, int]:
    if args.max_m < 1:
        raise UsageError(f"--max-m must be >= 1, got {args.max_m}")
    check_cap(args, args.max_m, "max-m")
    rows = [(m, 2 * m, format_rational(bernoulli(2 * m))) for m in range(1, args.max_m + 1)]
    if args.format == "json":
        results = {"rows": [{"m": m, "index": k, "value": v} for m, k, v in rows]}
        return dump_json(document("bernoulli", {"max_m": args.max_m}, results)), EXIT_OK
    if args.format == "csv":
        return dump_csv(["m", "index", "value"], rows, {"value"}), EXIT_OK
    width = len(str(args.max_m))
    return "".join(f"{m:>{width}}  {v}\n" for m, _, v in rows), EXIT_OK


def cmd_partition(args: argparse.Namespace) -> tuple[str, int]:
    ms = args.m_range
    if ms[0] < 2:
        raise UsageError("partitions start at m = 2 (|B_2| = 1/6 has none; see `bernpart bernoulli`)")
    check_cap(args, ms[-1], "m")
    rows = part.partition_rows(ms)
    inv = part.inverse_matrix(ms[-1])
    reports = [part.verify_partition_sum(m, inv) for m in ms]
    if args.format == "json":
        results = {
            "rows": [
                {
                    "m": r.m,
                    "terms": [{"n": n, "b": format_rational(b)} for n, b in r.terms],
                    "sum": format_rational(r.certified_sum),
                }
                for r in rows
            ]
        }
        params = {"m_min": ms[0], "m_max": ms[-1]}
        return dump_json(document("partition", params, results, reports)), EXIT_OK
    if args.format == "csv":
        table = [
            (r.m, n, format_rational(b), format_rational(r.certified_sum)) for r in rows for n, b in r.terms
        ]
        return dump_csv(["m", "n", "b", "sum"], table, {"b", "sum"}), EXIT_OK
    lines = []
    for r in rows:
        terms = " + ".join(format_rational(b) for b in r.values())
        lines.append(f"|B_{2 * r.m}|  {terms} = {format_rational(r.certified_sum)}")
    return "\n".join(lines) + "\n", EXIT_OK


def _verify_reports(check: str, args: argparse.Namespace) -> list[VerificationReport]:
    precision = resolve_precision(args)
    if check == "rid2":
        max_n = args.max_n or 100
        check_cap(args, max_n, "max-n")
        return [part.verify_rid2(n) for n in range(1, max_n + 1)]
    if check == "partition-sum":
        max_m = args.max_m or 40
        check_cap(args, max_m, "max-m")
        inv = part.inverse_matrix(max_m)
        return [part.verify_partition_sum(m, inv) for m in range(2, max_m + 1)] + [
            part.verify_inverse_identity(max_m),
            part.verify_closed_forms(max_m),
        ]
    if check == "exact-ratio":
        max_m = args.max_m or 40
        check_cap(args, max_m, "max-m")
        inv = part.inverse_matrix(max_m)
        return [
            part.verify_exact_ratio(m, n, inv) for m in range(2, max_m + 1) for n in range(2, m + 1)
        ]
    if check in ("difference-eq", "bessel-poly", "footnote"):
        max_n = args.max_n or 30
        check_cap(args, max_n, "max-n")
        fn: Callable[[int], VerificationReport] = {
            "difference-eq": asy.verify_difference_equation,
            "bessel-poly": asy.verify_bessel_closed_form,
            "footnote": asy.verify_footnote_form,
        }[check]
        if max_n < (3 if check == "difference-eq" else 2):
            raise UsageError(f"--max-n too small for {check}")
        return [fn(max_n)]
    if check == "sinc-identity":
        # float64 kernel unless a precision was asked for explicitly
        explicit = args.precision is not None or bool(os.environ.get("BERNPART_PRECISION"))
        x = args.x if args.x is not None else Fraction(1, 2)
        terms = args.terms or 100_000
        if terms < 1:
            raise UsageError("--terms must be >= 1")
        cfg = asy.SincCheckConfig(x, terms, precision if explicit else 15, args.tolerance)
        return [asy.verify_sinc_identity(cfg)]
    if check == "sinc-limit":
        x = args.x if args.x is not None else Fraction(4)
        if x < 0:
            raise UsageError("--x must be >= 0 for the sinc limit")
        ns = args.n or [10, 20, 40, 60]
        if min(ns) < 2:
            raise UsageError("sinc-limit needs n >= 2")
        reports = [asy.verify_sinc_limit(n, precision, x, args.tolerance) for n in ns]
        mags = [abs(float(r.residual.split("@")[0])) for r in reports]
        shrinking = all(b < a for a, b in zip(mags, mags[1:]))
        reports.append(
            VerificationReport(
                "sinc-limit:monotone",
                {"n": ns, "x": str(x)},
                shrinking,
                "|S_n(x) - sinc(sqrt x)|",
                "strictly decreasing in n",
                "0" if shrinking else "1",
            )
        )
        return reports
    if check == "sum-unity":
        count = args.N or 18
        if precision < 30:
            raise UsageError("sum-unity needs --precision >= 30")
        return [asy.sum_to_unity(count, precision)]
    if check == "monotone":
        max_m = args.max_m or 40
        check_cap(args, max_m, "max-m")
        reports = part.verify_row_properties(max_m)
        reports += [asy.verify_ratio_monotone(n, max_m, precision) for n in range(2, min(6, max_m - 1) + 1)]
        reports.append(asy.verify_a_ratio_decreasing(30, precision))
        reports.append(asy.verify_approximant_error_trend(10, precision))
        reports.append(asy.verify_sum_unity_decreasing(50, max(precision, 250)))
        return reports
    raise UsageError(f"unknown check {check!r}")  # pragma: no cover


def cmd_verify(args: argparse.Namespace) -> tuple[str, int]:
    checks = CHECKS if args.check == "all" else (args.check,)
    reports: list[VerificationReport] = []
    for check in checks:
        log.info("running %s", check)
        reports.extend(_verify_reports(check, args))
    passed = sum(r.passed for r in reports)
    code = EXIT_OK if passed == len(reports) else EXIT_FAILED
    if args.format == "json":
        params = {
            k: (str(v) if isinstance(v, Fraction) else v)
            for k, v in vars(args).items()
            if k in ("check", "max_n", "max_m", "N", "x", "terms", "n", "tolerance", "precision")
            and v is not None
        }
        results = {"passed": passed, "failed": len(reports) - passed, "total": len(reports)}
        return dump_json(document("verify", params, results, reports)), code
    if args.format == "csv":
        return reports_csv(reports), code
    summary = f"{passed}/{len(reports)} checks passed\n"
    return reports_text(reports) + summary, code


def cmd_asymptotics(args: argparse.Namespace) -> tuple[str, int]:
    precision = resolve_precision(args)
    ns = args.n_range
    if ns[0] < 2:
        raise UsageError("a(n) is defined for n >= 2")
    check_cap(args, ns[-1], "n")
    rows = [(n, asy.a_ratio(n, precision), asy.pn_polynomials(n)[n]) for n in ns]
    if args.format == "json":
        results = {
            "rows": [
                {
                    "n": n,
                    "a": a.to_sci(),
                    "p_n": str(p),
                    "p_n_coefficients": [format_rational(c) for c in p.coefficients],
                }
                for n, a, p in rows
            ]
        }
        params = {"n_min": ns[0], "n_max": ns[-1], "precision": precision}
        return dump_json(document("asymptotics", params, results)), EXIT_OK
    if args.format == "csv":
        table = [(n, a.mantissa_exponent(), str(p)) for n, a, p in rows]
        return dump_csv(["n", "a", "p_n"], table, {"p_n"}), EXIT_OK
    return "".join(f"{n}  {a.fixed()}  p_{n}(x) = {p} at x=pi^2\n" for n, a, p in rows), EXIT_OK


def cmd_approximant(args: argparse.Namespace) -> tuple[str, int]:
    precision = resolve_precision(args)
    m = args.m
    if m < 2:
        raise UsageError("--m must be >= 2")
    check_cap(args, m, "m")
    ns = args.n_range or list(range(2, m + 1))
    if ns[0] < 2 or ns[-1] > m:
        raise UsageError(f"--n must lie within 2..{m}")
    (row,) = part.partition_rows([m])
    table = []
    for n in ns:
        exact = row.term(n)
        exact_dec = BigFloat.from_rational(exact, precision)
        approx = asy.approximant(m, n, precision)
        rel = BigFloat((approx.value - exact_dec.value) / exact_dec.value, precision)
        table.append((m, n, format_rational(exact), exact_dec, approx, rel))
    if args.format == "json":
        results = {
            "rows": [
                {
                    "m": mm,
                    "n": n,
                    "exact": q,
                    "exact_decimal": e.to_sci(),
                    "approximant": a.to_sci(),
                    "relative_error": r.to_sci(),
                }
                for mm, n, q, e, a, r in table
            ]
        }
        params = {"m": m, "n_min": ns[0], "n_max": ns[-1], "precision": precision}
        return dump_json(document("approximant", params, results)), EXIT_OK
    if args.format == "csv":
        flat = [
            (mm, n, q, e.mantissa_exponent(), a.mantissa_exponent(), r.mantissa_exponent())
            for mm, n, q, e, a, r in table
        ]
        return (
            dump_csv(["m", "n", "exact", "exact_decimal", "approximant", "relative_error"], flat, {"exact"}),
            EXIT_OK,
        )
    lines = [f"{'m':>3} {'n':>3}  exact  ~  approximant  (relative error)"]
    for mm, n, q, e, a, r in table:
        lines.append(
            f"{mm:>3} {n:>3}  {q} = {e.mantissa_exponent()}  ~  {a.mantissa_exponent()}"
            f"  ({r.mantissa_exponent(3)})"
        )
    return "\n".join(lines) + "\n", EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision",
        type=int,
        default=argparse.SUPPRESS,
        help=f"significant digits (default {asy.DEFAULT_PRECISION}, env BERNPART_PRECISION)",
    )
    common.add_argument("--max", type=int, default=argparse.SUPPRESS, help=f"safety cap on m/n (default {DEFAULT_MAX})")
    common.add_argument("--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--allow-large", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="bernpart",
        description="Bernoulli partitions: exact tables and verification of their identities.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bernoulli", parents=[common], help="table of B_2m")
    p.add_argument("--max-m", type=int, default=10)
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("partition", parents=[common], help="partitions of |B_2m|")
    p.add_argument("m_range", nargs="?", type=parse_range, default=parse_range("2..10"), help="M or A..B")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", parents=[common], help="run a verifier")
    p.add_argument("check", choices=CHECKS + ("all",))
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-m", type=int)
    p.add_argument("--N", type=int, help="upper summation index for sum-unity")
    p.add_argument("--x", type=parse_fraction, help="sample point (rational)")
    p.add_argument("--terms", type=int, help="truncation length for sinc-identity")
    p.add_argument("--n", type=parse_int_list, help="comma-separated n values for sinc-limit")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asymptotics", parents=[common], help="a(n) = p_n(pi^2)")
    p.add_argument("n_range", nargs="?", type=parse_range, default=parse_range("2..5"))
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("approximant", parents=[common], help="exact b_m(n) vs asymptotic approximant")
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--n", dest="n_range", type=parse_range, help="N or A..B (default 2..m)")
    p.set_defaults(func=cmd_approximant)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (
        ("precision", None),
        ("max", DEFAULT_MAX),
        ("format", "text"),
        ("allow_large", False),
        ("verbose", False),
    ):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        out, code = args.func(args)
    except (UsageError, PrecisionError) as exc:
        print(f"bernpart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except part.CertificationError as exc:
        print(f"bernpart: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(out)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
