"""Command line entry point: ``liexp {exp,su-table,exceptional-table,check}``.

Exit codes: 0 success, 1 bad input or a table mismatch, 2 internal
inconsistency (a certificate that fails to replay).
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import OddPrime
from .bounds import ReplayError, RuleContext, exponent_interval, replay_interval
from .exceptional import DEFAULT_PRIMES, OutOfScope, crosscheck_table, exceptional_table, excluded_pairs
from .facts import DEFAULT_FACTS, FactBase
from .spaces import SpaceError, parse_space, render_space
from .tables import FORMATS, format_exceptional, format_su, su_rows

MAX_PRIME = 10**4


def _prime(text: str) -> OddPrime:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if p > MAX_PRIME:
        raise argparse.ArgumentTypeError(f"primes above {MAX_PRIME} are not supported")
    try:
        return OddPrime(p)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="liexp", description="Bounds on odd-primary homotopy exponents.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    e = sub.add_parser("exp", help="bound exp_p of a space expression")
    e.add_argument("space")
    e.add_argument("-p", "--prime", type=_prime, required=True)
    e.add_argument("--strict", action="store_true", help="only hand-checked rule instances")
    e.add_argument("--certificate", action="store_true", help="print the certificate trees as JSON")
    e.add_argument("--format", choices=("text", "json"), default="text")

    s = sub.add_parser("su-table", help="lower and upper bounds for SU(n)")
    s.add_argument("-p", "--prime", type=_prime, required=True)
    s.add_argument("--max-n", type=int, default=20)
    s.add_argument("--format", choices=FORMATS, default="text")

    t = sub.add_parser("exceptional-table", help="exponents of exceptional groups")
    t.add_argument("-p", "--prime", type=_prime, default=None)
    t.add_argument("--strict", action="store_true")
    t.add_argument("--format", choices=FORMATS, default="text")

    c = sub.add_parser("check", help="recompute the exceptional table and run self-checks")
    c.add_argument("--strict", action="store_true")
    return ap


def cmd_exp(args, out) -> int:
    try:
        space = parse_space(args.space)
        iv = exponent_interval(space, RuleContext(args.prime, strict=args.strict))
    except (SpaceError, OutOfScope) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    x = render_space(space)
    if args.format == "json" or args.certificate:
        doc = {"space": x, "p": args.prime.p, **iv.to_dict()}
        if not args.certificate:
            doc.pop("lower_certificate")
            doc.pop("upper_certificate")
        if args.format == "text":
            print(f"exp_{args.prime}({x}) {iv}", file=out)
        print(json.dumps(doc, indent=2, ensure_ascii=False), file=out)
    else:
        print(f"exp_{args.prime}({x}) {iv}", file=out)
    return 0


def cmd_su_table(args, out) -> int:
    if args.max_n < 2:
        print("error: --max-n must be at least 2", file=sys.stderr)
        return 1
    out.write(format_su(su_rows(args.prime, args.max_n), args.prime.p, args.format))
    return 0


def cmd_exceptional_table(args, out) -> int:
    primes = (args.prime.p,) if args.prime else DEFAULT_PRIMES
    for g, p in excluded_pairs(primes):
        print(f"note: ({g}, {p}) is a torsion case and is skipped", file=sys.stderr)
    rows = exceptional_table(primes, ctx_for=lambda p: RuleContext(p, strict=args.strict))
    out.write(format_exceptional(rows, args.format, symbolic=args.prime is None))
    return 0


def _self_checks(strict: bool, facts: FactBase) -> list[str]:
    """Fast invariants; returns a list of replay failures."""
    failures = []
    for p in (3, 5, 7, 11, 13):
        ctx = RuleContext(p, strict=strict, facts=facts)
        for expr in [f"SU({n})" for n in range(1, 25)] + [f"Sp({n})" for n in range(1, 12)] + \
                [f"Spin({n})" for n in range(3, 24)]:
            iv = exponent_interval(parse_space(expr), ctx)
            try:
                replay_interval(iv, facts)
            except ReplayError as e:
                failures.append(f"{expr} at p={p}: {e}")
    return failures


def run_check(strict: bool = False, facts: FactBase = DEFAULT_FACTS, out=None) -> int:
    out = out or sys.stdout
    report = crosscheck_table(strict=strict, facts=facts)
    for line in report.lines:
        lo, hi = line.got
        print(f"{line.group:3} p={line.p:<3} expected {list(line.expected)} got [{lo}, {hi}]  {line.status}",
              file=out)
    failures = _self_checks(strict, facts)
    for f in failures:
        print(f"replay failure: {f}", file=out)
    print(report.summary(), file=out)
    if report.replay_failures or failures:
        return 2
    return 0 if report.ok else 1


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.cmd == "exp":
        return cmd_exp(args, out)
    if args.cmd == "su-table":
        return cmd_su_table(args, out)
    if args.cmd == "exceptional-table":
        return cmd_exceptional_table(args, out)
    return run_check(args.strict, out=out)


if __name__ == "__main__":
    sys.exit(main())
