"""Command-line interface: ``certify``, ``check`` and ``oracle``.

Exit codes:

    0  success
    1  usage, parse or dimension error
    2  solver failure
    3  generated certificate invalid (including floating-point breakage)
    4  certificate rejected by ``check``
    5  oracle enumeration cap exceeded

Solver modules are imported lazily so that ``check`` runs on the checker
alone.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .certificates import CertificateError, check_certificate
from .ext import format_ext, parse_rat
from .io import ParseError, format_query, parse_certificate, parse_model, parse_query, write_certificate
from .mdp import ModelError

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_INVALID_GENERATED, EXIT_REJECTED, EXIT_CAP = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rat(token: str) -> Fraction:
    try:
        return parse_rat(token)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_model(path: str):
    try:
        return parse_model(_read(path))
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None
    except ModelError as e:
        raise UsageError(f"{path}: " + "; ".join(e.diagnostics)) from None


def _query(args, bound="both"):
    try:
        q = parse_query(args.query, bound, getattr(args, "epsilon", None) or Fraction(1, 10 ** 6))
    except (ValueError, CertificateError) as e:
        raise UsageError(str(e)) from None
    return q


def _out_paths(out: str, bounds: List[str]) -> List[str]:
    if len(bounds) == 1:
        return [out]
    root, ext = os.path.splitext(out)
    return [f"{root}.{b}{ext or '.txt'}" for b in bounds]


def _summary(m, c) -> str:
    lines = [f"{c.query.bound} bound ({c.kind}):"]
    lines += [f"  {m.state_name(s)} = {format_ext(v)}" for s, v in enumerate(c.x)]
    return "\n".join(lines)


def cmd_certify(args) -> int:
    from .certificates.generate import CertificateGenerationError, generate_certificates
    from .solvers.config import FloatingPointBreakage, SolverConfig, SolverError

    m = _load_model(args.model)
    q = _query(args, args.bound)
    if q.target not in m.labels:
        raise UsageError(f"unknown label {q.target!r}")
    try:
        cfg = SolverConfig(
            epsilon=args.epsilon,
            gamma=args.gamma,
            rounding=args.rounding,
            precision_bits=args.precision_bits,
            method=args.method,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        certs = generate_certificates(m, q, cfg)
    except FloatingPointBreakage as e:
        print(f"floating-point breakage: {e}", file=sys.stderr)
        return EXIT_INVALID_GENERATED
    except CertificateGenerationError as e:
        print(str(e), file=sys.stderr)
        if e.verdict is not None:
            _print_failures(e.verdict)
        return EXIT_INVALID_GENERATED
    except SolverError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    print(f"query: {format_query(q)}")
    paths = _out_paths(args.out, [c.query.bound for c in certs]) if args.out else [None] * len(certs)
    for c, path in zip(certs, paths):
        print(_summary(m, c))
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(write_certificate(c))
            print(f"  written to {path}")
    return EXIT_OK


def _fmt(v) -> str:
    return v if isinstance(v, str) else format_ext(v)


def _print_failures(verdict) -> None:
    for f in verdict.failures:
        print(f"{f.condition} {f.state} {_fmt(f.lhs)} {_fmt(f.rhs)}", file=sys.stderr)
    if verdict.truncated:
        print("# further failures omitted", file=sys.stderr)


def cmd_check(args) -> int:
    m = _load_model(args.model)
    try:
        c = parse_certificate(_read(args.certificate))
        verdict = check_certificate(m, c)
    except CertificateError as e:
        raise UsageError(f"{args.certificate}: {e}") from None
    if verdict.valid:
        print(f"valid {c.kind} certificate")
        return EXIT_OK
    _print_failures(verdict)
    return EXIT_REJECTED


def cmd_oracle(args) -> int:
    from .oracle import OracleCapExceeded, optimal_exact

    m = _load_model(args.model)
    q = _query(args)
    if q.target not in m.labels:
        raise UsageError(f"unknown label {q.target!r}")
    try:
        res = optimal_exact(m, q.objective, q.target, q.semantics or "inf", cap=args.cap)
    except OracleCapExceeded as e:
        print(str(e), file=sys.stderr)
        return EXIT_CAP
    for s, v in enumerate(res.values):
        print(f"{m.state_name(s)} = {format_ext(v)}")
    print("strategy: " + " ".join(
        f"{m.state_name(s)}:{m.action_name(s, a)}" for s, a in enumerate(res.strategy)
    ))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from .oracle import DEFAULT_CAP

    p = _Parser(prog="mdpcert", description="Certified bounds for finite MDPs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("certify", help="compute bounds and write certificates")
    c.add_argument("--model", required=True)
    c.add_argument("--query", required=True, help="e.g. 'Pmax=? [F target]'")
    c.add_argument("--bound", choices=["lower", "upper", "both"], default="both")
    c.add_argument("--method", choices=["pi", "ii"], default="pi")
    c.add_argument("--epsilon", type=_rat, default=Fraction(1, 10 ** 6))
    c.add_argument("--gamma", type=_rat, default=None)
    c.add_argument("--rounding", choices=["none", "safe"], default="safe")
    c.add_argument("--precision-bits", type=int, default=53)
    c.add_argument("--out", help="certificate path; with --bound both, .lower/.upper are inserted")
    c.set_defaults(func=cmd_certify)

    k = sub.add_parser("check", help="validate a certificate against a model")
    k.add_argument("--model", required=True)
    k.add_argument("--certificate", required=True)
    k.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="brute-force optimal values (small models only)")
    o.add_argument("--model", required=True)
    o.add_argument("--query", required=True)
    o.add_argument("--cap", type=int, default=DEFAULT_CAP)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
