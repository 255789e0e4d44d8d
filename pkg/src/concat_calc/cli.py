"""``concat-calc`` command line.

Exit codes: 0 concatenable / pass, 1 not concatenable / fail, 2 error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Sequence

from .concat_ode import ConstantPolynomial, Report
from .distribution import dist_apply_op
from .oracle import adjoint_pair_derivative, pair
from .parser import ParseError, parse_distribution, parse_operator, parse_scalar, parse_testfn, \
    parse_univariate, print_operator
from .pde import certificate_pde, decide_pde, tdegree, verify_certificate_pde
from .roots import ExactFactorizationUnavailable
from .scalar import BigFloatField
from .serialize import dumps, plane_certificate_from_json, plane_certificate_to_json

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get("CONCAT_CALC_PRECISION", "128")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CONCAT_CALC_PRECISION must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("growing", "oscillatory"), default="growing",
                        help="spatial factor e^{xi.x} or e^{i xi.x} (default: growing)")
    common.add_argument("--precision", type=int, default=None,
                        help="bits for bigfloat work (default: $CONCAT_CALC_PRECISION or 128)")
    common.add_argument("--tol", default=None,
                        help="zero tolerance of the bigfloat field "
                             "(default: 8 digits above the working precision, 1e-30 at 128 bits)")
    common.add_argument("--xi", default=None, help="witness override, e.g. 1,0,2")
    common.add_argument("--format", choices=("text", "json"), default=None,
                        help="output format (default: json for certify, text otherwise)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized batches")

    ap = argparse.ArgumentParser(prog="concat-calc",
                                 description="Concatenability of solutions of p(d/dt) u = 0.")
    sub = ap.add_subparsers(dest="command", required=True)
    d = sub.add_parser("decide", parents=[common], help="YES/NO with the t-degree")
    d.add_argument("operator")
    c = sub.add_parser("certify", parents=[common], help="emit a certificate")
    c.add_argument("operator")
    c.add_argument("--crosscheck", action="store_true",
                   help="include quadrature cross-checks in the embedded report")
    v = sub.add_parser("verify", parents=[common], help="re-check a certificate file")
    v.add_argument("certificate", help="certificate JSON path, or - for stdin")
    v.add_argument("operator")
    v.add_argument("--no-crosscheck", action="store_true", help="skip quadrature cross-checks")
    p = sub.add_parser("pair", parents=[common], help="quadrature pairing <T, phi>")
    p.add_argument("distribution", help="[left] <exppoly> [right] <exppoly> [comb] c0, c1, ...")
    p.add_argument("testfn", help="bump(a) or window(k, a, plateau)")
    p.add_argument("--op", default=None, help="pair p(d/dt) T instead, both ways")
    p.add_argument("--rtol", default="1e-16", help="quadrature relative tolerance")
    s = sub.add_parser("selftest", parents=[common], help="run the embedded property corpus")
    s.add_argument("--count", type=int, default=10)
    return ap


def _field(args) -> BigFloatField:
    prec = args.precision if args.precision is not None else _default_precision()
    if prec < 64:
        raise UsageError(f"precision must be at least 64 bits, got {prec}")
    tol = args.tol or f"1e-{int(prec * math.log10(2)) - 8}"
    return BigFloatField(prec, tol)


def _xi(args):
    if args.xi is None:
        return None
    return [parse_scalar(x) for x in args.xi.split(",")]


def cmd_decide(args, out) -> int:
    P = parse_operator(args.operator)
    yes = decide_pde(P)
    n = tdegree(P)
    if args.format == "json":
        out.write(dumps({"operator": print_operator(P), "decision": "YES" if yes else "NO",
                         "tdegree": str(n)}))
    else:
        out.write(f"{'YES' if yes else 'NO'} (t-degree {n})\n")
    return EXIT_YES if yes else EXIT_NO


def _certify(args, P):
    try:
        return certificate_pde(P, args.mode, _xi(args))
    except ExactFactorizationUnavailable:
        return certificate_pde(P, args.mode, _xi(args), "numeric", _field(args))


def cmd_certify(args, out) -> int:
    P = parse_operator(args.operator)
    cert = _certify(args, P)
    rep = verify_certificate_pde(cert, P, args.crosscheck)
    if args.format == "text":
        out.write(f"operator: {print_operator(P)}\n")
        out.write(f"xi = ({', '.join(str(x) for x in cert.xi)}), mode {cert.mode}, "
                  f"p_xi = {print_operator(cert.specialized)}\n")
        base = cert.base
        if cert.variant == "closure":
            out.write(f"closure: lambda = {base.field.to_str(base.lam)}\n")
        else:
            out.write(f"counterexample ({base.kind}): u1 = {base.u1}, u2 = {base.u2}\n")
            out.write(f"residual comb: [{base.residual.singular}]\n")
        out.write(str(rep) + "\n")
    else:
        out.write(dumps(plane_certificate_to_json(cert, P, rep)))
    return EXIT_YES if rep.passed else EXIT_NO


def cmd_verify(args, out) -> int:
    text = sys.stdin.read() if args.certificate == "-" else open(args.certificate).read()
    cert, P_cert = plane_certificate_from_json(json.loads(text))
    P = parse_operator(args.operator)
    if P.d < P_cert.d:
        P = parse_operator(args.operator, P_cert.d)
    rep = Report()
    rep.add("operator_match", P == P_cert, f"certificate is for {print_operator(P_cert)}")
    rep.checks.extend(verify_certificate_pde(cert, P, not args.no_crosscheck).checks)
    if args.format == "json":
        out.write(dumps({"status": rep.status, "checks": rep.to_json()}))
    else:
        out.write(str(rep) + "\n")
    return EXIT_YES if rep.passed else EXIT_NO


def cmd_pair(args, out) -> int:
    fld = _field(args)
    rtol = Fraction(args.rtol)
    T = parse_distribution(args.distribution)
    phi = parse_testfn(args.testfn)
    rows = []
    if args.op is None:
        res = pair(T.to_field(fld), phi, fld, rtol)
        rows.append(("pairing", res.value, res.error_estimate))
    else:
        p = parse_univariate(args.op)
        a = pair(dist_apply_op(p, T).to_field(fld), phi, fld, rtol)
        b = adjoint_pair_derivative(T.to_field(fld), p.to_field(fld), phi, fld, rtol)
        rows.append(("jump_rule", a.value, a.error_estimate))
        rows.append(("adjoint", b.value, b.error_estimate))
        rows.append(("difference", a.value - b.value, a.error_estimate + b.error_estimate))
    if args.format == "json":
        out.write(dumps({name: {"value": fld.to_str(v), "error_estimate": fld.ctx.nstr(e, 5)}
                         for name, v, e in rows}))
    else:
        for name, v, e in rows:
            out.write(f"{name:10s} {fld.to_str(v)}  (error estimate {fld.ctx.nstr(e, 3)})\n")
    return EXIT_YES


def cmd_selftest(args, out) -> int:
    from .selftest import run_selftest

    results = run_selftest(args.seed, args.count)
    if args.format == "json":
        out.write(dumps({"results": [{"name": r.name, "ok": "true" if r.ok else "false",
                                      "detail": r.detail} for r in results]}))
    else:
        for r in results:
            out.write(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}\n")
    return EXIT_YES if all(r.ok for r in results) else EXIT_NO


COMMANDS = {"decide": cmd_decide, "certify": cmd_certify, "verify": cmd_verify,
            "pair": cmd_pair, "selftest": cmd_selftest}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    if args.format is None:
        args.format = "json" if args.command == "certify" else "text"
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, ConstantPolynomial, UsageError, ValueError, OSError, ArithmeticError,
            RuntimeError) as exc:
        print(f"concat-calc: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
