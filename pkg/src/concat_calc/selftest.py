"""Embedded property corpus behind ``concat-calc selftest``."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .concat_ode import certificate_ode, decide_ode, matched_pair_residual, verify_certificate
from .corpus import NAMED_OPERATORS, gauss_rat, random_multipoly, random_operator
from .distribution import dist_apply_op, dist_derive, dist_from_concat, fk_closed_form
from .exppoly import ExpPoly
from .oracle import DEFAULT_FIELD, adjoint_pair_derivative, pair
from .parser import parse_operator, print_operator
from .pde import certificate_pde, decide_pde, verify_certificate_pde
from .testfn import bump


@dataclass(frozen=True)
class Outcome:
    name: str
    ok: bool
    detail: str


def _named() -> list[Outcome]:
    out = []
    for name, text, mode, expected in NAMED_OPERATORS:
        P = parse_operator(text)
        cert = certificate_pde(P, mode)
        rep = verify_certificate_pde(cert, P)
        ok = decide_pde(P) == expected and rep.passed and (cert.variant == "closure") == expected
        out.append(Outcome(f"operator {name}", ok, f"{text}: {rep.status}"))
    return out


def _ode(rng: random.Random, count: int) -> list[Outcome]:
    bad = []
    for j in range(count):
        deg = rng.randint(2, 6)
        p = random_operator(rng, deg, "repeated" if j % 2 else "distinct")
        cert = certificate_ode(p)
        rep = verify_certificate(cert, p, numeric_crosscheck=j < 2)
        if decide_ode(p) or not rep.passed:
            bad.append(f"{print_operator(p)}: {rep.failed_at}")
    for _ in range(count):
        p = random_operator(rng, 1, "distinct")
        if not decide_ode(p) or not matched_pair_residual(p, gauss_rat(rng)).is_zero():
            bad.append(f"{print_operator(p)}: matched pair left a residual")
    return [Outcome("ode certificates", not bad, "; ".join(bad) or f"{2 * count} operators")]


def _closed_forms(rng: random.Random, count: int) -> list[Outcome]:
    bad = 0
    for _ in range(count):
        lam, mu = gauss_rat(rng), gauss_rat(rng)
        rep = dist_from_concat(ExpPoly.exp(lam), ExpPoly.exp(lam, [1, 1]))
        dis = dist_from_concat(ExpPoly.exp(lam), ExpPoly.exp(mu))
        for k in range(9):
            bad += not fk_closed_form("repeated", k, lam).equals(dist_derive(rep, k))
            bad += not fk_closed_form("distinct", k, lam, mu).equals(dist_derive(dis, k))
    return [Outcome("closed forms", not bad, f"{bad} mismatches")]


def _parser(rng: random.Random, count: int) -> list[Outcome]:
    bad = 0
    for _ in range(count):
        P = random_multipoly(rng, rng.randint(0, 3), rng.randint(0, 4))
        s = print_operator(P)
        bad += print_operator(parse_operator(s, P.d)) != s
    return [Outcome("parser round trip", not bad, f"{bad} of {count} differ")]


def _oracle(rng: random.Random) -> list[Outcome]:
    lam, mu = gauss_rat(rng, 2, 2), gauss_rat(rng, 2, 2)
    T = dist_from_concat(ExpPoly.exp(lam), ExpPoly.exp(mu), require_match=False)
    p = random_operator(rng, 3, "distinct")
    fld = DEFAULT_FIELD
    phi = bump(1)
    lhs = pair(dist_apply_op(p, T).to_field(fld), phi, fld).value
    rhs = adjoint_pair_derivative(T.to_field(fld), p.to_field(fld), phi, fld).value
    dev = abs(lhs - rhs) / (1 + abs(lhs))
    return [Outcome("jump rule vs adjoint", dev < 1e-9, f"relative deviation {fld.ctx.nstr(dev, 3)}")]


def run_selftest(seed: int = 0, count: int = 10) -> list[Outcome]:
    rng = random.Random(seed)
    return (_named() + _ode(rng, count) + _closed_forms(rng, max(count // 2, 1))
            + _parser(rng, 5 * count) + _oracle(rng))
