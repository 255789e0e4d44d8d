"""Concatenability for ``p(d/dt) u = 0`` with constant coefficients.

The solution set is closed under gluing matched solutions at ``t = 0`` exactly
when ``deg p = 1``.  For higher degree a counterexample pair is built from the
roots of ``p`` and its failure is exhibited as a nonzero delta comb in
``p(d/dt)(u1 (+) u2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .distribution import Distribution, dist_apply_op, dist_from_concat
from .exppoly import ExpPoly, Poly1, PolyOperator, ep_apply_op, ep_eval
from .roots import multiplicity_split, roots
from .scalar import BigFloatField, ExactField, Field

CROSSCHECK_TOL = Fraction(1, 10**9)
INCONCLUSIVE_RATIO = Fraction(1, 10**20)
CROSSCHECK_FIELD = BigFloatField(128)


class ConstantPolynomial(ValueError):
    """A constant operator lies outside the scope of the decision."""


@dataclass(frozen=True)
class Closure:
    """``deg p = 1``: every solution is a multiple of ``exp(lam t)``."""

    field: Field
    lam: Any

    variant = "closure"


@dataclass(frozen=True)
class Counterexample:
    """Matched solutions whose concatenation leaves a nonzero comb under ``p(d/dt)``."""

    field: Field
    kind: str  # "repeated" or "distinct"
    lam: Any
    mu: Any  # None for the repeated kind
    u1: ExpPoly
    u2: ExpPoly
    residual: Distribution

    variant = "counterexample"


Certificate = Closure | Counterexample


def _require_nonconstant(p: Poly1) -> None:
    if p.degree < 1:
        raise ConstantPolynomial(
            "a constant operator has solution set {0} (or everything for p = 0); "
            "the decision needs deg p >= 1"
        )


def decide_ode(p: Poly1) -> bool:
    """True iff the solutions of ``p(d/dt) u = 0`` are closed under concatenation."""
    _require_nonconstant(p)
    return p.degree == 1


def _pick_distinct(rts, fld: Field):
    """Deterministic root pair.

    Roots are ranked by descending ``(re, im)``.  Exact mode takes the first two;
    bigfloat mode takes the pair with the largest separation, ties going to the
    earlier pair in that ranking.
    """
    ranked = sorted((r for r, _ in rts), key=fld.sort_key, reverse=True)
    if isinstance(fld, ExactField):
        return ranked[0], ranked[1]
    best = None
    for a, b in combinations(ranked, 2):
        gap = abs(a - b)
        if best is None or gap > best[0]:
            best = (gap, a, b)
    return best[1], best[2]


def certificate_ode(p: Poly1, mode: str = "exact_required",
                    field: BigFloatField | None = None) -> Certificate:
    """Closure for ``deg p = 1``, otherwise a verified-by-construction counterexample.

    ``mode="numeric"`` (or a bigfloat ``p``) computes roots numerically and
    returns a certificate over the bigfloat field.
    """
    _require_nonconstant(p)
    fld: Field = p.field
    if mode == "numeric" and isinstance(fld, ExactField):
        fld = field or BigFloatField()
        p = PolyOperator.of(p).to_field(fld)
    elif isinstance(fld, BigFloatField):
        mode = "numeric"
    if p.degree == 1:
        return Closure(fld, -p.coeffs[0] / p.coeffs[1])

    rts = roots(p, mode, fld if isinstance(fld, BigFloatField) else None)
    repeated, _ = multiplicity_split(rts)
    if repeated:
        lam = sorted((r for r, _ in repeated), key=fld.sort_key, reverse=True)[0]
        kind, mu = "repeated", None
        u1 = ExpPoly.exp(lam, [1], fld)
        u2 = ExpPoly.exp(lam, [1, 1], fld)
    else:
        lam, mu = _pick_distinct(rts, fld)
        kind = "distinct"
        u1 = ExpPoly.exp(lam, [1], fld)
        u2 = ExpPoly.exp(mu, [1], fld)
    residual = dist_apply_op(p, dist_from_concat(u1, u2))
    return Counterexample(fld, kind, lam, mu, u1, u2, residual)


def matched_pair_residual(p: Poly1, c: Any) -> Distribution:
    """``p(d/dt)(c e^{lam t} (+) c e^{lam t})`` for ``deg p = 1``."""
    if p.degree != 1:
        raise ValueError("matched exponential pairs are only defined for deg p = 1")
    fld = p.field
    lam = -p.coeffs[0] / p.coeffs[1]
    u = ExpPoly.exp(lam, [fld.coerce(c)], fld)
    return dist_apply_op(p, dist_from_concat(u, u))


# --- verification ------------------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    detail: str = ""


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool | None, detail: str = "") -> bool:
        status = INCONCLUSIVE if ok is None else (PASS if ok else FAIL)
        self.checks.append(Check(name, status, detail))
        return bool(ok)

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed_at(self) -> str | None:
        return next((c.name for c in self.checks if c.status == FAIL), None)

    def to_json(self) -> list[dict[str, str]]:
        return [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks]

    def __str__(self):
        lines = [f"{c.status.upper():12s} {c.name}" + (f"  {c.detail}" if c.detail else "")
                 for c in self.checks]
        return "\n".join(lines + [f"overall: {self.status}"])


def verify_certificate(cert: Certificate, p: Poly1, numeric_crosscheck: bool = False,
                       report: Report | None = None) -> Report:
    """Re-derive every invariant of ``cert`` from ``p``; never raises on bad input."""
    rep = report if report is not None else Report()
    try:
        if cert.field != p.field:
            p = PolyOperator.of(p).to_field(cert.field)
        if isinstance(cert, Closure):
            _verify_closure(cert, p, numeric_crosscheck, rep)
        elif isinstance(cert, Counterexample):
            _verify_counterexample(cert, p, numeric_crosscheck, rep)
        else:
            rep.add("structure", False, f"unknown certificate type {type(cert).__name__}")
    except Exception as exc:  # a malformed certificate is a failed check, not a crash
        rep.add("evaluation", False, f"{type(exc).__name__}: {exc}")
    return rep


def _verify_closure(cert: Closure, p: Poly1, crosscheck: bool, rep: Report) -> None:
    fld = cert.field
    if not rep.add("degree", p.degree == 1, f"deg p = {p.degree}"):
        return
    expected = -p.coeffs[0] / p.coeffs[1]
    rep.add("lambda", fld.eq(cert.lam, expected), f"lambda = {fld.to_str(cert.lam)}")
    u = ExpPoly.exp(cert.lam, [1], fld)
    rep.add("u_in_S_p", ep_apply_op(p, u).is_zero())
    residuals = [matched_pair_residual(p, c) for c in (1, fld.i + 2)]
    rep.add("matched_pair_residual_zero", all(r.is_zero() for r in residuals))
    if crosscheck:
        from .oracle import adjoint_pair_derivative
        from .testfn import monomial_window

        num = CROSSCHECK_FIELD
        pn = PolyOperator.of(p).to_field(num)
        T = dist_from_concat(u.to_field(num), u.to_field(num))
        worst = max(abs(adjoint_pair_derivative(T, pn, monomial_window(j), num).value)
                    for j in range(2))
        rep.add("adjoint_oracle", worst < num.ctx.mpf(CROSSCHECK_TOL.numerator) / CROSSCHECK_TOL.denominator,
                f"max |<p(D)T, window_j>| = {num.ctx.nstr(worst, 3)}")


def _verify_counterexample(cert: Counterexample, p: Poly1, crosscheck: bool, rep: Report) -> None:
    fld = cert.field
    if not rep.add("degree", p.degree >= 2, f"deg p = {p.degree}"):
        return
    if cert.kind == "repeated":
        ok = fld.is_zero(p(cert.lam)) and fld.is_zero(p.derive()(cert.lam)) and cert.mu is None
        rep.add("lambda_root", ok, "p(lambda) = p'(lambda) = 0")
    elif cert.kind == "distinct":
        ok = fld.is_zero(p(cert.lam)) and cert.mu is not None and fld.is_zero(p(cert.mu)) \
            and not fld.eq(cert.lam, cert.mu)
        rep.add("lambda_root", ok, "p(lambda) = p(mu) = 0, lambda != mu")
    else:
        rep.add("structure", False, f"unknown kind {cert.kind!r}")
        return
    rep.add("u1_in_S_p", ep_apply_op(p, cert.u1).is_zero())
    rep.add("u2_in_S_p", ep_apply_op(p, cert.u2).is_zero())
    v1, v2 = ep_eval(cert.u1, 0), ep_eval(cert.u2, 0)
    if not rep.add("match_at_0", fld.eq(v1, v2), f"u1(0) = {fld.to_str(v1)}, u2(0) = {fld.to_str(v2)}"):
        return
    recomputed = dist_apply_op(p, dist_from_concat(cert.u1, cert.u2))
    rep.add("residual_recomputed", recomputed.equals(cert.residual))
    rep.add("residual_regular_zero", recomputed.regular.is_zero())
    comb = recomputed.singular
    rep.add("comb_nonzero", _comb_nonzero(comb, p), f"comb = [{comb}]")
    n = p.degree
    top = comb.coeff(n - 2)
    if cert.kind == "repeated":
        law = p.coeffs[-1]
    else:
        law = p.coeffs[-1] * (cert.mu - cert.lam)
    rep.add("top_coefficient", fld.eq(top, law),
            f"delta^({n - 2}) coefficient {fld.to_str(top)}, expected {fld.to_str(law)}")
    if crosscheck:
        _crosscheck_comb(cert, p, comb, rep)


def _comb_nonzero(comb, p: Poly1) -> bool | None:
    """Exact: any coefficient nonzero.  Bigfloat: ``None`` when below the dust threshold."""
    fld = comb.field
    if isinstance(fld, ExactField):
        return not comb.is_zero()
    if comb.is_zero():
        return False
    ctx = fld.ctx
    scale = max(abs(c) for c in p.coeffs)
    ratio = ctx.mpf(INCONCLUSIVE_RATIO.numerator) / INCONCLUSIVE_RATIO.denominator
    if max(abs(c) for c in comb.coeffs) < ratio * scale:
        return None
    return True


def _crosscheck_comb(cert: Counterexample, p: Poly1, comb, rep: Report) -> None:
    """Read each comb coefficient back by quadrature, two ways.

    ``window_pairing`` pairs the recomputed residual with ``monomial_window(j)``;
    ``adjoint_oracle`` pairs the concatenation itself with ``p(-d/dt) window_j``
    and so never touches the jump rule.
    """
    from .oracle import adjoint_pair_derivative, pair
    from .testfn import monomial_window

    num = CROSSCHECK_FIELD
    ctx = num.ctx
    tol = ctx.mpf(CROSSCHECK_TOL.numerator) / CROSSCHECK_TOL.denominator
    pn = PolyOperator.of(p).to_field(num)
    T = dist_from_concat(cert.u1.to_field(num), cert.u2.to_field(num))
    residual = cert.residual.to_field(num)
    worst_w = worst_a = ctx.mpf(0)
    for j in range(max(comb.order, 0) + 1):
        phi = monomial_window(j)
        expected = num.coerce(comb.coeff(j))
        sign = -1 if j % 2 else 1
        w = sign * pair(residual, phi, num).value
        a = sign * adjoint_pair_derivative(T, pn, phi, num).value
        worst_w = max(worst_w, abs(w - expected) / (1 + abs(expected)))
        worst_a = max(worst_a, abs(a - expected) / (1 + abs(expected)))
    rep.add("window_pairing", worst_w < tol, f"max relative deviation {ctx.nstr(worst_w, 3)}")
    rep.add("adjoint_oracle", worst_a < tol, f"max relative deviation {ctx.nstr(worst_a, 3)}")
