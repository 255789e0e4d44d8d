"""Operators ``p(x, d/dt)`` with polynomial spatial coefficients.

``P = a_0(x) + a_1(x) t + ... + a_n(x) t^n`` stands for
``sum_k a_k(d/dx) (d/dt)^k``.  On plane waves ``u(t) e^{xi.x}`` every spatial
derivative is multiplication by a component of ``xi``, so ``P`` acts as the
univariate operator ``p_xi``.  The decision only depends on the t-degree; the
certificates reduce to the univariate ones through a witness ``xi`` with
``a_n(xi) != 0``.

Modes: ``growing`` uses the factor ``e^{xi.x}``, ``oscillatory`` uses
``e^{i xi.x}``, realized by evaluating the coefficients at ``i xi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Iterable, Mapping, Sequence

from .concat_ode import (Certificate, Closure, Counterexample, Report, certificate_ode,
                         verify_certificate)
from .exppoly import ExpPoly, PolyOperator, ep_apply_op, ep_derive, ep_scale
from .scalar import EXACT, BigFloatField, ExactField, GaussRat

MODES = ("growing", "oscillatory")


class TDegreeZero(ValueError):
    """The operator has no time derivative."""


class ZeroOperator(ValueError):
    """All coefficients vanish."""


class DimensionMismatch(ValueError):
    pass


Monomials = tuple[tuple[tuple[int, ...], GaussRat], ...]


def _normalize(d: int, coeff: Mapping[Sequence[int], Any]) -> Monomials:
    acc: dict[tuple[int, ...], GaussRat] = {}
    for exps, c in coeff.items():
        exps = tuple(int(e) for e in exps)
        if len(exps) != d:
            raise DimensionMismatch(f"monomial {exps} does not have {d} exponents")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        acc[exps] = acc.get(exps, GaussRat(0)) + EXACT.coerce(c)
    return tuple(sorted((e, c) for e, c in acc.items() if c))


def eval_monomials(mons: Monomials, point: Sequence[GaussRat]) -> GaussRat:
    total = GaussRat(0)
    for exps, c in mons:
        term = c
        for x, e in zip(point, exps):
            if e:
                term = term * x ** e
        total = total + term
    return total


@dataclass(frozen=True, init=False)
class MultiPoly:
    """``tcoeffs[k]`` is the sparse spatial polynomial multiplying ``t^k``."""

    d: int
    tcoeffs: tuple[Monomials, ...]

    def __init__(self, d: int, tcoeffs: Iterable[Mapping[Sequence[int], Any]]):
        if d < 0:
            raise ValueError("dimension must be nonnegative")
        cs = [_normalize(d, c) for c in tcoeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "tcoeffs", tuple(cs))

    @classmethod
    def from_univariate(cls, p: PolyOperator, d: int = 0) -> MultiPoly:
        return cls(d, [{(0,) * d: c} for c in p.coeffs])

    def is_zero(self) -> bool:
        return not self.tcoeffs

    def coeff(self, k: int) -> Monomials:
        return self.tcoeffs[k] if 0 <= k < len(self.tcoeffs) else ()

    @property
    def leading(self) -> Monomials:
        if not self.tcoeffs:
            raise ZeroOperator("the zero operator has no leading coefficient")
        return self.tcoeffs[-1]

    def __str__(self):
        from .parser import print_operator

        return print_operator(self)


def tdegree(P: MultiPoly) -> int:
    if P.is_zero():
        raise ZeroOperator("the zero operator has no t-degree")
    return len(P.tcoeffs) - 1


def decide_pde(P: MultiPoly) -> bool:
    """True iff the solutions of ``P u = 0`` are closed under concatenation in time."""
    n = tdegree(P)
    if n == 0:
        raise TDegreeZero("the operator contains no time derivative")
    return n == 1


def _point(xi: Sequence[Any], mode: str) -> list[GaussRat]:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    pt = [EXACT.coerce(x) for x in xi]
    if mode == "oscillatory":
        pt = [GaussRat(0, 1) * x for x in pt]
    return pt


def witness_xi(P: MultiPoly, mode: str = "growing") -> tuple[GaussRat, ...]:
    """First point of ``{0..D}^d`` in lexicographic order with ``a_n(xi) != 0``.

    ``D`` is the largest per-variable degree of ``a_n``.  A nonzero polynomial of
    per-variable degree ``<= D`` cannot vanish on that whole grid, and neither
    can ``a_n(i x)``, so the scan always succeeds.
    """
    lead = P.leading
    D = max((max(e) for e, _ in lead if e), default=0)
    for xi in product(range(D + 1), repeat=P.d):
        if eval_monomials(lead, _point(xi, mode)):
            return tuple(GaussRat(x) for x in xi)
    raise AssertionError("grid scan exhausted; the leading coefficient must be zero")


def specialize(P: MultiPoly, xi: Sequence[Any], mode: str = "growing") -> PolyOperator:
    """``p_xi = sum_k a_k(xi) t^k`` (``a_k(i xi)`` in oscillatory mode)."""
    if len(xi) != P.d:
        raise DimensionMismatch(f"xi has {len(xi)} components, operator has d = {P.d}")
    pt = _point(xi, mode)
    return PolyOperator([eval_monomials(c, pt) for c in P.tcoeffs])


@dataclass(frozen=True)
class PlaneWave:
    """``coeff * e^{xi.x}`` (or ``e^{i xi.x}``) with ``coeff`` an exponential polynomial in ``t``."""

    coeff: ExpPoly
    xi: tuple[GaussRat, ...]
    mode: str = "growing"

    def partial_x(self, j: int) -> PlaneWave:
        """``d/dx_j``: the chain rule pulls out ``xi_j`` (``i xi_j`` when oscillatory)."""
        factor = self.xi[j]
        if self.mode == "oscillatory":
            factor = GaussRat(0, 1) * factor
        return PlaneWave(ep_scale(factor, self.coeff), self.xi, self.mode)

    def partial_t(self) -> PlaneWave:
        return PlaneWave(ep_derive(self.coeff), self.xi, self.mode)

    def __add__(self, other: PlaneWave) -> PlaneWave:
        if (self.xi, self.mode) != (other.xi, other.mode):
            raise ValueError("plane waves with different spatial factors")
        return PlaneWave(self.coeff + other.coeff, self.xi, self.mode)


def apply_operator(P: MultiPoly, u: PlaneWave) -> PlaneWave:
    """``P u`` by literal differentiation, monomial by monomial."""
    if len(u.xi) != P.d:
        raise DimensionMismatch("plane wave and operator dimensions differ")
    out = PlaneWave(ExpPoly.zero(), u.xi, u.mode)
    dt = u
    for k, mons in enumerate(P.tcoeffs):
        if k:
            dt = dt.partial_t()
        for exps, c in mons:
            w = dt
            for j, e in enumerate(exps):
                for _ in range(e):
                    w = w.partial_x(j)
            out = out + PlaneWave(ep_scale(c, w.coeff), u.xi, u.mode)
    return out


@dataclass(frozen=True)
class PlaneWaveCertificate:
    xi: tuple[GaussRat, ...]
    mode: str
    base: Certificate
    specialized: PolyOperator

    @property
    def variant(self) -> str:
        return self.base.variant


def certificate_pde(P: MultiPoly, mode: str = "growing", xi: Sequence[Any] | None = None,
                    root_mode: str = "exact_required",
                    field: BigFloatField | None = None) -> PlaneWaveCertificate:
    """Reduce to ``p_xi`` at a witness and certify the univariate operator there."""
    n = tdegree(P)
    if n == 0:
        raise TDegreeZero("the operator contains no time derivative")
    xi = witness_xi(P, mode) if xi is None else tuple(EXACT.coerce(x) for x in xi)
    p_xi = specialize(P, xi, mode)
    if p_xi.degree != n:
        raise ValueError(f"a_n vanishes at xi = {[str(x) for x in xi]}")
    return PlaneWaveCertificate(tuple(xi), mode, certificate_ode(p_xi, root_mode, field), p_xi)


def verify_certificate_pde(cert: PlaneWaveCertificate, P: MultiPoly,
                           numeric_crosscheck: bool = False) -> Report:
    rep = Report()
    try:
        if not rep.add("mode", cert.mode in MODES, f"mode = {cert.mode}"):
            return rep
        if not rep.add("dimension", len(cert.xi) == P.d, f"d = {P.d}, len(xi) = {len(cert.xi)}"):
            return rep
        n = tdegree(P)
        lead = eval_monomials(P.leading, _point(cert.xi, cert.mode))
        if not rep.add("witness", bool(lead) and n >= 1, f"a_n(xi) = {lead}"):
            return rep
        from .parser import print_operator

        p_xi = specialize(P, cert.xi, cert.mode)
        if not rep.add("specialization", p_xi.equals(cert.specialized),
                       f"p_xi = {print_operator(p_xi)}"):
            return rep
        verify_certificate(cert.base, p_xi, numeric_crosscheck, rep)
        if isinstance(cert.base, Counterexample) and isinstance(cert.base.field, ExactField):
            lifted = [apply_operator(P, PlaneWave(u, cert.xi, cert.mode)).coeff
                      for u in (cert.base.u1, cert.base.u2)]
            rep.add("lift_annihilated", all(w.is_zero() for w in lifted),
                    "P(u_i e^{xi.x}) = 0 by direct differentiation")
        elif isinstance(cert.base, Closure) and isinstance(cert.base.field, ExactField):
            u = ExpPoly.exp(cert.base.lam)
            rep.add("lift_annihilated",
                    apply_operator(P, PlaneWave(u, cert.xi, cert.mode)).coeff.is_zero(),
                    "P(e^{lambda t} e^{xi.x}) = 0 by direct differentiation")
    except Exception as exc:
        rep.add("evaluation", False, f"{type(exc).__name__}: {exc}")
    return rep


def lift_commutes(P: MultiPoly, u: ExpPoly, xi: Sequence[Any], mode: str = "growing") -> bool:
    """``P(u e^{xi.x}) = (p_xi(d/dt) u) e^{xi.x}``, compared exactly."""
    xi = tuple(EXACT.coerce(x) for x in xi)
    direct = apply_operator(P, PlaneWave(u, xi, mode)).coeff
    return direct.equals(ep_apply_op(specialize(P, xi, mode), u))
