"""Univariate polynomials, constant-coefficient operators and exponential polynomials.

An :class:`ExpPoly` is a finite sum ``sum_j q_j(t) * exp(lam_j * t)``.  These are
exactly the classical solutions of ``p(d/dt) u = 0`` and the smooth pieces of
every distribution handled by :mod:`concat_calc.distribution`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .scalar import EXACT, ExactField, Field, TranscendentalEvaluation, same_field


def _strip(fld: Field, coeffs: Iterable[Any]) -> tuple:
    cs = [fld.coerce(c) for c in coeffs]
    while cs and fld.is_zero(cs[-1]):
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True, init=False, eq=False)
class Poly1:
    """Dense polynomial in ``t``; ``coeffs[k]`` multiplies ``t**k``."""

    field: Field
    coeffs: tuple

    def __init__(self, coeffs: Iterable[Any] = (), field: Field = EXACT):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", _strip(field, coeffs))

    @classmethod
    def monomial(cls, k: int, c: Any = 1, field: Field = EXACT) -> Poly1:
        return cls([0] * k + [c], field)

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def __add__(self, other: Poly1) -> Poly1:
        fld = same_field(self.field, other.field)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly1([self.coeff(k) + other.coeff(k) for k in range(n)], fld)

    def __neg__(self) -> Poly1:
        return Poly1([-c for c in self.coeffs], self.field)

    def __sub__(self, other: Poly1) -> Poly1:
        return self + (-other)

    def __mul__(self, other: Poly1) -> Poly1:
        fld = same_field(self.field, other.field)
        if not self.coeffs or not other.coeffs:
            return Poly1((), fld)
        out = [fld.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly1(out, fld)

    def scale(self, c: Any) -> Poly1:
        c = self.field.coerce(c)
        return Poly1([c * a for a in self.coeffs], self.field)

    def derive(self) -> Poly1:
        return Poly1([k * self.coeffs[k] for k in range(1, len(self.coeffs))], self.field)

    def __call__(self, x: Any):
        x = self.field.coerce(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def equals(self, other: Poly1) -> bool:
        """Coefficientwise equality under the field's zero test."""
        if self.field != other.field:
            return False
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.field.eq(self.coeff(k), other.coeff(k)) for k in range(n))

    def __eq__(self, other):
        return isinstance(other, Poly1) and self.equals(other)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def to_field(self, fld: Field) -> Poly1:
        return Poly1([fld.coerce(c) for c in self.coeffs], fld)

    def __str__(self):
        return format_poly(self)


def format_poly(p: Poly1, var: str = "t") -> str:
    """Ascending-power text, e.g. ``1 + 2*t - 1/3*t^2``."""
    if not p.coeffs:
        return "0"
    parts: list[tuple[str, str]] = []
    for k, c in enumerate(p.coeffs):
        if p.field.is_zero(c):
            continue
        sign, body = _signed_scalar(p.field, c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            term = body
        elif body == "1":
            term = mono
        else:
            term = f"{body}*{mono}"
        parts.append((sign, term))
    return _join_signed(parts)


def _signed_scalar(fld: Field, c) -> tuple[str, str]:
    """Split a scalar into a sign and a body safe to use as a product factor."""
    s = fld.to_str(c)
    if " " in s:
        return "+", f"({s})"
    if s.startswith("-"):
        return "-", s[1:]
    return "+", s


def _join_signed(parts: Sequence[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True, init=False, eq=False)
class PolyOperator(Poly1):
    """``p(d/dt) = a_0 + a_1 d/dt + ... + a_n (d/dt)^n`` with optional factored form.

    ``factored`` is a tuple of ``(root, multiplicity)`` pairs together with the
    leading coefficient stored as ``coeffs[-1]``.
    """

    factored: tuple | None

    def __init__(self, coeffs: Iterable[Any] = (), field: Field = EXACT, factored=None):
        super().__init__(coeffs, field)
        if factored is not None:
            factored = tuple((field.coerce(r), int(m)) for r, m in factored)
            if any(m < 1 for _, m in factored):
                raise ValueError("root multiplicities must be >= 1")
            expanded = from_roots(factored, self.coeffs[-1] if self.coeffs else 1, field)
            if not expanded.equals(Poly1(self.coeffs, field)):
                raise ValueError("factored form does not expand to the coefficients")
        object.__setattr__(self, "factored", factored)

    @classmethod
    def from_roots(cls, roots: Iterable[tuple[Any, int]], lead: Any = 1,
                   field: Field = EXACT) -> PolyOperator:
        roots = tuple((field.coerce(r), int(m)) for r, m in roots)
        return cls(from_roots(roots, lead, field).coeffs, field, factored=roots)

    @classmethod
    def of(cls, p: Poly1) -> PolyOperator:
        return p if isinstance(p, PolyOperator) else cls(p.coeffs, p.field)

    @property
    def leading(self):
        return self.coeffs[-1]

    def __mul__(self, other: Poly1) -> PolyOperator:
        return PolyOperator(Poly1.__mul__(self, other).coeffs, self.field)

    def to_field(self, fld: Field) -> PolyOperator:
        fac = None
        if self.factored is not None:
            fac = tuple((fld.coerce(r), m) for r, m in self.factored)
        return PolyOperator([fld.coerce(c) for c in self.coeffs], fld, factored=fac)

    def __hash__(self):
        return hash((self.field, self.coeffs))


def from_roots(roots: Iterable[tuple[Any, int]], lead: Any = 1, field: Field = EXACT) -> Poly1:
    """Expand ``lead * prod (t - r)^m``."""
    out = Poly1([lead], field)
    for r, m in roots:
        lin = Poly1([-field.coerce(r), 1], field)
        for _ in range(m):
            out = out * lin
    return out


def _root_key(fld: Field):
    return lambda term: fld.sort_key(term[0])


@dataclass(frozen=True, init=False, eq=False)
class ExpPoly:
    """Normalized sum of ``poly(t) * exp(lam * t)`` terms.

    Exponents are pairwise distinct, no polynomial is zero and the terms are
    sorted by ``(re lam, im lam)``.  In bigfloat mode exponents closer than the
    field tolerance are merged.
    """

    field: Field
    terms: tuple[tuple[Any, Poly1], ...]

    def __init__(self, terms: Iterable[tuple[Any, Poly1]] = (), field: Field = EXACT):
        merged: list[list] = []
        for lam, poly in terms:
            lam = field.coerce(lam)
            poly = poly if poly.field == field else poly.to_field(field)
            for slot in merged:
                if field.eq(slot[0], lam):
                    slot[1] = slot[1] + poly
                    break
            else:
                merged.append([lam, poly])
        kept = [(lam, poly) for lam, poly in merged if not poly.is_zero()]
        kept.sort(key=_root_key(field))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", tuple(kept))

    @classmethod
    def exp(cls, lam: Any, poly: Poly1 | Sequence | None = None, field: Field = EXACT) -> ExpPoly:
        """``poly(t) * exp(lam t)``; ``poly`` defaults to the constant 1."""
        if poly is None:
            poly = Poly1([1], field)
        elif not isinstance(poly, Poly1):
            poly = Poly1(poly, field)
        return cls([(lam, poly)], field)

    @classmethod
    def zero(cls, field: Field = EXACT) -> ExpPoly:
        return cls((), field)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: ExpPoly) -> ExpPoly:
        return ep_add(self, other)

    def __neg__(self) -> ExpPoly:
        return ep_scale(-self.field.one, self)

    def __sub__(self, other: ExpPoly) -> ExpPoly:
        return ep_add(self, -other)

    def equals(self, other: ExpPoly) -> bool:
        if self.field != other.field:
            return False
        return ep_add(self, -other).is_zero()

    def __eq__(self, other):
        return isinstance(other, ExpPoly) and self.equals(other)

    def __hash__(self):
        return hash((self.field, self.terms))

    def to_field(self, fld: Field) -> ExpPoly:
        return ExpPoly([(fld.coerce(l), q.to_field(fld)) for l, q in self.terms], fld)

    def __str__(self):
        return format_exppoly(self)


def format_exppoly(a: ExpPoly) -> str:
    """Canonical text, e.g. ``(1 + 2*t)*exp((3/2 + 1i)*t) + exp(0*t)``."""
    if not a.terms:
        return "0"
    parts = []
    for lam, q in a.terms:
        lam_s = a.field.to_str(lam)
        if " " in lam_s or lam_s.startswith("-"):
            lam_s = f"({lam_s})"
        ex = f"exp({lam_s}*t)"
        nz = [c for c in q.coeffs if not a.field.is_zero(c)]
        if len(nz) == 1 and len(q.coeffs) == 1:
            sign, body = _signed_scalar(a.field, q.coeffs[0])
            parts.append((sign, ex if body == "1" else f"{body}*{ex}"))
        elif len(nz) == 1:
            inner = format_poly(q)
            sign = "-" if inner.startswith("-") else "+"
            parts.append((sign, f"{inner.lstrip('-')}*{ex}"))
        else:
            parts.append(("+", f"({format_poly(q)})*{ex}"))
    return _join_signed(parts)


def ep_add(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    fld = same_field(a.field, b.field)
    return ExpPoly(a.terms + b.terms, fld)


def ep_scale(c: Any, a: ExpPoly) -> ExpPoly:
    c = a.field.coerce(c)
    return ExpPoly([(lam, q.scale(c)) for lam, q in a.terms], a.field)


def ep_derive(a: ExpPoly, k: int = 1) -> ExpPoly:
    """k-fold derivative using ``(q e^{lam t})' = (q' + lam q) e^{lam t}``."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    terms = a.terms
    for _ in range(k):
        terms = tuple((lam, q.derive() + q.scale(lam)) for lam, q in terms)
    return ExpPoly(terms, a.field)


def ep_eval(a: ExpPoly, t: Any):
    """Value at ``t``.  Exact mode only evaluates at ``t = 0``."""
    fld = a.field
    t = fld.coerce(t)
    if isinstance(fld, ExactField):
        if t:
            raise TranscendentalEvaluation(
                "exact evaluation of an exponential polynomial is only defined at t = 0"
            )
        return sum((q.coeff(0) for _, q in a.terms), fld.zero)
    acc = fld.zero
    for lam, q in a.terms:
        acc += q(t) * fld.exp(lam * t)
    return acc


def ep_apply_op(p: Poly1, a: ExpPoly) -> ExpPoly:
    """Classical action ``sum_k a_k (d/dt)^k a``."""
    same_field(p.field, a.field)
    out = ExpPoly.zero(a.field)
    deriv = a
    for k, c in enumerate(p.coeffs):
        if k:
            deriv = ep_derive(deriv, 1)
        if not a.field.is_zero(c):
            out = ep_add(out, ep_scale(c, deriv))
    return out


def ep_solution_basis(roots: Iterable[tuple[Any, int]], field: Field = EXACT) -> list[ExpPoly]:
    """``t^j e^{lam t}`` for ``0 <= j < m`` per root ``(lam, m)``."""
    out = []
    for lam, m in roots:
        if m < 1:
            raise ValueError("multiplicities must be >= 1")
        for j in range(m):
            out.append(ExpPoly.exp(lam, Poly1.monomial(j, 1, field), field))
    return out
