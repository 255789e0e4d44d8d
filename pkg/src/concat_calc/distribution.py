"""Distributions on the line with one interface at ``t = 0``.

A :class:`Distribution` is a regular part, given by two exponential polynomials
(one for ``t < 0`` and one for ``t > 0``), plus a finite comb
``sum_k c_k delta^(k)`` supported at the origin.  Differentiation follows the
jump rule: differentiate each piece and add ``(right(0) - left(0)) * delta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from .exppoly import ExpPoly, Poly1, ep_add, ep_derive, ep_eval, ep_scale, format_exppoly
from .scalar import EXACT, Field, same_field


class MatchError(ValueError):
    """The two pieces of a concatenation disagree at ``t = 0``."""


@dataclass(frozen=True)
class ConcatFunction:
    """Piecewise exponential polynomial: ``left`` on ``t < 0``, ``right`` on ``t > 0``."""

    left: ExpPoly
    right: ExpPoly

    def __post_init__(self):
        same_field(self.left.field, self.right.field)

    @property
    def field(self) -> Field:
        return self.left.field

    def value_left(self):
        return ep_eval(self.left, 0)

    def value_right(self):
        return ep_eval(self.right, 0)

    def jump(self):
        """``u(0+) - u(0-)``."""
        return self.value_right() - self.value_left()

    def is_zero(self) -> bool:
        return self.left.is_zero() and self.right.is_zero()

    def __add__(self, other: ConcatFunction) -> ConcatFunction:
        return ConcatFunction(ep_add(self.left, other.left), ep_add(self.right, other.right))


@dataclass(frozen=True, init=False, eq=False)
class DeltaComb:
    """``sum_k coeffs[k] * delta^(k)``; trailing zeros are stripped."""

    field: Field
    coeffs: tuple

    def __init__(self, coeffs: Iterable[Any] = (), field: Field = EXACT):
        # reuse Poly1 normalization: same shape, different meaning
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", Poly1(coeffs, field).coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order(self) -> int:
        """Highest derivative order present, ``-1`` when empty."""
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def __add__(self, other: DeltaComb) -> DeltaComb:
        fld = same_field(self.field, other.field)
        n = max(len(self.coeffs), len(other.coeffs))
        return DeltaComb([self.coeff(k) + other.coeff(k) for k in range(n)], fld)

    def scale(self, c: Any) -> DeltaComb:
        c = self.field.coerce(c)
        return DeltaComb([c * x for x in self.coeffs], self.field)

    def shift(self) -> DeltaComb:
        """``delta^(k) -> delta^(k+1)``."""
        return DeltaComb((self.field.zero,) + self.coeffs, self.field)

    def equals(self, other: DeltaComb) -> bool:
        if self.field != other.field:
            return False
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.field.eq(self.coeff(k), other.coeff(k)) for k in range(n))

    def __eq__(self, other):
        return isinstance(other, DeltaComb) and self.equals(other)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        return ", ".join(self.field.to_str(c) for c in self.coeffs)


@dataclass(frozen=True)
class Distribution:
    regular: ConcatFunction
    singular: DeltaComb

    def __post_init__(self):
        same_field(self.regular.field, self.singular.field)

    @property
    def field(self) -> Field:
        return self.regular.field

    @classmethod
    def zero(cls, field: Field = EXACT) -> Distribution:
        z = ExpPoly.zero(field)
        return cls(ConcatFunction(z, z), DeltaComb((), field))

    @classmethod
    def regular_only(cls, left: ExpPoly, right: ExpPoly) -> Distribution:
        return cls(ConcatFunction(left, right), DeltaComb((), left.field))

    @classmethod
    def comb(cls, coeffs: Iterable[Any], field: Field = EXACT) -> Distribution:
        z = ExpPoly.zero(field)
        return cls(ConcatFunction(z, z), DeltaComb(coeffs, field))

    def is_zero(self) -> bool:
        return self.regular.is_zero() and self.singular.is_zero()

    def __add__(self, other: Distribution) -> Distribution:
        return Distribution(self.regular + other.regular, self.singular + other.singular)

    def scale(self, c: Any) -> Distribution:
        r = self.regular
        return Distribution(
            ConcatFunction(ep_scale(c, r.left), ep_scale(c, r.right)), self.singular.scale(c)
        )

    def equals(self, other: Distribution) -> bool:
        return (
            self.regular.left.equals(other.regular.left)
            and self.regular.right.equals(other.regular.right)
            and self.singular.equals(other.singular)
        )

    def __eq__(self, other):
        return isinstance(other, Distribution) and self.equals(other)

    def __hash__(self):
        return hash((self.regular.left, self.regular.right, self.singular))

    def to_field(self, fld: Field) -> Distribution:
        return Distribution(
            ConcatFunction(self.regular.left.to_field(fld), self.regular.right.to_field(fld)),
            DeltaComb([fld.coerce(c) for c in self.singular.coeffs], fld),
        )

    def __str__(self):
        return format_distribution(self)


def format_distribution(T: Distribution) -> str:
    """``[left] <expr> [right] <expr> [comb] c0, c1, ...``"""
    comb = ", ".join(T.field.to_str(c) for c in T.singular.coeffs)
    text = f"[left] {format_exppoly(T.regular.left)} [right] {format_exppoly(T.regular.right)} [comb]"
    return f"{text} {comb}" if comb else text


def dist_from_concat(u1: ExpPoly, u2: ExpPoly, require_match: bool = True) -> Distribution:
    """Regular distribution of ``u1`` on ``t <= 0`` glued to ``u2`` on ``t >= 0``."""
    fld = same_field(u1.field, u2.field)
    if require_match:
        v1, v2 = ep_eval(u1, 0), ep_eval(u2, 0)
        if not fld.eq(v1, v2):
            raise MatchError(
                f"u1(0) = {fld.to_str(v1)} differs from u2(0) = {fld.to_str(v2)}"
            )
    return Distribution.regular_only(u1, u2)


def dist_derive(T: Distribution, k: int = 1) -> Distribution:
    """Distributional derivative (jump rule), iterated ``k`` times."""
    for _ in range(k):
        r = T.regular
        sigma = r.jump()
        comb = T.singular.shift() + DeltaComb([sigma], T.field)
        T = Distribution(ConcatFunction(ep_derive(r.left), ep_derive(r.right)), comb)
    return T


def dist_apply_op(p: Poly1, T: Distribution) -> Distribution:
    """``p(d/dt) T = sum_k a_k (d/dt)^k T``."""
    same_field(p.field, T.field)
    out = Distribution.zero(T.field)
    deriv = T
    for k, c in enumerate(p.coeffs):
        if k:
            deriv = dist_derive(deriv)
        if not T.field.is_zero(c):
            out = out + deriv.scale(c)
    return out


def dist_restrict_punctured(T: Distribution) -> ConcatFunction:
    """Restriction to the line minus the origin: the comb is invisible there."""
    return T.regular


def _pow(fld: Field, x, k: int):
    out = fld.one
    for _ in range(k):
        out = out * x
    return out


def fk_closed_form(kind: str, k: int, lam: Any, mu: Any = None,
                   field: Field = EXACT) -> Distribution:
    """Closed form of ``(d/dt)^k (u1 (+) u2)`` for the two counterexample families.

    ``kind="repeated"``: ``u1 = e^{lam t}``, ``u2 = (1 + t) e^{lam t}``.  The right
    piece is ``(lam^k (1 + t) + k lam^(k-1)) e^{lam t}`` and the coefficient of
    ``delta^(k-2-j)`` is ``(j + 1) lam^j``.

    ``kind="distinct"``: ``u1 = e^{lam t}``, ``u2 = e^{mu t}``.  The coefficient of
    ``delta^(k-2-j)`` is ``mu^(j+1) - lam^(j+1)``, which is what the recurrence
    ``comb_{k+1} = shift(comb_k) + (mu^k - lam^k) delta`` produces.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    lam = field.coerce(lam)
    if kind == "repeated":
        if mu is not None:
            raise ValueError("repeated kind takes no mu")
        lk = _pow(field, lam, k)
        k_lkm1 = k * _pow(field, lam, k - 1) if k else field.zero
        left = ExpPoly.exp(lam, [lk], field)
        right = ExpPoly.exp(lam, [lk + k_lkm1, lk], field)
        sigma = [field.coerce(j + 1) * _pow(field, lam, j) for j in range(k - 1)]
    elif kind == "distinct":
        if mu is None:
            raise ValueError("distinct kind requires mu")
        mu = field.coerce(mu)
        left = ExpPoly.exp(lam, [_pow(field, lam, k)], field)
        right = ExpPoly.exp(mu, [_pow(field, mu, k)], field)
        sigma = [_pow(field, mu, j + 1) - _pow(field, lam, j + 1) for j in range(k - 1)]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    # sigma[j] multiplies delta^(k-2-j); store by ascending derivative order
    comb = list(reversed(sigma))
    return Distribution(ConcatFunction(left, right), DeltaComb(comb, field))
