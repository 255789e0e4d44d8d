"""Smooth compactly supported test functions as small expression trees.

Trees are built from constants, ``t``, sums, products, quotients and the gated
exponential ``ExpGate(n, d) = exp(n/d)`` where ``d > 0`` and ``0`` elsewhere.
The gate is what makes bump functions flat at the edge of their support.

Derivatives are exact: a :class:`TestFunction` carries a derivative
combination ``sum_k w_k phi^(k)`` and values are read off truncated Taylor
series propagated through the tree (forward-mode, arbitrary order).  A
symbolic ``diff`` on trees is also provided; the two routes are cross-checked
in the test suite.
"""

from __future__ import annotations

import math

import gmpy2
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from gmpy2 import mpfr, mpq

from .quadrature import to_field, to_gmp, working_precision
from .scalar import BigFloatField, GaussRat


class Expr:
    __slots__ = ()

    def diff(self) -> Expr:
        raise NotImplementedError

    def value(self, t):
        """Pointwise value; gmpy2 ``mpfr`` in and out, active context precision."""
        raise NotImplementedError

    def jet(self, t, K: int) -> list:
        """Taylor coefficients ``f^(n)(t)/n!`` for ``n <= K``."""
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    c: Fraction

    def diff(self):
        return ZERO

    def value(self, t):
        return mpfr(mpq(self.c.numerator, self.c.denominator))

    def jet(self, t, K):
        return [self.value(t)] + [_Z] * K


@dataclass(frozen=True)
class Var(Expr):
    def diff(self):
        return ONE

    def value(self, t):
        return t

    def jet(self, t, K):
        out = [t] + [_Z] * K
        if K:
            out[1] = mpfr(1)
        return out


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
T = Var()


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]

    def diff(self):
        return add(*(e.diff() for e in self.terms))

    def value(self, t):
        return sum((e.value(t) for e in self.terms), _Z)

    def jet(self, t, K):
        jets = [e.jet(t, K) for e in self.terms]
        return [sum((j[n] for j in jets), _Z) for n in range(K + 1)]


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]

    def diff(self):
        parts = []
        for i, f in enumerate(self.factors):
            d = f.diff()
            if d != ZERO:
                parts.append(mul(*self.factors[:i], d, *self.factors[i + 1:]))
        return add(*parts)

    def value(self, t):
        # gates first: outside the support they vanish and the rest may be singular
        ordered = sorted(self.factors, key=lambda f: not isinstance(f, ExpGate))
        out = mpfr(1)
        for f in ordered:
            v = f.value(t)
            if not v:
                return _Z
            out *= v
        return out

    def jet(self, t, K):
        out = None
        for f in self.factors:
            j = f.jet(t, K)
            out = j if out is None else _jmul(out, j, K)
            if not any(out):
                return [_Z] * (K + 1)
        return out


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr

    def diff(self):
        top = add(mul(self.num.diff(), self.den), mul(Const(Fraction(-1)), self.num, self.den.diff()))
        return div(top, mul(self.den, self.den))

    def value(self, t):
        n = self.num.value(t)
        if not n:
            return _Z
        return n / self.den.value(t)

    def jet(self, t, K):
        n = self.num.jet(t, K)
        if not any(n):
            return n
        return _jdiv(n, self.den.jet(t, K), K)


@dataclass(frozen=True)
class ExpGate(Expr):
    """``exp(num/den)`` on ``den > 0``, identically zero on ``den <= 0``."""

    num: Expr
    den: Expr

    def diff(self):
        return mul(Div(self.num, self.den).diff(), self)

    def value(self, t):
        d = self.den.value(t)
        if d <= 0:
            return _Z
        return gmpy2.exp(self.num.value(t) / d)

    def jet(self, t, K):
        d = self.den.jet(t, K)
        if d[0] <= 0:
            # flat: zero on a neighbourhood or to infinite order at the gate
            return [_Z] * (K + 1)
        q = _jdiv(self.num.jet(t, K), d, K)
        return _jexp(q, K)


_Z = mpfr(0)


def _jmul(a, b, K):
    out = []
    for n in range(K + 1):
        s = a[0] * b[n]
        for i in range(1, n + 1):
            s += a[i] * b[n - i]
        out.append(s)
    return out


def _jdiv(a, b, K):
    c = []
    for n in range(K + 1):
        s = a[n]
        for i in range(1, n + 1):
            s -= b[i] * c[n - i]
        c.append(s / b[0])
    return c


def _jexp(f, K):
    e = [gmpy2.exp(f[0])]
    for n in range(1, K + 1):
        s = _Z
        for k in range(1, n + 1):
            s += k * f[k] * e[n - k]
        e.append(s / n)
    return e


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    const = Fraction(0)
    for e in terms:
        if isinstance(e, Add):
            flat.extend(e.terms)
        elif isinstance(e, Const):
            const += e.c
        else:
            flat.append(e)
    if const:
        flat.append(Const(const))
    if not flat:
        return ZERO
    return flat[0] if len(flat) == 1 else Add(tuple(flat))


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    const = Fraction(1)
    for e in factors:
        if isinstance(e, Mul):
            flat.extend(e.factors)
        elif isinstance(e, Const):
            const *= e.c
        else:
            flat.append(e)
    if not const:
        return ZERO
    if const != 1:
        flat.insert(0, Const(const))
    if not flat:
        return ONE
    return flat[0] if len(flat) == 1 else Mul(tuple(flat))


def div(num: Expr, den: Expr) -> Expr:
    if num == ZERO:
        return ZERO
    return Div(num, den)


def const(c: Any) -> Const:
    return Const(Fraction(c))


@dataclass(frozen=True)
class TestFunction:
    """``sum_k weights[k] * expr^(k)`` with support in ``[-support, support]``.

    ``weights`` may be complex (Gaussian rationals) so that operator images
    ``p(-d/dt) phi`` are test functions too.
    """

    __test__ = False  # keep pytest from collecting this class

    expr: Expr
    support: Fraction
    weights: tuple = (GaussRat(1),)
    label: str = ""

    def __post_init__(self):
        if self.support <= 0:
            raise ValueError("support radius must be positive")

    @property
    def order(self) -> int:
        return len(self.weights) - 1

    def derivative_at(self, t, j: int, fld: BigFloatField):
        """Value of ``(d/dt)^j`` of this combination at ``t``, as a field scalar."""
        with working_precision(fld.prec):
            return to_field(fld, self.gmp_evaluator(fld.prec, j)(to_gmp(fld.coerce(t).real)))

    def __call__(self, t, fld: BigFloatField):
        return self.derivative_at(t, 0, fld)

    def gmp_evaluator(self, prec: int, j: int = 0):
        """Pointwise evaluator of the j-th derivative; call inside ``working_precision(prec)``.

        Jets are memoized per (tree, precision, point) so that pairing several
        derivative combinations of one test function reuses the Taylor data.
        """
        K = self.order + j
        ws = [(k + j, to_gmp(w) * math.factorial(k + j))
              for k, w in enumerate(self.weights) if w]
        expr = self.expr
        table = _table(expr, prec)
        K_store = max(K, 6)

        def f(t):
            jet = table.get(t)
            if jet is None or len(jet) <= K:
                jet = expr.jet(t, K_store)
                table[t] = jet
            acc = ws[0][1] * jet[ws[0][0]]
            for k, w in ws[1:]:
                acc += w * jet[k]
            return acc

        if not ws:
            return lambda t: _Z
        return f


_TABLES: dict = {}
_TABLE_LIMIT = 400_000


def _table(expr: Expr, prec: int) -> dict:
    key = (expr, prec)
    tab = _TABLES.get(key)
    if tab is None:
        if sum(len(v) for v in _TABLES.values()) > _TABLE_LIMIT:
            _TABLES.clear()
        tab = _TABLES[key] = {}
    return tab


def tf_derive(phi: TestFunction, k: int = 1) -> TestFunction:
    """``phi^(k)``: shifts the derivative combination; support is unchanged."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    return TestFunction(phi.expr, phi.support, (GaussRat(0),) * k + phi.weights,
                        f"D^{k}({phi.label})")


def tf_combine(phi: TestFunction, weights) -> TestFunction:
    """``sum_k weights[k] phi^(k)`` for a plain (order-0) test function ``phi``."""
    if phi.weights != (GaussRat(1),):
        raise ValueError("combine expects an underived test function")
    return TestFunction(phi.expr, phi.support, tuple(weights), f"L({phi.label})")


def _radius(a: Any) -> Fraction:
    a = Fraction(a)
    if a <= 0:
        raise ValueError("support radius must be positive")
    return a


def bump(a: Any = 1) -> TestFunction:
    """``exp(-1/(1 - (t/a)^2))`` for ``|t| < a``, zero elsewhere."""
    a = _radius(a)
    a2 = a * a
    den = add(const(a2), mul(const(-1), T, T))
    return TestFunction(ExpGate(const(-a2), den), a, label=f"bump({a})")


def smooth_cutoff(a: Any, plateau: Any) -> Expr:
    """Equal to 1 on ``|t| <= plateau*a``, 0 on ``|t| >= a``, smooth in between."""
    a = _radius(a)
    b = Fraction(plateau) * a
    if not 0 < b < a:
        raise ValueError("plateau must lie in (0, 1)")
    outer = ExpGate(const(-1), add(const(a * a), mul(const(-1), T, T)))
    inner = ExpGate(const(-1), add(mul(T, T), const(-b * b)))
    return Div(outer, add(outer, inner))


def monomial_window(k: int, a: Any = 1, plateau: Any = Fraction(1, 2)) -> TestFunction:
    """``t^k/k!`` times a flat-top cutoff; its j-th derivative at 0 is ``[j == k]``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = _radius(a)
    expr = mul(const(Fraction(1, math.factorial(k))), *([T] * k), smooth_cutoff(a, plateau))
    return TestFunction(expr, a, label=f"window({k},{a},{Fraction(plateau)})")
