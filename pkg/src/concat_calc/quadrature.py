"""Adaptive panel Gauss-Legendre quadrature at arbitrary precision.

The inner loops run on :mod:`gmpy2` numbers inside a scoped precision context
(entered with ``with working_precision(prec):``); public results are handed
back as values of the caller's :class:`~concat_calc.scalar.BigFloatField`.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

import gmpy2
from gmpy2 import mpc, mpfr, mpq

from .scalar import BigFloatField, GaussRat

NODES_PER_PANEL = 32


class QuadratureError(RuntimeError):
    """Adaptive refinement exhausted its node budget or depth."""


@contextmanager
def working_precision(prec: int):
    with gmpy2.context(precision=prec) as ctx:
        yield ctx


def to_gmp(x: Any):
    """Convert an exact or mpmath scalar to a gmpy2 number at the active precision."""
    if isinstance(x, GaussRat):
        if x.im:
            return mpc(_q(x.re), _q(x.im))
        return _q(x.re)
    if isinstance(x, (int, Fraction)):
        return _q(Fraction(x))
    if hasattr(x, "_mpf_"):
        return _from_mpf(x._mpf_)
    if hasattr(x, "_mpc_"):
        re, im = x._mpc_
        if im[1] == 0:
            return _from_mpf(re)
        return mpc(_from_mpf(re), _from_mpf(im))
    if isinstance(x, (mpfr, mpc)):
        return x
    raise TypeError(f"cannot convert {type(x).__name__}")


def _q(f: Fraction):
    return mpfr(mpq(f.numerator, f.denominator))


def _from_mpf(t):
    sign, man, exp, _ = t
    v = gmpy2.mul_2exp(mpfr(man), exp) if man else mpfr(0)
    return -v if sign else v


def _to_mpf(fld: BigFloatField, v: mpfr):
    if not v:
        return fld.ctx.mpf(0)
    man, exp = v.as_mantissa_exp()
    return fld.ctx.mpf((int(man), int(exp)))


def to_field(fld: BigFloatField, z):
    """gmpy2 real or complex -> mpmath complex in ``fld``."""
    if isinstance(z, mpc):
        return fld.ctx.mpc(_to_mpf(fld, z.real), _to_mpf(fld, z.imag))
    return fld.ctx.mpc(_to_mpf(fld, mpfr(z)))


@lru_cache(maxsize=16)
def gauss_legendre(n: int, prec: int) -> tuple[tuple, tuple]:
    """Nodes and weights on ``[-1, 1]``, computed by Newton iteration on ``P_n``."""
    if n % 2:
        raise ValueError("only even node counts are supported")
    work = prec + 24
    with working_precision(work):
        pi = gmpy2.const_pi()
        eps = gmpy2.mul_2exp(mpfr(1), -(prec + 8))
        xs, ws = [], []
        for i in range(1, n // 2 + 1):
            x = gmpy2.cos(pi * (i - mpfr(0.25)) / (n + mpfr(0.5)))
            for _ in range(100):
                p0, p1 = mpfr(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            else:
                raise QuadratureError("Legendre node iteration did not converge")
            w = 2 / ((1 - x * x) * dp * dp)
            xs.append(x)
            ws.append(w)
        nodes = [-x for x in xs] + list(reversed(xs))
        weights = list(ws) + list(reversed(ws))
    with working_precision(prec):
        return tuple(+x for x in nodes), tuple(+w for w in weights)


@dataclass(frozen=True)
class QuadratureResult:
    """``value`` with a heuristic ``error_estimate`` (difference to one more bisection)."""

    value: Any
    error_estimate: Any
    nodes_used: int

    def __add__(self, other: QuadratureResult) -> QuadratureResult:
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.nodes_used + other.nodes_used,
        )


def integrate(f: Callable, lo, hi, prec: int, rtol: Any = Fraction(1, 10**20),
              atol: Any = Fraction(1, 10**40), max_nodes: int = 400_000,
              max_depth: int = 60) -> tuple:
    """Integrate ``f`` (gmpy2 in, gmpy2 out) over ``[lo, hi]``.

    Must be called inside ``working_precision(prec)``.  Returns
    ``(value, error_estimate, nodes_used)`` as gmpy2 numbers.  Panels are
    bisected depth-first and the accepted panels are summed in left-to-right
    order, so the result is reproducible.
    """
    X, W = gauss_legendre(NODES_PER_PANEL, prec)
    lo, hi = mpfr(lo), mpfr(hi)
    nodes = 0

    def panel(a, b):
        nonlocal nodes
        half = (b - a) / 2
        mid = (a + b) / 2
        s = mpfr(0)
        s_abs = mpfr(0)
        for x, w in zip(X, W):
            v = f(mid + half * x)
            s += w * v
            s_abs += w * abs(v)
        nodes += len(X)
        return s * half, s_abs * half

    if lo == hi:
        return mpfr(0), mpfr(0), 0
    whole, whole_abs = panel(lo, hi)
    target = max(to_gmp(Fraction(atol)), to_gmp(Fraction(rtol)) * whole_abs)
    width = hi - lo
    accepted = []
    stack = [(lo, hi, whole, 0)]
    while stack:
        a, b, s, depth = stack.pop()
        m = (a + b) / 2
        left, _ = panel(a, m)
        right, _ = panel(m, b)
        err = abs(left + right - s)
        if err <= target * (b - a) / width:
            accepted.append((a, left + right, err))
            continue
        if depth >= max_depth or nodes > max_nodes:
            raise QuadratureError(
                f"no convergence on [{float(a)}, {float(b)}]: error {float(err):.3e} "
                f"after {nodes} nodes"
            )
        stack.append((m, b, right, depth + 1))
        stack.append((a, m, left, depth + 1))
    accepted.sort(key=lambda p: p[0])
    total = mpfr(0)
    err_total = mpfr(0)
    for _, v, e in accepted:
        total += v
        err_total += e
    return total, err_total, nodes
