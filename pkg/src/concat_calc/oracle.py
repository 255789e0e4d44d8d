"""Numerical pairing ``<T, phi>`` and the adjoint route ``<p(d/dt) T, phi> = <T, p(-d/dt) phi>``.

This is the independent channel that re-derives symbolic results: nothing
here calls :func:`~concat_calc.distribution.dist_derive`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import gmpy2
from gmpy2 import mpfr

from .distribution import Distribution
from .exppoly import ExpPoly, Poly1
from .quadrature import QuadratureResult, integrate, to_field, to_gmp, working_precision
from .scalar import BigFloatField
from .testfn import TestFunction

DEFAULT_FIELD = BigFloatField(128)
DEFAULT_RTOL = Fraction(1, 10**16)

_PIECES: dict = {}


def _piece_evaluator(a: ExpPoly, prec: int):
    """Memoizing gmpy2 evaluator of an exponential polynomial."""
    key = (a, prec)
    table = _PIECES.get(key)
    if table is None:
        if len(_PIECES) > 4096:
            _PIECES.clear()
        table = _PIECES[key] = {}
    terms = [(to_gmp(lam), [to_gmp(c) for c in q.coeffs]) for lam, q in a.terms]

    def f(t):
        v = table.get(t)
        if v is None:
            v = mpfr(0)
            for lam, cs in terms:
                acc = cs[-1]
                for c in reversed(cs[:-1]):
                    acc = acc * t + c
                v += acc * gmpy2.exp(lam * t)
            table[t] = v
        return v

    return f


def pair(T: Distribution, phi: TestFunction, fld: BigFloatField = DEFAULT_FIELD,
         rtol: Any = DEFAULT_RTOL, domain: Any = None) -> QuadratureResult:
    """``<T, phi>``: quadrature of the regular part plus ``sum c_k (-1)^k phi^(k)(0)``.

    ``domain`` widens the integration interval to ``[-domain, domain]``; by
    default the support of ``phi`` is used and ``0`` is always a panel boundary.
    """
    R = Fraction(domain) if domain is not None else phi.support
    if R < phi.support:
        raise ValueError("integration domain must contain the support")
    prec = fld.prec
    with working_precision(prec):
        value = mpfr(0)
        err = mpfr(0)
        nodes = 0
        for piece, lo, hi in ((T.regular.left, -R, 0), (T.regular.right, 0, R)):
            if piece.is_zero():
                continue
            u = _piece_evaluator(piece, prec)
            psi = phi.gmp_evaluator(prec)
            v, e, n = integrate(lambda t: u(t) * psi(t), to_gmp(lo), to_gmp(hi), prec, rtol)
            value += v
            err += e
            nodes += n
        for k, c in enumerate(T.singular.coeffs):
            if T.field.is_zero(c):
                continue
            dk = phi.gmp_evaluator(prec, k)(mpfr(0))
            term = to_gmp(c) * dk
            value += -term if k % 2 else term
        return QuadratureResult(to_field(fld, value), to_field(fld, err).real, nodes)


def adjoint_weights(p: Poly1, phi: TestFunction) -> tuple:
    """Weights of ``p(-d/dt) phi`` as a derivative combination of ``phi.expr``."""
    fld = p.field
    w = [fld.coerce(x) for x in phi.weights]
    out = [fld.zero] * (len(w) + max(len(p.coeffs) - 1, 0))
    for k, a in enumerate(p.coeffs):
        sa = -a if k % 2 else a
        for i, wi in enumerate(w):
            out[i + k] = out[i + k] + sa * wi
    return tuple(out)


def adjoint_pair_derivative(T: Distribution, p: Poly1, phi: TestFunction,
                            fld: BigFloatField = DEFAULT_FIELD,
                            rtol: Any = DEFAULT_RTOL) -> QuadratureResult:
    """``sum_k a_k (-1)^k <T, phi^(k)>`` without differentiating ``T``.

    The sum is taken inside the integral: ``T`` is paired once with the test
    function ``p(-d/dt) phi``, which by linearity of the pairing equals the
    termwise sum.
    """
    psi = TestFunction(phi.expr, phi.support, adjoint_weights(p, phi), f"p(-D){phi.label}")
    return pair(T, psi, fld, rtol)


def recover_comb(T: Distribution, order: int, windows, fld: BigFloatField = DEFAULT_FIELD):
    """Read ``c_0..c_order`` back from pairings with ``monomial_window(0..order)``.

    ``<sum c_k delta^(k), phi_j> = (-1)^j c_j`` because ``phi_j^(k)(0) = [j == k]``.
    """
    out = []
    for j in range(order + 1):
        v = pair(T, windows[j], fld).value
        out.append(-v if j % 2 else v)
    return out

