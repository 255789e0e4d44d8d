from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concat_calc.scalar import BigFloatField, GaussRat
from concat_calc.testfn import (ExpGate, T, TestFunction, add, bump, const, monomial_window, mul,
                                smooth_cutoff, tf_combine, tf_derive)

FLD = BigFloatField(128)
ctx = FLD.ctx
TOL = ctx.mpf(10) ** -32


def close(a, b, tol=TOL):
    return abs(a - b) < tol * (1 + abs(b))


def test_bump_values():
    assert close(bump(1)(0, FLD), ctx.exp(-1))
    assert bump(1)(1, FLD) == 0 and bump(1)(-1, FLD) == 0
    assert tf_derive(bump(1), 1)(0, FLD) == 0
    assert close(bump(2)(1, FLD), ctx.exp(ctx.mpf(-4) / 3))
    with pytest.raises(ValueError):
        bump(0)


def test_bump_derivative_by_hand():
    # chain rule: -(2t/(1-t^2)^2) exp(-1/(1-t^2)) at t = 1/2
    t = ctx.mpf(1) / 2
    expected = -(2 * t / (1 - t * t) ** 2) * ctx.exp(-1 / (1 - t * t))
    got = tf_derive(bump(1), 1)(Fraction(1, 2), FLD)
    assert close(got, expected)
    h = ctx.mpf(10) ** -10
    fd = (bump(1)(t + h, FLD) - bump(1)(t - h, FLD)) / (2 * h)
    assert abs(got - fd) < 1e-8


def test_window_derivatives_at_origin():
    for k in range(7):
        w = monomial_window(k)
        for j in range(9):
            assert close(w.derivative_at(0, j, FLD), 1 if j == k else 0)
    assert tf_derive(monomial_window(2), 2)(0, FLD) == 1


def test_window_support_and_plateau():
    w = monomial_window(0, 2, Fraction(1, 4))
    assert w(2, FLD) == 0 and w(Fraction(-5, 2), FLD) == 0
    assert close(w(Fraction(1, 2), FLD), 1)
    assert 0 < w(Fraction(3, 2), FLD).real < 1
    with pytest.raises(ValueError):
        smooth_cutoff(1, 1)


@pytest.mark.parametrize("phi", [bump(1), bump(Fraction(3, 2)), monomial_window(3)])
def test_jets_match_symbolic_diff(phi):
    expr = phi.expr
    sym = [expr]
    for _ in range(4):
        sym.append(sym[-1].diff())
    for t in (Fraction(-2, 3), Fraction(1, 5), Fraction(7, 8)):
        for j in range(5):
            via_tree = TestFunction(sym[j], phi.support)(t, FLD)
            via_jet = phi.derivative_at(t, j, FLD)
            assert close(via_jet, via_tree, ctx.mpf(10) ** -28)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.builds(GaussRat, st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4),
       st.fractions(-1, 1))
def test_combination_is_linear(weights, t):
    phi = bump(1)
    combo = tf_combine(phi, weights)
    direct = sum((FLD.coerce(w) * phi.derivative_at(t, k, FLD) for k, w in enumerate(weights)),
                 FLD.zero)
    assert close(combo(t, FLD), direct, ctx.mpf(10) ** -28)


def test_flat_at_support_edge():
    # all derivatives vanish at and beyond the edge
    phi = bump(1)
    for j in range(6):
        assert phi.derivative_at(1, j, FLD) == 0
        assert phi.derivative_at(Fraction(11, 10), j, FLD) == 0
    near = phi.derivative_at(Fraction(99, 100), 3, FLD)
    assert 0 < abs(near) < ctx.mpf(10) ** -9


def test_builders_simplify():
    assert add(const(1), const(2)) == const(3)
    assert mul(const(0), T) == const(0)
    assert mul(const(1), T) == T
    assert isinstance(bump(1).expr, ExpGate)
