from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concat_calc.exppoly import (ExpPoly, Poly1, PolyOperator, ep_add, ep_apply_op, ep_derive,
                                 ep_eval, ep_scale, ep_solution_basis, format_exppoly)
from concat_calc.parser import parse_exppoly
from concat_calc.scalar import EXACT, BackendMismatch, BigFloatField, GaussRat, \
    TranscendentalEvaluation
from strategies import exppolys, gauss, nonzero_gauss, operators

FLD = BigFloatField(128)
LAM = GaussRat(Fraction(3, 2), -1)


def test_add_identity_and_inverse():
    e = ExpPoly.exp(1)
    assert ep_add(e, ExpPoly.zero()) == e
    assert ep_add(e, ep_scale(-1, e)).is_zero()


def test_add_merges_equal_exponents():
    s = ep_add(ExpPoly.exp(2), ExpPoly.exp(2, [0, 1]))
    assert len(s.terms) == 1 and s == ExpPoly.exp(2, [1, 1])
    sf = s.to_field(FLD)
    ctx = FLD.ctx
    for t in (0, 1, 2):
        assert abs(ep_eval(sf, t) - (1 + t) * ctx.exp(2 * t)) < ctx.mpf(10) ** -30


def test_scale():
    assert ep_scale(0, ExpPoly.exp(1)).is_zero()
    a = ExpPoly.exp(1, [1, 1])
    assert ep_scale(1, a) == a
    v = ep_eval(ep_scale(3, ExpPoly.exp(2)).to_field(FLD), 1)
    assert abs(v - 3 * FLD.ctx.exp(2)) < FLD.ctx.mpf(10) ** -30


def test_derive_examples():
    assert ep_derive(ExpPoly.exp(LAM)) == ExpPoly.exp(LAM, [LAM])
    assert ep_derive(ExpPoly.exp(LAM, [0, 1])) == ExpPoly.exp(LAM, [1, LAM])
    assert ep_derive(ExpPoly.exp(0, [1, 1]), 2).is_zero()


def test_derive_against_finite_difference():
    ctx = FLD.ctx
    a = ExpPoly.exp(1, [0, 1]).to_field(FLD)
    h = ctx.mpf(10) ** -12
    t = ctx.mpf("0.3")
    fd = (ep_eval(a, t + h) - ep_eval(a, t - h)) / (2 * h)
    assert abs(ep_eval(ep_derive(a), t) - fd) < 1e-8
    assert abs(ep_eval(ep_derive(a), t) - (1 + t) * ctx.exp(t)) < ctx.mpf(10) ** -30


def test_eval():
    assert ep_eval(ExpPoly.exp(LAM, [1, 1]), 0) == GaussRat(1)
    assert abs(ep_eval(ExpPoly.exp(1, field=FLD), 1) - FLD.ctx.e) < FLD.ctx.mpf(10) ** -35
    assert ep_eval(ExpPoly.zero(), 0) == GaussRat(0)
    assert ep_eval(ExpPoly.zero(FLD), 5) == 0
    with pytest.raises(TranscendentalEvaluation):
        ep_eval(ExpPoly.exp(1), 1)


def test_apply_op_examples():
    assert ep_apply_op(PolyOperator([-LAM, 1]), ExpPoly.exp(LAM)).is_zero()
    sq = PolyOperator.from_roots([(LAM, 2)])
    assert ep_apply_op(sq, ExpPoly.exp(LAM, [GaussRat(2, 1), GaussRat(-3)])).is_zero()
    assert ep_apply_op(PolyOperator([0, 0, 1]), ExpPoly.exp(1)) == ExpPoly.exp(1)


def test_solution_basis():
    mu = GaussRat(-1, 2)
    assert ep_solution_basis([(LAM, 2)]) == [ExpPoly.exp(LAM), ExpPoly.exp(LAM, [0, 1])]
    assert ep_solution_basis([(LAM, 1), (mu, 1)]) == [ExpPoly.exp(LAM), ExpPoly.exp(mu)]
    assert ep_solution_basis([(0, 1)]) == [ExpPoly.exp(0)]
    with pytest.raises(ValueError):
        ep_solution_basis([(LAM, 0)])


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        ep_add(ExpPoly.exp(1), ExpPoly.exp(1, field=FLD))


def test_bigfloat_merges_close_exponents():
    fld = BigFloatField(128, "1e-30")
    near = fld.one + fld.ctx.mpf(10) ** -35
    a = ExpPoly([(fld.one, Poly1([1], fld)), (near, Poly1([2], fld))], fld)
    assert len(a.terms) == 1


def test_canonical_text():
    a = ExpPoly([(GaussRat(Fraction(3, 2), 1), Poly1([1, 2])), (0, Poly1([1]))])
    assert format_exppoly(a) == "exp(0*t) + (1 + 2*t)*exp((3/2 + 1i)*t)"
    assert format_exppoly(ExpPoly.exp(-1, [0, -3])) == "-3*t*exp((-1)*t)"
    assert format_exppoly(ExpPoly.zero()) == "0"


def test_poly_operator_factored_validation():
    p = PolyOperator.from_roots([(1, 2)], lead=3)
    assert p.coeffs == (GaussRat(3), GaussRat(-6), GaussRat(3))
    with pytest.raises(ValueError):
        PolyOperator([1, 0, 1], factored=[(GaussRat(1), 2)])


@given(exppolys())
def test_normalization_idempotent(a):
    again = ExpPoly(a.terms)
    assert again.terms == a.terms
    keys = [(lam.re, lam.im) for lam, _ in a.terms]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert all(not q.is_zero() for _, q in a.terms)


@given(exppolys())
def test_text_roundtrip(a):
    assert parse_exppoly(format_exppoly(a)) == a


@given(exppolys(), exppolys(), gauss, st.integers(0, 3))
def test_derive_linear(a, b, c, k):
    assert ep_derive(a + b, k) == ep_derive(a, k) + ep_derive(b, k)
    assert ep_derive(ep_scale(c, a), k) == ep_scale(c, ep_derive(a, k))


@settings(max_examples=50)
@given(operators(0, 4), operators(0, 4), exppolys())
def test_operator_composition(p, q, a):
    assert ep_apply_op(p * q, a) == ep_apply_op(p, ep_apply_op(q, a))


@given(st.lists(st.tuples(gauss, st.integers(1, 3)), min_size=1, max_size=3,
                unique_by=lambda rm: rm[0]), nonzero_gauss)
def test_basis_annihilated(roots, lead):
    p = PolyOperator.from_roots(roots, lead)
    for u in ep_solution_basis(roots):
        assert ep_apply_op(p, u).is_zero()


@settings(max_examples=30)
@given(exppolys(max_terms=2), st.builds(Fraction, st.integers(-8, 8), st.integers(1, 4)))
def test_bigfloat_agrees_with_exact(a, t):
    ctx = FLD.ctx
    af = a.to_field(FLD)
    exact = ep_derive(a, 2).to_field(FLD)
    assert abs(ep_eval(ep_derive(af, 2), t) - ep_eval(exact, t)) <= \
        ctx.mpf(10) ** -20 * (1 + abs(ep_eval(exact, t)))
