import dataclasses
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concat_calc.concat_ode import decide_ode
from concat_calc.corpus import NAMED_OPERATORS, random_multipoly
from concat_calc.exppoly import ExpPoly, PolyOperator
from concat_calc.parser import parse_operator
from concat_calc.pde import (DimensionMismatch, MultiPoly, TDegreeZero, ZeroOperator,
                             certificate_pde, decide_pde, eval_monomials, lift_commutes,
                             specialize, tdegree, verify_certificate_pde, witness_xi)
from concat_calc.scalar import GaussRat
from strategies import exppolys, gauss


@pytest.mark.parametrize("name, src, mode, yes", NAMED_OPERATORS)
def test_named_operators(name, src, mode, yes):
    P = parse_operator(src)
    assert decide_pde(P) is yes
    cert = certificate_pde(P, mode)
    assert cert.variant == ("closure" if yes else "counterexample")
    rep = verify_certificate_pde(cert, P, numeric_crosscheck=True)
    assert rep.passed, str(rep)
    assert "lift_annihilated" in [c.name for c in rep.checks]


def test_examples():
    wave = parse_operator("t^2 - x1^2")
    # the leading coefficient is constant, so the first grid point already works
    assert witness_xi(wave) == (GaussRat(0),)
    assert specialize(wave, [0]) == PolyOperator([0, 0, 1])
    assert certificate_pde(wave).base.kind == "repeated"
    assert specialize(wave, [1]) == PolyOperator([-1, 0, 1])
    cert = certificate_pde(wave, xi=[1])
    assert cert.base.residual.singular.coeffs == (GaussRat(-2),)
    assert verify_certificate_pde(cert, wave).passed
    heat = parse_operator("t - x1^2")
    assert specialize(heat, [2]) == PolyOperator([-4, 1])
    assert specialize(heat, [2], "oscillatory") == PolyOperator([4, 1])
    schr = parse_operator("t - i*x1^2")
    assert specialize(schr, [1], "oscillatory") == PolyOperator([GaussRat(0, 1), 1])


def test_degenerate_operators():
    with pytest.raises(TDegreeZero):
        decide_pde(parse_operator("x1^2 + 1"))
    with pytest.raises(ZeroOperator):
        tdegree(MultiPoly(2, []))
    with pytest.raises(DimensionMismatch):
        specialize(parse_operator("t + x1"), [1, 2])


def test_witness_skips_zeros():
    P = parse_operator("(x1 - 1)*(x2 - 2)*t^2 + t")
    assert witness_xi(P) == (GaussRat(0), GaussRat(0))
    P = parse_operator("x1*x2*t^2 + t")
    assert witness_xi(P) == (GaussRat(1), GaussRat(1))
    # a_n(i x) = 1 + x^2 vanishes nowhere on the grid in growing mode, but a_n(x) = 1 - x^2 does
    P = parse_operator("(1 - x1^2)*t^3")
    assert witness_xi(P, "growing") == (GaussRat(0),)


def test_witness_on_grid_random():
    rng = random.Random(11)
    for _ in range(100):
        d = rng.randint(1, 3)
        P = random_multipoly(rng, d, rng.randint(1, 3))
        for mode in ("growing", "oscillatory"):
            xi = witness_xi(P, mode)
            D = max((max(e) for e, _ in P.leading if e), default=0)
            assert all(0 <= x.re <= D and x.im == 0 for x in xi)
            assert specialize(P, xi, mode).degree == tdegree(P)
            # lexicographically first: no earlier grid point works
            for pt in product(range(D + 1), repeat=d):
                if pt == tuple(int(x.re) for x in xi):
                    break
                assert specialize(P, pt, mode).degree < tdegree(P)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), exppolys(2, 2), st.lists(gauss, min_size=2, max_size=2),
       st.sampled_from(["growing", "oscillatory"]))
def test_lift_commutes(seed, u, xi, mode):
    P = random_multipoly(random.Random(seed), 2, 2, xdeg=2)
    assert lift_commutes(P, u, xi, mode)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(1, 3))
def test_decision_matches_specialization(seed, d, n):
    P = random_multipoly(random.Random(seed), d, n)
    assert decide_pde(P) == decide_ode(specialize(P, witness_xi(P)))


def test_tampered_xi_fails():
    P = parse_operator("x1*t^2 - 1")
    cert = certificate_pde(P)
    assert cert.xi == (GaussRat(1),)
    bad = dataclasses.replace(cert, xi=(GaussRat(0),))
    assert verify_certificate_pde(bad, P).failed_at == "witness"
    shifted = dataclasses.replace(cert, xi=(GaussRat(2),))
    assert verify_certificate_pde(shifted, P).failed_at == "specialization"


def test_mismatched_specialization_and_shape():
    P = parse_operator("t^2 - x1^2")
    cert = certificate_pde(P)
    other = dataclasses.replace(cert, specialized=PolyOperator([-4, 0, 1]))
    assert verify_certificate_pde(other, P).failed_at == "specialization"
    assert verify_certificate_pde(dataclasses.replace(cert, mode="sideways"), P).failed_at == "mode"
    assert verify_certificate_pde(cert, parse_operator("t^2 - x1^2 + x2")).failed_at == "dimension"
    # same specialization at xi = 0, so the certificate transfers
    assert verify_certificate_pde(cert, parse_operator("t^2 - 4*x1^2")).passed
    assert verify_certificate_pde(cert, parse_operator("t^2 - x1^2 + 1")).failed_at == "specialization"


def test_explicit_xi_validated():
    P = parse_operator("x1*t^2 + t")
    with pytest.raises(ValueError):
        certificate_pde(P, xi=[0])
    cert = certificate_pde(P, xi=[3])
    assert verify_certificate_pde(cert, P).passed


def test_eval_monomials():
    P = parse_operator("2*x1^2*x2 + i")
    assert eval_monomials(P.coeff(0), [GaussRat(3), GaussRat(1, 1)]) == GaussRat(18, 19)
