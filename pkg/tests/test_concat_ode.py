import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concat_calc.concat_ode import (Closure, ConstantPolynomial, Counterexample, certificate_ode,
                                    decide_ode, matched_pair_residual, verify_certificate)
from concat_calc.corpus import random_operator
from concat_calc.distribution import DeltaComb
from concat_calc.exppoly import ExpPoly, PolyOperator
from concat_calc.scalar import EXACT, BigFloatField, GaussRat
from strategies import gauss, nonzero_gauss, operators

FLD = BigFloatField(128)


def test_decide():
    assert decide_ode(PolyOperator([3, 1]))
    assert not decide_ode(PolyOperator([-1, 0, 1]))
    with pytest.raises(ConstantPolynomial):
        decide_ode(PolyOperator([5]))
    with pytest.raises(ConstantPolynomial):
        certificate_ode(PolyOperator([]))


def test_closure_certificate():
    p = PolyOperator([GaussRat(-3, 1), 2])
    cert = certificate_ode(p)
    assert isinstance(cert, Closure) and cert.lam == GaussRat(3, -1) / 2
    rep = verify_certificate(cert, p, numeric_crosscheck=True)
    assert rep.passed, str(rep)
    assert [c.name for c in rep.checks][-1] == "adjoint_oracle"


def test_difference_of_squares():
    p = PolyOperator([-1, 0, 1])
    cert = certificate_ode(p)
    assert cert.kind == "distinct" and cert.lam == 1 and cert.mu == -1
    assert cert.residual.regular.is_zero() and cert.residual.singular == DeltaComb([-2])
    assert verify_certificate(cert, p, numeric_crosscheck=True).passed


def test_repeated_root_preferred():
    p = PolyOperator.from_roots([(GaussRat(2), 1), (GaussRat(-1), 2)])
    cert = certificate_ode(p)
    assert cert.kind == "repeated" and cert.lam == -1
    assert cert.u2 == ExpPoly.exp(-1, [1, 1])
    assert cert.residual.singular.coeff(1) == p.leading


def test_tampered_u2_fails_at_membership():
    p = PolyOperator([-1, 0, 1])
    cert = certificate_ode(p)
    bad = dataclasses.replace(cert, u2=ExpPoly.exp(2 * cert.mu))
    rep = verify_certificate(bad, p)
    assert rep.status == "fail" and rep.failed_at == "u2_in_S_p"


def test_other_tampering():
    p = PolyOperator([-1, 0, 1])
    cert = certificate_ode(p)
    assert verify_certificate(dataclasses.replace(cert, lam=GaussRat(3)), p).failed_at == "lambda_root"
    forged = dataclasses.replace(cert, residual=cert.residual.scale(2))
    assert verify_certificate(forged, p).failed_at == "residual_recomputed"
    assert verify_certificate(cert, PolyOperator([-4, 0, 1])).status == "fail"
    assert verify_certificate(Closure(EXACT, GaussRat(2)), PolyOperator([-1, 1])).failed_at == "lambda"
    assert verify_certificate(Closure(EXACT, 1), p).failed_at == "degree"
    assert verify_certificate(dataclasses.replace(cert, kind="weird"), p).status == "fail"


def test_numeric_certificate_for_irrational_roots():
    p = PolyOperator([-2, 0, 1])
    cert = certificate_ode(p, "numeric", FLD)
    assert cert.field == FLD
    assert abs(cert.lam - FLD.ctx.sqrt(2)) < 1e-35
    assert verify_certificate(cert, p, numeric_crosscheck=True).passed


def test_inconclusive_on_dust():
    # numerically coincident roots: distinct at 1e-25, below the comb threshold
    eps = GaussRat(1) / 10**25
    p = PolyOperator.from_roots([(GaussRat(0), 1), (eps, 1)]).to_field(FLD)
    cert = Counterexample(FLD, "distinct", FLD.coerce(eps), FLD.zero, ExpPoly.exp(FLD.coerce(eps), [1], FLD),
                          ExpPoly.exp(0, [1], FLD), None)
    from concat_calc.distribution import dist_apply_op, dist_from_concat

    cert = dataclasses.replace(cert, residual=dist_apply_op(p, dist_from_concat(cert.u1, cert.u2)))
    rep = verify_certificate(cert, p)
    assert rep.status == "inconclusive"


@given(nonzero_gauss, gauss)
def test_matched_pairs_have_zero_residual(a1, c):
    p = PolyOperator([a1 * GaussRat(2, -1), a1])
    assert matched_pair_residual(p, c).is_zero()


def test_matched_pair_needs_degree_one():
    with pytest.raises(ValueError):
        matched_pair_residual(PolyOperator([-1, 0, 1]), 1)


@settings(max_examples=40, deadline=None)
@given(operators(2, 4), nonzero_gauss)
def test_certificates_scale_invariant(p, c):
    try:
        cert = certificate_ode(p)
    except ValueError:
        return  # not split over the Gaussian rationals
    scaled = PolyOperator(p.scale(c).coeffs)
    other = certificate_ode(scaled)
    assert (other.kind, other.lam, other.mu) == (cert.kind, cert.lam, cert.mu)
    assert other.residual.singular == cert.residual.singular.scale(c)
    assert verify_certificate(other, scaled).passed


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6), st.sampled_from(["distinct", "repeated"]))
def test_exact_certificates_verify(seed, deg, pattern):
    p = random_operator(random.Random(seed), deg, pattern)
    cert = certificate_ode(p)
    assert cert.kind == pattern
    rep = verify_certificate(cert, p)
    assert rep.passed, str(rep)


def test_report_text():
    p = PolyOperator([-1, 0, 1])
    text = str(verify_certificate(certificate_ode(p), p))
    assert text.splitlines()[-1] == "overall: pass"
    assert "top_coefficient" in text
