import random

import pytest
from hypothesis import given, settings

from concat_calc.corpus import random_operator
from concat_calc.exppoly import PolyOperator
from concat_calc.roots import (ExactFactorizationUnavailable, NonConvergence, aberth_roots,
                               gaussian_divisors, multiplicity_split, roots)
from concat_calc.scalar import BigFloatField, GaussRat
from strategies import gauss

FLD = BigFloatField(128)


def as_dict(rts):
    return {r: m for r, m in rts}


def test_difference_of_squares():
    assert as_dict(roots(PolyOperator([-1, 0, 1]))) == {GaussRat(1): 1, GaussRat(-1): 1}


def test_irrational_roots():
    p = PolyOperator([-2, 0, 1])
    with pytest.raises(ExactFactorizationUnavailable):
        roots(p)
    got = sorted((r.real for r, _ in roots(p, "numeric", FLD)))
    s2 = FLD.ctx.sqrt(2)
    assert abs(got[0] + s2) < 1e-35 and abs(got[1] - s2) < 1e-35


def test_mixed_multiplicities_exact_and_numeric():
    pattern = [(GaussRat(1, 2), 3), (GaussRat(-1), 2), (GaussRat(0), 1)]
    p = PolyOperator(PolyOperator.from_roots(pattern).coeffs)  # drop the factored form
    assert as_dict(roots(p)) == dict(pattern)
    num = roots(p, "numeric", FLD)
    assert sorted(m for _, m in num) == [1, 2, 3]
    for r, m in num:
        exact = next(e for e, k in pattern if k == m)
        assert abs(r - FLD.coerce(exact)) < 1e-25
    rep, simple = multiplicity_split(num)
    assert len(rep) == 2 and len(simple) == 1


def test_factored_form_passes_through():
    p = PolyOperator.from_roots([(GaussRat(7, 3), 2)], lead=5)
    assert roots(p) == [(GaussRat(7, 3), 2)]


def test_gaussian_divisors():
    divs = set(gaussian_divisors((5, 0)))
    for d in [(1, 0), (2, 1), (1, 2), (5, 0), (3, 4)]:
        assert any(d == (a, b) or (d[0] * d[0] + d[1] * d[1]) == a * a + b * b for a, b in divs)
    for a, b in divs:
        n = a * a + b * b
        assert 25 % n == 0


def test_residual_guard_raises_with_dump(monkeypatch):
    import sys

    mod = sys.modules["concat_calc.roots"]

    def off_by_a_bit(zs, monic, work, fld):
        return [(fld.coerce(z) + fld.coerce(GaussRat(1, 1000)), 1) for z in zs]

    monkeypatch.setattr(mod, "_cluster_and_polish", off_by_a_bit)
    with pytest.raises(NonConvergence) as err:
        aberth_roots(PolyOperator([-2, 0, 0, 0, 0, 1]).to_field(FLD), FLD)
    assert len(err.value.dump) == 5


def test_few_iterations_still_polished():
    got = aberth_roots(PolyOperator([-2, 0, 0, 0, 0, 1]).to_field(FLD), FLD, max_iter=1)
    assert len(got) == 5


@settings(max_examples=30, deadline=None)
@given(gauss, gauss, gauss)
def test_recovers_random_cubics(a, b, c):
    coeffs = PolyOperator.from_roots([(a, 1), (b, 1), (c, 1)]).coeffs
    got = as_dict(roots(PolyOperator(coeffs)))
    expected: dict = {}
    for r in (a, b, c):
        expected[r] = expected.get(r, 0) + 1
    assert got == expected


def test_numeric_multiplicities_on_corpus():
    rng = random.Random(3)
    for _ in range(20):
        p = random_operator(rng, rng.randint(2, 6), rng.choice(["distinct", "repeated"]))
        exact = sorted(m for _, m in p.factored)
        num = sorted(m for _, m in roots(PolyOperator(p.coeffs), "numeric", FLD))
        assert num == exact
