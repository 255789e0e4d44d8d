"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from concat_calc.exppoly import ExpPoly, Poly1, PolyOperator
from concat_calc.scalar import GaussRat

small_fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
gauss = st.builds(GaussRat, small_fracs, small_fracs)
nonzero_gauss = gauss.filter(bool)


def polys(max_deg: int = 4):
    return st.lists(gauss, min_size=0, max_size=max_deg + 1).map(Poly1)


def operators(min_deg: int = 0, max_deg: int = 4):
    return st.builds(lambda cs, lead: PolyOperator(cs + [lead]),
                     st.lists(gauss, min_size=min_deg, max_size=max_deg), nonzero_gauss)


@st.composite
def exppolys(draw, max_terms: int = 3, max_deg: int = 2):
    n = draw(st.integers(0, max_terms))
    terms = [(draw(gauss), draw(polys(max_deg))) for _ in range(n)]
    return ExpPoly(terms)
