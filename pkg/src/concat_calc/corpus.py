"""Seeded random instances and the named operator corpus."""

from __future__ import annotations

import random
from fractions import Fraction

from .exppoly import PolyOperator
from .pde import MultiPoly
from .scalar import GaussRat

# name, operator text, mode, concatenable
NAMED_OPERATORS = (
    ("transport", "t + x1", "growing", True),
    ("heat", "t - x1^2", "growing", True),
    ("schroedinger", "t - i*x1^2", "oscillatory", True),
    ("wave", "t^2 - x1^2", "growing", False),
    ("beam", "t^2 + x1^4", "growing", False),
)


def gauss_rat(rng: random.Random, num: int = 6, den: int = 3, nonzero: bool = False) -> GaussRat:
    while True:
        z = GaussRat(Fraction(rng.randint(-num, num), rng.randint(1, den)),
                     Fraction(rng.randint(-num, num), rng.randint(1, den)))
        if z or not nonzero:
            return z


def root_pattern(rng: random.Random, deg: int, pattern: str) -> list[tuple[GaussRat, int]]:
    """Distinct roots of total multiplicity ``deg``.

    ``"distinct"``: all simple.  ``"repeated"``: at least one root of multiplicity >= 2.
    """
    if deg < 1 or (pattern == "repeated" and deg < 2):
        raise ValueError("degree too small for the pattern")
    mults: list[int] = []
    if pattern == "distinct":
        mults = [1] * deg
    elif pattern == "repeated":
        first = rng.randint(2, deg)
        mults = [first]
        left = deg - first
        while left:
            m = rng.randint(1, left)
            mults.append(m)
            left -= m
    else:
        raise ValueError(f"unknown pattern {pattern!r}")
    roots: list[GaussRat] = []
    while len(roots) < len(mults):
        z = gauss_rat(rng)
        if z not in roots:
            roots.append(z)
    return list(zip(roots, mults))


def random_operator(rng: random.Random, deg: int, pattern: str) -> PolyOperator:
    """``lead * prod (t - r)^m`` with a random nonzero leading coefficient, factored form kept."""
    return PolyOperator.from_roots(root_pattern(rng, deg, pattern), gauss_rat(rng, nonzero=True))


def random_multipoly(rng: random.Random, d: int, tdeg: int, xdeg: int = 3,
                     terms: int = 3) -> MultiPoly:
    """Sparse random operator with a nonzero ``t^tdeg`` coefficient."""
    tco = []
    for k in range(tdeg + 1):
        mons = {}
        for _ in range(rng.randint(0 if k < tdeg else 1, terms)):
            exps = tuple(rng.randint(0, xdeg) for _ in range(d))
            mons[exps] = gauss_rat(rng, 5, 4, nonzero=True)
        tco.append(mons)
    P = MultiPoly(d, tco)
    if len(P.tcoeffs) != tdeg + 1:  # cancellation emptied the leading coefficient
        return random_multipoly(rng, d, tdeg, xdeg, terms)
    return P
