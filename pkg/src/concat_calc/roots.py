"""Roots of univariate operators.

``exact_required``
    Rational root theorem over the Gaussian integers: after scaling ``p`` to
    coefficients in ``Z[i]``, every root ``alpha/beta`` in lowest terms has
    ``alpha | a_0`` and ``beta | a_n``.  Divisors are enumerated from the
    Gaussian prime factorization of each coefficient (rational primes of the
    norm are found with :func:`sympy.factorint`).

``numeric``
    Aberth-Ehrlich simultaneous iteration at raised working precision,
    single-linkage clustering of the iterates for multiplicities and a Newton
    polish of each cluster centre on ``p^(m-1)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .exppoly import Poly1, PolyOperator
from .scalar import EXACT, BigFloatField, ExactField, Field, GaussRat


class ExactFactorizationUnavailable(ValueError):
    """The polynomial does not split into linear factors over the Gaussian rationals."""


class NonConvergence(RuntimeError):
    """Numeric root iteration failed; ``dump`` holds the last iterates."""

    def __init__(self, msg: str, dump=None):
        super().__init__(msg)
        self.dump = dump


# --- Gaussian integers as (re, im) int pairs ---------------------------------

def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gnorm(a):
    return a[0] * a[0] + a[1] * a[1]


def _gdiv_exact(a, b):
    """``a / b`` if it lies in ``Z[i]``, else ``None``."""
    n = _gnorm(b)
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % n or im % n:
        return None
    return (re // n, im // n)


def _gmod(a, b):
    n = _gnorm(b)
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    q = (_round_div(re, n), _round_div(im, n))
    qb = _gmul(q, b)
    return (a[0] - qb[0], a[1] - qb[1])


def _round_div(x: int, n: int) -> int:
    return (2 * x + n) // (2 * n)


def _ggcd(a, b):
    while b != (0, 0):
        a, b = b, _gmod(a, b)
    return a


def _normalize_unit(a):
    """Representative of the associate class: real part > 0, imag part >= 0."""
    for u in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        c = _gmul(a, u)
        if c[0] > 0 and c[1] >= 0:
            return c
    return a


def _gaussian_primes_over(q: int):
    if q == 2:
        return [(1, 1)]
    if q % 4 == 3:
        return [(q, 0)]
    # q = 1 mod 4 splits as pi * conj(pi)
    for c in range(2, q):
        if pow(c, (q - 1) // 2, q) == q - 1:
            x = pow(c, (q - 1) // 4, q)
            break
    pi = _normalize_unit(_ggcd((q, 0), (x, 1)))
    return [pi, _normalize_unit((pi[0], -pi[1]))]


def gaussian_divisors(z) -> list[tuple[int, int]]:
    """One representative per associate class of the divisors of ``z != 0``."""
    from sympy import factorint

    n = _gnorm(z)
    if n == 0:
        raise ValueError("zero has no finite divisor set")
    factors: list[tuple[tuple[int, int], int]] = []
    rest = z
    for q in sorted(factorint(n)):
        for pi in _gaussian_primes_over(q):
            e = 0
            while True:
                nxt = _gdiv_exact(rest, pi)
                if nxt is None:
                    break
                rest, e = nxt, e + 1
            if e:
                factors.append((pi, e))
    divisors = []
    for exps in product(*(range(e + 1) for _, e in factors)):
        d = (1, 0)
        for (pi, _), k in zip(factors, exps):
            for _ in range(k):
                d = _gmul(d, pi)
        divisors.append(_normalize_unit(d))
    return sorted(set(divisors))


def _to_gaussian_ints(coeffs) -> list[tuple[int, int]]:
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.re.denominator, c.im.denominator)
    return [(int(c.re * den), int(c.im * den)) for c in coeffs]


def _deflate(coeffs: list, r: GaussRat) -> tuple[list, GaussRat]:
    """Synthetic division by ``(t - r)``; returns quotient and remainder."""
    out = []
    acc = GaussRat(0)
    for c in reversed(coeffs):
        acc = acc * r + c
        out.append(acc)
    rem = out.pop()
    return list(reversed(out)), rem


def _exact_roots(p: Poly1) -> list[tuple[GaussRat, int]]:
    coeffs = list(p.coeffs)
    found: dict[GaussRat, int] = {}
    zero_mult = 0
    while coeffs and not coeffs[0]:
        coeffs.pop(0)
        zero_mult += 1
    if zero_mult:
        found[GaussRat(0)] = zero_mult
    if len(coeffs) > 1:
        ints = _to_gaussian_ints(coeffs)
        lead_c = max(1, max(abs(complex(c)) for c in coeffs[:-1]) / abs(complex(coeffs[-1])))
        bound = 1 + lead_c
        alphas = gaussian_divisors(ints[0])
        betas = gaussian_divisors(ints[-1])
        units = (GaussRat(1), GaussRat(0, 1), GaussRat(-1), GaussRat(0, -1))
        candidates = set()
        for a in alphas:
            for b in betas:
                base = GaussRat(*a) / GaussRat(*b)
                if float(base.norm()) > bound * bound + 1:
                    continue
                for u in units:
                    candidates.add(base * u)
        for r in sorted(candidates, key=lambda z: (z.norm(), z.re, z.im)):
            while len(coeffs) > 1:
                q, rem = _deflate(coeffs, r)
                if rem:
                    break
                coeffs = q
                found[r] = found.get(r, 0) + 1
            if len(coeffs) == 1:
                break
    if len(coeffs) > 1:
        raise ExactFactorizationUnavailable(
            f"degree-{len(coeffs) - 1} factor {Poly1(coeffs)} has no Gaussian-rational root"
        )
    return sorted(found.items(), key=lambda rm: (rm[0].re, rm[0].im))


def roots(p: Poly1, mode: str = "exact_required", field: Field | None = None
          ) -> list[tuple[object, int]]:
    """Roots with multiplicities.

    ``mode="exact_required"`` needs an exact operator and returns Gaussian
    rationals (a factored form is passed through).  ``mode="numeric"`` returns
    roots in ``field`` (default: the operator's own field, or 128-bit bigfloat
    for exact input).
    """
    if p.degree < 1:
        raise ValueError("roots need a polynomial of degree >= 1")
    if mode == "exact_required":
        if not isinstance(p.field, ExactField):
            raise ExactFactorizationUnavailable("exact roots need exact coefficients")
        if isinstance(p, PolyOperator) and p.factored is not None:
            return sorted(p.factored, key=lambda rm: (rm[0].re, rm[0].im))
        return _exact_roots(p)
    if mode == "numeric":
        fld = field or (p.field if isinstance(p.field, BigFloatField) else BigFloatField())
        return aberth_roots(p, fld)
    raise ValueError(f"unknown mode {mode!r}")


def aberth_roots(p: Poly1, fld: BigFloatField, max_iter: int = 2000):
    """Aberth-Ehrlich roots with multiplicity detection, returned in ``fld``."""
    work = BigFloatField(2 * fld.prec + 32, fld.eps)
    ctx = work.ctx
    coeffs = [work.coerce(c) for c in p.coeffs]
    n = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    dmonic = [k * monic[k] for k in range(1, n + 1)]

    def horner(cs, z):
        acc = ctx.mpc(0)
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    radius = 1 + max(abs(c) for c in monic[:-1]) if n else 1
    zs = [radius * ctx.expjpi(ctx.mpf(2 * k) / n + ctx.mpf(1) / (2 * n)) for k in range(n)]
    tiny = ctx.mpf(2) ** (-(work.prec - 16))
    best, stall = None, 0
    for _ in range(max_iter):
        biggest = ctx.mpf(0)
        new = []
        for k, z in enumerate(zs):
            pv = horner(monic, z)
            if not pv:
                new.append(z)
                continue
            w = pv / horner(dmonic, z)
            s = ctx.fsum(1 / (z - zj) for j, zj in enumerate(zs) if j != k and z != zj)
            corr = w / (1 - w * s)
            new.append(z - corr)
            biggest = max(biggest, abs(corr) / (1 + abs(z)))
        zs = new
        if biggest < tiny:
            break
        if best is None or biggest < best / 2:
            best, stall = biggest, 0
        else:
            stall += 1
            if stall > 60:
                break
    out = _cluster_and_polish(zs, monic, work, fld)
    # residual check: the product form must reproduce p
    rebuilt = Poly1([fld.coerce(lead)], fld)
    for r, m in out:
        for _ in range(m):
            rebuilt = rebuilt * Poly1([-r, 1], fld)
    scale = max(abs(fld.coerce(c)) for c in p.coeffs)
    worst = max(abs(fld.coerce(p.coeff(k)) - rebuilt.coeff(k)) for k in range(n + 1))
    if worst > fld.tolerance * max(1, scale):
        raise NonConvergence(
            f"Aberth iteration did not reproduce p (coefficient error {ctx.nstr(worst, 5)})",
            dump=[fld.to_str(fld.coerce(z)) for z in zs],
        )
    return out


def _cluster_and_polish(zs, monic, work: BigFloatField, fld: BigFloatField):
    ctx = work.ctx
    n = len(zs)
    radius = ctx.mpf(fld.eps) ** (ctx.mpf(1) / max(n, 1))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(zs[i] - zs[j]) < radius * (1 + abs(zs[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(zs[i])
    poly = Poly1(monic, work)
    out = []
    for members in groups.values():
        m = len(members)
        center = ctx.fsum(members) / m
        target = poly
        for _ in range(m - 1):
            target = target.derive()
        dtarget = target.derive()
        for _ in range(200):
            d = dtarget(center)
            if not d:
                break
            step = target(center) / d
            center -= step
            if abs(step) < ctx.mpf(2) ** (-(work.prec - 8)) * (1 + abs(center)):
                break
        out.append((fld.coerce(center), m))
    out.sort(key=lambda rm: fld.sort_key(rm[0]))
    return out


def multiplicity_split(rts) -> tuple[list, list]:
    """(repeated, simple) roots."""
    return [r for r in rts if r[1] >= 2], [r for r in rts if r[1] == 1]
