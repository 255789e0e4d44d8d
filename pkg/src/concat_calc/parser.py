"""Text syntax for operators, exponential polynomials, distributions and test functions.

Operator grammar (``^`` binds tighter than unary minus, which binds tighter
than ``*``, which binds tighter than binary ``+``/``-``)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)?
    atom   := NUMBER | "i" | "t" | "x1" | "x2" | ... | "(" expr ")"

NUMBER is an integer, a decimal (read exactly) or a rational ``a/b``, with an
optional ``i`` suffix for imaginary literals.  Exponential polynomials also
accept ``exp(c*t)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .distribution import ConcatFunction, DeltaComb, Distribution
from .exppoly import ExpPoly, Poly1, PolyOperator
from .pde import MultiPoly
from .scalar import EXACT, GaussRat, format_exact
from .testfn import TestFunction, bump, monomial_window

MAX_EXPONENT = 64
MAX_DEGREE = 256


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, src: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.src = src


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][-+]?\d+)?(?:/\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


def _number(text: str) -> GaussRat:
    imag = text.endswith("i")
    body = text[:-1] if imag else text
    if "/" in body:
        num, den = body.split("/")
        val = Fraction(num) / Fraction(den) if int(den) else None
    else:
        val = Fraction(body)
    if val is None:
        raise ZeroDivisionError
    return GaussRat(0, val) if imag else GaussRat(val)


class _Parser:
    """Recursive descent over tokens; the algebra supplies the value semantics."""

    def __init__(self, src: str, alg):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.alg = alg

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.pos, self.src)

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = repr(self.tok.text) if self.tok.kind != "end" else "end of input"
            self.fail(f"expected {text!r}, found {found}")
        tok = self.tok
        self.i += 1
        return tok

    def parse(self):
        if self.tok.kind == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.tok.text in "+-" and self.tok.kind == "op":
            op = self.tok.text
            self.i += 1
            w = self.term()
            v = self.alg.add(v, w) if op == "+" else self.alg.add(v, self.alg.neg(w))
        return v

    def term(self):
        v = self.unary()
        while self.tok.text == "*":
            self.i += 1
            v = self.alg.mul(v, self.unary())
        return v

    def unary(self):
        if self.tok.text == "-":
            self.i += 1
            return self.alg.neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text != "^":
            return base
        self.i += 1
        tok = self.tok
        if tok.kind != "num" or not tok.text.isdigit():
            self.fail("exponent must be a nonnegative integer literal", tok)
        k = int(tok.text)
        if k > MAX_EXPONENT:
            self.fail(f"exponent overflow ({k} > {MAX_EXPONENT})", tok)
        self.i += 1
        if self.tok.text == "^":
            self.fail("chained exponents need parentheses")
        return self.alg.power(base, k, tok)

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            try:
                return self.alg.const(_number(tok.text))
            except ZeroDivisionError:
                self.fail("zero denominator", tok)
        if tok.kind == "name":
            self.i += 1
            if tok.text == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return self.alg.exp(arg, tok)
            return self.alg.name(tok)
        if tok.text == "(":
            self.i += 1
            v = self.expr()
            self.expect(")")
            return v
        if tok.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {tok.text!r}")


_XVAR = re.compile(r"x(\d+)$")


class _PolyAlgebra:
    """Polynomials in ``t, x1..xd`` as ``{(tpow, exps): coeff}``."""

    def __init__(self, parser_ref: Callable[[], _Parser], d: int):
        self.p = parser_ref
        self.d = d

    def const(self, c: GaussRat):
        return {(0, (0,) * self.d): c} if c else {}

    def name(self, tok: Token):
        if tok.text == "i":
            return self.const(GaussRat(0, 1))
        if tok.text == "t":
            return {(1, (0,) * self.d): GaussRat(1)}
        m = _XVAR.match(tok.text)
        if m:
            j = int(m.group(1))
            if j == 0 or m.group(1).startswith("0"):
                self.p().fail("spatial variables are x1, x2, ... (x0 is not allowed)", tok)
            if j > self.d:
                self.p().fail(f"{tok.text} exceeds the dimension d = {self.d}", tok)
            e = [0] * self.d
            e[j - 1] = 1
            return {(0, tuple(e)): GaussRat(1)}
        self.p().fail(f"unknown identifier {tok.text!r}", tok)

    def add(self, a, b):
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, GaussRat(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def neg(self, a):
        return {k: -c for k, c in a.items()}

    def mul(self, a, b):
        out: dict = {}
        for (ta, ea), ca in a.items():
            for (tb, eb), cb in b.items():
                key = (ta + tb, tuple(x + y for x, y in zip(ea, eb)))
                if key[0] > MAX_DEGREE or any(e > MAX_DEGREE for e in key[1]):
                    raise ParseError(f"degree overflow (> {MAX_DEGREE})", self.p().tok.pos, self.p().src)
                out[key] = out.get(key, GaussRat(0)) + ca * cb
        return {k: c for k, c in out.items() if c}

    def power(self, a, k: int, tok: Token):
        out = self.const(GaussRat(1))
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def exp(self, arg, tok: Token):
        self.p().fail("exp(...) is not allowed in an operator", tok)


def _max_x_index(src: str) -> int:
    d = 0
    for tok in tokenize(src):
        if tok.kind == "name":
            m = _XVAR.match(tok.text)
            if m:
                d = max(d, int(m.group(1)))
    return d


def parse_operator(src: str, d: int | None = None) -> MultiPoly:
    """Operator text to :class:`MultiPoly`; ``d=None`` uses the largest ``x`` index."""
    dim = _max_x_index(src) if d is None else d
    holder: list[_Parser] = []
    parser = _Parser(src, _PolyAlgebra(lambda: holder[0], dim))
    holder.append(parser)
    poly = parser.parse()
    n = max((t for t, _ in poly), default=-1)
    tco: list[dict] = [{} for _ in range(n + 1)]
    for (t, e), c in poly.items():
        tco[t][e] = c
    return MultiPoly(dim, tco)


def parse_univariate(src: str) -> PolyOperator:
    """Operator in ``t`` alone."""
    P = parse_operator(src, 0)
    return PolyOperator([dict(m).get((), GaussRat(0)) for m in P.tcoeffs])


# --- printing ------------------------------------------------------------------

def _graded_lex_key(exps: tuple[int, ...]):
    return (-sum(exps), tuple(-e for e in exps))


def _scalar_factor(c: GaussRat) -> tuple[str, str | None]:
    """(sign, body) with ``body=None`` for a unit coefficient."""
    if c.im and c.re:
        return "+", f"({format_exact(c)})"
    sign = "-" if (c.re < 0 or c.im < 0) else "+"
    a = GaussRat(abs(c.re), abs(c.im))
    if a == GaussRat(1):
        return sign, None
    if a == GaussRat(0, 1):
        return sign, "i"
    return sign, format_exact(a)


def _monomial(exps: tuple[int, ...]) -> list[str]:
    return [f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(exps) if e]


def _tpart(k: int) -> list[str]:
    return [] if k == 0 else ["t" if k == 1 else f"t^{k}"]


def _join(parts: list[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _signed_terms(mons, extra: list[str]) -> list[tuple[str, str]]:
    parts = []
    for exps, c in sorted(mons, key=lambda m: _graded_lex_key(m[0])):
        sign, body = _scalar_factor(c)
        factors = ([body] if body else []) + _monomial(exps) + extra
        parts.append((sign, "*".join(factors) if factors else "1"))
    return parts


def print_operator(P: MultiPoly | Poly1) -> str:
    """Canonical text: descending powers of ``t``, graded-lex monomials, exact rationals."""
    if isinstance(P, Poly1):
        P = MultiPoly.from_univariate(P)
    parts: list[tuple[str, str]] = []
    for k in range(len(P.tcoeffs) - 1, -1, -1):
        mons = P.tcoeffs[k]
        if not mons:
            continue
        if len(mons) == 1 or k == 0:
            parts.extend(_signed_terms(mons, _tpart(k)))
        else:
            inner = _join(_signed_terms(mons, []))
            parts.append(("+", "*".join([f"({inner})"] + _tpart(k))))
    return _join(parts)


# --- exponential polynomials ---------------------------------------------------

class _ExpAlgebra:
    def __init__(self, parser_ref: Callable[[], _Parser]):
        self.p = parser_ref

    def const(self, c: GaussRat):
        return ExpPoly.exp(0, [c]) if c else ExpPoly.zero()

    def name(self, tok: Token):
        if tok.text == "i":
            return self.const(GaussRat(0, 1))
        if tok.text == "t":
            return ExpPoly.exp(0, [0, 1])
        self.p().fail(f"unknown identifier {tok.text!r}", tok)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        terms = []
        for la, qa in a.terms:
            for lb, qb in b.terms:
                terms.append((la + lb, qa * qb))
        out = ExpPoly(terms)
        if any(q.degree > MAX_DEGREE for _, q in out.terms):
            raise ParseError(f"degree overflow (> {MAX_DEGREE})", self.p().tok.pos, self.p().src)
        return out

    def power(self, a, k: int, tok: Token):
        out = self.const(GaussRat(1))
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def exp(self, arg: ExpPoly, tok: Token):
        if arg.is_zero():
            return self.const(GaussRat(1))
        if len(arg.terms) != 1 or arg.terms[0][0] != GaussRat(0):
            self.p().fail("exp argument must be c*t", tok)
        q = arg.terms[0][1]
        if q.degree != 1 or q.coeff(0):
            self.p().fail("exp argument must be c*t (no constant term)", tok)
        return ExpPoly.exp(q.coeff(1))


def parse_exppoly(src: str) -> ExpPoly:
    """E.g. ``(1 + 2*t)*exp((3/2 + 1i)*t) - exp(-t)``; exact coefficients."""
    holder: list[_Parser] = []
    parser = _Parser(src, _ExpAlgebra(lambda: holder[0]))
    holder.append(parser)
    return parser.parse()


def parse_scalar(src: str) -> GaussRat:
    """A constant expression such as ``-3/2 + 1/4i``."""
    v = parse_exppoly(src)
    if v.is_zero():
        return GaussRat(0)
    if len(v.terms) != 1 or v.terms[0][0] != GaussRat(0) or v.terms[0][1].degree != 0:
        raise ParseError("expected a constant", 0, src)
    return v.terms[0][1].coeff(0)


_SECTION = re.compile(r"\[(left|right|comb)\]")


def parse_distribution(src: str) -> Distribution:
    """``[left] <exppoly> [right] <exppoly> [comb] c0, c1, ...``; missing sections are zero."""
    pieces = _SECTION.split(src)
    if pieces[0].strip():
        raise ParseError("expected [left], [right] or [comb]", 0, src)
    sections: dict[str, str] = {}
    offset = len(pieces[0])
    for name, body in zip(pieces[1::2], pieces[2::2]):
        if name in sections:
            raise ParseError(f"duplicate [{name}] section", src.find(f"[{name}]", offset), src)
        sections[name] = body
    left = parse_exppoly(sections["left"]) if sections.get("left", "").strip() else ExpPoly.zero()
    right = parse_exppoly(sections["right"]) if sections.get("right", "").strip() else ExpPoly.zero()
    comb_src = sections.get("comb", "").strip()
    comb = [parse_scalar(c) for c in comb_src.split(",")] if comb_src else []
    return Distribution(ConcatFunction(left, right), DeltaComb(comb, EXACT))


_TESTFN = re.compile(r"\s*(bump|window)\s*\((.*)\)\s*$")


def parse_testfn(src: str) -> TestFunction:
    """``bump(a)`` or ``window(k[, a[, plateau]])``; numbers may be rationals."""
    m = _TESTFN.match(src)
    if not m:
        raise ParseError("expected bump(a) or window(k, a, plateau)", 0, src)
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2).strip() else []
    try:
        vals = [Fraction(a) for a in args]
    except ValueError as exc:
        raise ParseError(f"bad number in test function: {exc}", m.start(2), src) from None
    if m.group(1) == "bump":
        if len(vals) > 1:
            raise ParseError("bump takes one argument", m.start(2), src)
        return bump(*vals)
    if not 1 <= len(vals) <= 3 or vals[0].denominator != 1:
        raise ParseError("window takes an integer order and up to two radii", m.start(2), src)
    return monomial_window(int(vals[0]), *vals[1:])
