"""Scalar fields: exact Gaussian rationals and context-carrying bigfloats.

Every algebraic object in the package (polynomials, exponential polynomials,
distributions) is tied to one *field* object.  The field knows how to coerce
inputs, how to decide zero, and how to order values canonically.  Two fields
exist:

``EXACT``
    Gaussian rationals ``a/b + c/d i`` backed by :class:`fractions.Fraction`.
    Zero testing is decidable and arithmetic is bit-exact.

``BigFloatField(prec, eps)``
    Complex floats from a private :class:`mpmath.ctx_mp.MPContext` at ``prec``
    bits.  ``is_zero(s)`` means ``|s| < eps``.  The context is owned by the
    field instance; nothing touches ``mpmath.mp``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any

from mpmath.ctx_mp import MPContext


class BackendMismatch(ValueError):
    """Raised when objects from different scalar fields are combined."""


class TranscendentalEvaluation(ValueError):
    """Raised when an exact value would require a transcendental function."""


def _frac(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussRat:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @classmethod
    def of(cls, x: Any) -> GaussRat:
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            raise TypeError("refusing to convert a float complex to an exact scalar")
        return cls(x, 0)

    def __add__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussRat(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussRat(1) / self**(-k)
        result, base = GaussRat(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = _maybe_gauss(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> GaussRat:
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussRat({format_exact(self)!r})"

    def __str__(self):
        return format_exact(self)


def _maybe_gauss(x):
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRat(x, 0)
    return NotImplemented


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_exact(z: GaussRat) -> str:
    """Render as ``a/b + c/d i`` with the imaginary unit glued to its coefficient."""
    if not z.im:
        return _fmt_frac(z.re)
    im = f"{_fmt_frac(abs(z.im))}i"
    if not z.re:
        return ("-" if z.im < 0 else "") + im
    return f"{_fmt_frac(z.re)} {'-' if z.im < 0 else '+'} {im}"


class ExactField:
    """The field of Gaussian rationals; singleton ``EXACT``."""

    name = "exact"
    zero = GaussRat(0)
    one = GaussRat(1)
    i = GaussRat(0, 1)

    def coerce(self, x: Any) -> GaussRat:
        return GaussRat.of(x)

    def is_zero(self, x: GaussRat) -> bool:
        return not x

    def eq(self, a: GaussRat, b: GaussRat) -> bool:
        return a == b

    def sort_key(self, x: GaussRat):
        return (x.re, x.im)

    def exp(self, x: GaussRat) -> GaussRat:
        if x:
            raise TranscendentalEvaluation("exp of a nonzero exact scalar is not exact")
        return self.one

    def to_str(self, x: GaussRat) -> str:
        return format_exact(x)

    def __eq__(self, other):
        return isinstance(other, ExactField)

    def __hash__(self):
        return hash("exact")

    def __repr__(self):
        return "EXACT"


EXACT = ExactField()


@dataclass(frozen=True)
class BigFloatField:
    """Complex floats at ``prec`` bits with absolute zero-tolerance ``eps``.

    ``eps`` is stored as a decimal string so that the field stays hashable and
    serialises without loss.
    """

    prec: int = 128
    eps: str = "1e-30"
    ctx: MPContext = field(init=False, repr=False, compare=False, hash=False)

    name = "bigfloat"

    def __post_init__(self):
        if self.prec < 16:
            raise ValueError("precision must be at least 16 bits")
        ctx = MPContext()
        ctx.prec = self.prec
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "_eps", ctx.mpf(self.eps))

    @property
    def zero(self):
        return self.ctx.mpc(0)

    @property
    def one(self):
        return self.ctx.mpc(1)

    @property
    def i(self):
        return self.ctx.mpc(0, 1)

    @property
    def tolerance(self):
        return self._eps

    def coerce(self, x: Any):
        ctx = self.ctx
        if isinstance(x, GaussRat):
            return ctx.mpc(
                ctx.mpf(x.re.numerator) / x.re.denominator,
                ctx.mpf(x.im.numerator) / x.im.denominator,
            )
        if isinstance(x, Fraction):
            return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
        if hasattr(x, "real") and hasattr(x, "imag") and not isinstance(x, (int, float)):
            return ctx.mpc(ctx.mpf(x.real), ctx.mpf(x.imag))
        return ctx.mpc(x)

    def is_zero(self, x) -> bool:
        return abs(x) < self._eps

    def eq(self, a, b) -> bool:
        return abs(a - b) < self._eps

    def sort_key(self, x):
        return (x.real, x.imag)

    def exp(self, x):
        return self.ctx.exp(x)

    def to_str(self, x) -> str:
        return format_bigfloat(self, x)


def format_bigfloat(fld: BigFloatField, x) -> str:
    ctx = fld.ctx
    digits = int(fld.prec * 0.30103) + 3

    def one(v):
        s = ctx.nstr(v, digits, strip_zeros=True, min_fixed=-4, max_fixed=6)
        return s

    re_, im_ = x.real, x.imag
    if not im_:
        return one(re_)
    ims = one(abs(im_)) + "i"
    if not re_:
        return ("-" if im_ < 0 else "") + ims
    return f"{one(re_)} {'-' if im_ < 0 else '+'} {ims}"


Field = ExactField | BigFloatField


def same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise BackendMismatch(f"scalar backends differ: {first!r} vs {f!r}")
    return first


def scalar_to_json(fld: Field, x) -> dict[str, str]:
    """Lossless JSON form; every number is a string."""
    if isinstance(fld, ExactField):
        return {
            "num_re": str(x.re.numerator),
            "den_re": str(x.re.denominator),
            "num_im": str(x.im.numerator),
            "den_im": str(x.im.denominator),
        }
    digits = int(fld.prec * 0.30103) + 5
    return {
        "bigfloat": str(fld.prec),
        "re": fld.ctx.nstr(x.real, digits, strip_zeros=False),
        "im": fld.ctx.nstr(x.imag, digits, strip_zeros=False),
    }


def scalar_from_json(fld: Field, obj: dict[str, str]):
    if "num_re" in obj:
        z = GaussRat(
            Fraction(int(obj["num_re"]), int(obj["den_re"])),
            Fraction(int(obj["num_im"]), int(obj["den_im"])),
        )
        return fld.coerce(z)
    if isinstance(fld, ExactField):
        raise BackendMismatch("bigfloat scalar cannot be read into the exact field")
    return fld.ctx.mpc(fld.ctx.mpf(obj["re"]), fld.ctx.mpf(obj["im"]))


def field_to_json(fld: Field) -> dict[str, str]:
    if isinstance(fld, ExactField):
        return {"name": "exact"}
    return {"name": "bigfloat", "prec": str(fld.prec), "eps": fld.eps}


def field_from_json(obj: dict[str, str]) -> Field:
    if obj.get("name") == "exact":
        return EXACT
    if obj.get("name") == "bigfloat":
        return BigFloatField(int(obj["prec"]), obj["eps"])
    raise ValueError(f"unknown scalar backend {obj!r}")
