"""Exact Gaussian-rational scalars.

A :class:`Scalar` is ``re + im*i`` with ``re`` and ``im`` arbitrary
precision rationals (``gmpy2.mpq``).  Every parameter in this package
(``lambda``, ``alpha``, ``kappa``, ``a``) lives here, so all identity
checks are exact equalities.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["Scalar", "ZERO", "ONE", "as_scalar", "parse_rational", "format_rational"]

_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)


def parse_rational(text: str | int) -> mpq:
    """Parse ``"p/q"`` or ``"p"`` (no decimal point) into an ``mpq``."""
    if isinstance(text, int) and not isinstance(text, bool):
        return mpq(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a 'p/q' string, got {text!r}")
    s = text.strip()
    if "." in s or "e" in s.lower() or not s:
        raise ValueError(f"rational must be a decimal-free 'p/q' string, got {text!r}")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return mpq(p, q)


def format_rational(x: mpq) -> str:
    return f"{x.numerator}/{x.denominator}"


def _to_mpq(x) -> mpq:
    if isinstance(x, type(_MPQ_ZERO)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction, Rational)):
        return mpq(x.numerator, x.denominator) if not isinstance(x, int) else mpq(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class Scalar:
    """Element of Q(i).  Immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _to_mpq(re))
        object.__setattr__(self, "im", _to_mpq(im))

    @classmethod
    def _make(cls, re: mpq, im: mpq) -> Scalar:
        # trusted constructor: both parts already mpq
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (Fraction(int(self.re.numerator), int(self.re.denominator)),
                         Fraction(int(self.im.numerator), int(self.im.denominator))))

    # -- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        try:
            o = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- arithmetic -----------------------------------------------------
    def __neg__(self) -> Scalar:
        return Scalar._make(-self.re, -self.im)

    def __pos__(self) -> Scalar:
        return self

    def __add__(self, other) -> Scalar:
        if type(other) is int:
            return Scalar._make(self.re + other, self.im)
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._make(o.re - self.re, o.im - self.im)

    def __mul__(self, other) -> Scalar:
        if type(other) is int:
            return Scalar._make(self.re * other, self.im * other if self.im else _MPQ_ZERO)
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return Scalar._make(a * c, _MPQ_ZERO)
        return Scalar._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        a, b = self.re, self.im
        norm = a * a + b * b
        if not norm:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._make(a / norm, -b / norm)

    def __truediv__(self, other) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> Scalar:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> Scalar:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> Scalar:
        return Scalar._make(self.re, -self.im)

    # -- display --------------------------------------------------------
    def __repr__(self) -> str:
        return f"Scalar({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*I"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*I)"


def _coerce(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if type(x) is int and -64 <= x <= 64:
        return _SMALL[x + 64]
    try:
        return as_scalar(x)
    except TypeError:
        return None


def as_scalar(x) -> Scalar:
    """Convert ints, Fractions, mpq, complex-with-integer-parts, ``"p/q"``
    strings and ``(re, im)`` pairs to :class:`Scalar`."""
    if isinstance(x, Scalar):
        return x
    if type(x) is int and -64 <= x <= 64:
        return _SMALL[x + 64]
    if isinstance(x, tuple) and len(x) == 2:
        return Scalar(x[0], x[1])
    if isinstance(x, complex):
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise TypeError("only integer-valued complex literals convert exactly")
        return Scalar(int(x.real), int(x.imag))
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return Scalar(x)


ZERO = Scalar._make(_MPQ_ZERO, _MPQ_ZERO)
ONE = Scalar._make(_MPQ_ONE, _MPQ_ZERO)
I = Scalar._make(_MPQ_ZERO, _MPQ_ONE)
_SMALL = tuple(Scalar._make(mpq(k), _MPQ_ZERO) for k in range(-64, 65))
