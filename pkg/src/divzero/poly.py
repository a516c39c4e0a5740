"""Sparse multivariate polynomials over Q(i).

:class:`LaurentPoly` allows negative exponents (the ring of Laurent
polynomials in ``t_1..t_n``); :class:`Poly` requires non-negative ones (the
polynomial ring ``C[x_1..x_n]`` that carries every module in this package).
Both store ``{exponent tuple: Scalar}`` with zeros pruned after every
operation and are immutable.

Axes are 1-based in every public function, matching the indexing of the
variables ``x_1..x_n``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ._backend import kernels
from .errors import AxisError, DimensionError
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "EXPONENT_LIMIT",
    "LaurentPoly",
    "Poly",
    "sigma_shift",
    "partial_degree",
    "translate",
    "evaluate",
]

#: hard bound on the magnitude of any stored exponent
EXPONENT_LIMIT = 2**31 - 1


def check_axis(i: int, n: int) -> None:
    if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= n:
        raise AxisError(f"axis {i!r} out of range 1..{n}")


def check_exponent(exp: Sequence[int], n: int, *, nonnegative: bool) -> tuple:
    if len(exp) != n:
        raise DimensionError(f"exponent {tuple(exp)} has length {len(exp)}, expected {n}")
    out = []
    for e in exp:
        if isinstance(e, bool) or not isinstance(e, int):
            raise TypeError(f"exponent entries must be int, got {e!r}")
        if abs(e) > EXPONENT_LIMIT:
            raise OverflowError(f"exponent entry {e} exceeds {EXPONENT_LIMIT}")
        if nonnegative and e < 0:
            raise ValueError(f"negative exponent {tuple(exp)} in a polynomial")
        out.append(e)
    return tuple(out)


class _SparsePoly:
    __slots__ = ("n", "terms", "_hash")
    laurent = True

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | None = None):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"number of variables must be a positive int, got {n!r}")
        clean: dict = {}
        for exp, c in (terms or {}).items():
            e = check_exponent(exp, n, nonnegative=not self.laurent)
            s = as_scalar(c)
            if e in clean:
                s = clean[e] + s
            if s:
                clean[e] = s
            else:
                clean.pop(e, None)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, n: int, terms: dict):
        # trusted: terms already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), (self.n, dict(self.terms)))

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, n: int):
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c=1):
        c = as_scalar(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def one(cls, n: int):
        return cls.constant(n, ONE)

    @classmethod
    def monomial(cls, n: int, exp: Sequence[int], c=1):
        return cls(n, {tuple(exp): c})

    @classmethod
    def variable(cls, n: int, i: int):
        """The generator ``x_i`` (1-based)."""
        check_axis(i, n)
        e = [0] * n
        e[i - 1] = 1
        return cls._raw(n, {tuple(e): ONE})

    @classmethod
    def gens(cls, n: int) -> list:
        return [cls.variable(n, i) for i in range(1, n + 1)]

    # -- queries --------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exp: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exp), ZERO)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.n, ZERO)

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def partial_degree(self, i: int) -> int:
        return partial_degree(self, i)

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.n}

    def __eq__(self, other) -> bool:
        if isinstance(other, _SparsePoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self.terms == type(self).constant(self.n, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.n, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, _SparsePoly):
            if other.n != self.n:
                raise DimensionError(f"{self.n} vs {other.n} variables")
            if type(other) is not type(self):
                # a Poly mixed with a LaurentPoly promotes to Laurent
                return None
            return other
        try:
            return type(self).constant(self.n, as_scalar(other))
        except TypeError:
            return None

    def _promote(self, other):
        if type(self) is LaurentPoly or type(other) is LaurentPoly:
            a = LaurentPoly._raw(self.n, self.terms)
            b = LaurentPoly._raw(other.n, other.terms)
            return a, b
        return self, other

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, _SparsePoly):
                a, b = self._promote(other)
                return a + b
            return NotImplemented
        return type(self)._raw(self.n, kernels.add(self.terms, o.terms))

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, _SparsePoly):
                a, b = self._promote(other)
                return a - b
            return NotImplemented
        return type(self)._raw(self.n, kernels.add(self.terms, o.terms, -ONE))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SparsePoly):
            o = self._coerce(other)
            if o is None:
                a, b = self._promote(other)
                return a * b
            return type(self)._raw(self.n, kernels.mul(self.terms, o.terms))
        try:
            c = as_scalar(other)
        except TypeError:
            return NotImplemented
        return type(self)._raw(self.n, kernels.scale(self.terms, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_scalar(other)
        return self * c.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = type(self).one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- display --------------------------------------------------------
    def to_str(self, name: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{name}{i + 1}" + (f"^{d}" if d != 1 else "")
                for i, d in enumerate(e)
                if d
            )
            if not mono:
                parts.append(str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_str("t" if self.laurent else "x")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.n}, {self})"


class LaurentPoly(_SparsePoly):
    """Element of ``C[t_1^{+-1}, ..., t_n^{+-1}]``."""

    __slots__ = ()
    laurent = True


class Poly(_SparsePoly):
    """Element of ``C[x_1, ..., x_n]``."""

    __slots__ = ()
    laurent = False

    def as_laurent(self) -> LaurentPoly:
        return LaurentPoly._raw(self.n, self.terms)


def sigma_shift(f: Poly, i: int, e: int = 1) -> Poly:
    """Apply ``sigma_i^e``: substitute ``x_i -> x_i - e``."""
    check_axis(i, f.n)
    k = [0] * f.n
    k[i - 1] = e
    return Poly._raw(f.n, kernels.translate(f.terms, tuple(k)))


def partial_degree(f: _SparsePoly, i: int) -> int:
    """Largest exponent of ``x_i`` in ``f``; ``-1`` for ``f == 0``."""
    check_axis(i, f.n)
    if not f.terms:
        return -1
    return max(e[i - 1] for e in f.terms)


def translate(f: Poly, k: Sequence[int]) -> Poly:
    """Substitute ``x_i -> x_i - k_i`` for every axis at once."""
    if len(k) != f.n:
        raise DimensionError(f"shift of length {len(k)} for {f.n} variables")
    if not isinstance(f, Poly):
        raise TypeError("translate needs a Poly")
    return Poly._raw(f.n, kernels.translate(f.terms, tuple(int(x) for x in k)))


def evaluate(f: _SparsePoly, point: Iterable) -> Scalar:
    pt = tuple(as_scalar(p) for p in point)
    if len(pt) != f.n:
        raise DimensionError(f"point of length {len(pt)} for {f.n} variables")
    return kernels.evaluate(f.terms, pt)
