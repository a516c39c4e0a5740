"""Vector fields on the n-torus with Laurent polynomial coefficients.

A :class:`VectorField` is a finite sum ``sum c * t^r d_i`` where
``d_i = t_i * (d/dt_i)`` is the Euler derivation.  The bracket is

    [t^r d_i, t^s d_j] = s_i t^(r+s) d_j - r_j t^(r+s) d_i

and membership in the divergence-zero subalgebras is decided one graded
component at a time.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import DimensionError, ExcludedExponentError, PreconditionError
from .poly import LaurentPoly, check_axis, check_exponent
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "N_MAX",
    "AlgebraTag",
    "VectorField",
    "GradedComponent",
    "Membership",
    "bracket",
    "div",
    "div_classical",
    "graded_decompose",
    "is_member",
    "basis_element",
    "cartan",
    "length",
    "apply_to_function",
    "check_generation_identities",
    "divergence_cocycle_probe",
    "split_cartan",
]

#: largest supported number of variables (desk scale)
N_MAX = 6


def check_rank(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or not 2 <= n <= N_MAX:
        raise DimensionError(f"n must satisfy 2 <= n <= {N_MAX}, got {n!r}")


class AlgebraTag(str, enum.Enum):
    W = "W"
    Stilde = "Stilde"
    StildePrime = "StildePrime"
    Scl = "Scl"
    SclPrime = "SclPrime"
    Sbar = "Sbar"
    SbarPrime = "SbarPrime"
    CartanH = "CartanH"


#: direct inclusions ``small -> larger``; the full lattice is the transitive closure
CONTAINED_IN: dict[AlgebraTag, tuple[AlgebraTag, ...]] = {
    AlgebraTag.CartanH: (AlgebraTag.Stilde, AlgebraTag.Sbar),
    AlgebraTag.StildePrime: (AlgebraTag.Stilde,),
    AlgebraTag.Stilde: (AlgebraTag.W,),
    AlgebraTag.SbarPrime: (AlgebraTag.Sbar, AlgebraTag.SclPrime),
    AlgebraTag.SclPrime: (AlgebraTag.Scl,),
    AlgebraTag.Sbar: (AlgebraTag.W,),
    AlgebraTag.Scl: (AlgebraTag.W,),
    AlgebraTag.W: (),
}


def contains(big: AlgebraTag, small: AlgebraTag) -> bool:
    """True when ``small`` is a subalgebra of ``big`` in the lattice."""
    if big == small:
        return True
    return any(contains(big, mid) for mid in CONTAINED_IN[small])


class VectorField:
    """Immutable sparse vector field; keys are ``(r, i)`` with 1-based ``i``."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, object] | None = None):
        check_rank(n)
        clean: dict = {}
        for key, c in (terms or {}).items():
            r, i = key
            r = check_exponent(r, n, nonnegative=False)
            check_axis(i, n)
            s = as_scalar(c)
            k = (r, i)
            if k in clean:
                s = clean[k] + s
            if s:
                clean[k] = s
            else:
                clean.pop(k, None)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, n: int, terms: dict) -> VectorField:
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    def __reduce__(self):
        return (VectorField, (self.n, dict(self.terms)))

    @classmethod
    def zero(cls, n: int) -> VectorField:
        check_rank(n)
        return cls._raw(n, {})

    @classmethod
    def monomial(cls, n: int, r: Sequence[int], i: int, c=1) -> VectorField:
        """``c * t^r d_i``."""
        return cls(n, {(tuple(r), i): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple, int, Scalar]]:
        for (r, i), c in self.terms.items():
            yield r, i, c

    def coefficient(self, r: Sequence[int], i: int) -> Scalar:
        return self.terms.get((tuple(r), i), ZERO)

    def exponents(self) -> set:
        return {r for r, _ in self.terms}

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorField):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.n, frozenset(self.terms.items()))))
        return self._hash

    def _check(self, other: VectorField) -> None:
        if not isinstance(other, VectorField):
            raise TypeError(f"expected VectorField, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"vector fields in {self.n} and {other.n} variables")

    def _combine(self, other: VectorField, sign: Scalar) -> VectorField:
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c * sign
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return VectorField._raw(self.n, out)

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self._combine(other, ONE)

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self._combine(other, -ONE)

    def __neg__(self) -> VectorField:
        return VectorField._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __mul__(self, c):
        try:
            c = as_scalar(c)
        except TypeError:
            return NotImplemented
        if not c:
            return VectorField._raw(self.n, {})
        return VectorField._raw(self.n, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * as_scalar(c).inverse()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (r, i) in sorted(self.terms):
            c = self.terms[(r, i)]
            mono = "t^" + str(r) if any(r) else ""
            parts.append(f"{c}*{mono}d{i}" if mono else f"{c}*d{i}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"VectorField({self.n}, {self})"


def cartan(n: int, i: int) -> VectorField:
    """The Cartan element ``d_i``."""
    check_rank(n)
    check_axis(i, n)
    return VectorField._raw(n, {((0,) * n, i): ONE})


def bracket(u: VectorField, v: VectorField) -> VectorField:
    u._check(v)
    out: dict = {}
    for (r, i), a in u.terms.items():
        for (s, j), b in v.terms.items():
            rs = tuple([x + y for x, y in zip(r, s)])
            ab = a * b
            si = s[i - 1]
            if si:
                k = (rs, j)
                out[k] = out.get(k, ZERO) + ab * si
            rj = r[j - 1]
            if rj:
                k = (rs, i)
                out[k] = out.get(k, ZERO) - ab * rj
    return VectorField._raw(u.n, {k: c for k, c in out.items() if c})


def div(u: VectorField) -> LaurentPoly:
    """Divergence with respect to the Euler derivations: ``div(t^r d_i) = r_i t^r``."""
    out: dict = {}
    for (r, i), c in u.terms.items():
        if r[i - 1]:
            out[r] = out.get(r, ZERO) + c * r[i - 1]
    return LaurentPoly._raw(u.n, {r: c for r, c in out.items() if c})


def div_classical(u: VectorField) -> LaurentPoly:
    """Classical divergence on the Euler basis: ``Div(t^r d_i) = (r_i + 1) t^r``.

    This is ``t^1`` times the literal ``sum_i d f_i / dt_i`` computed by
    :func:`classical_divergence_exact`; the two have the same kernel.
    """
    out: dict = {}
    for (r, i), c in u.terms.items():
        w = r[i - 1] + 1
        if w:
            out[r] = out.get(r, ZERO) + c * w
    return LaurentPoly._raw(u.n, {r: c for r, c in out.items() if c})


def classical_divergence_exact(u: VectorField) -> LaurentPoly:
    """Literal ``sum_i d(f_i)/dt_i`` where ``u = sum_i f_i d/dt_i``.

    ``t^r d_i = t^(r + e_i) d/dt_i``, so this is ``div_classical(u)``
    shifted by ``t^(-1)``; both have the same kernel.
    """
    out: dict = {}
    for (r, i), c in u.terms.items():
        w = r[i - 1] + 1
        if w:
            e = tuple(x - 1 for x in r)
            out[e] = out.get(e, ZERO) + c * w
    return LaurentPoly._raw(u.n, {r: c for r, c in out.items() if c})


@dataclass(frozen=True)
class GradedComponent:
    """``sum_i coeffs[i-1] * t^r d_i`` for a single exponent ``r``."""

    r: tuple
    coeffs: tuple

    @property
    def n(self) -> int:
        return len(self.r)

    def to_field(self) -> VectorField:
        return VectorField._raw(
            len(self.r), {(self.r, i + 1): c for i, c in enumerate(self.coeffs) if c}
        )

    def div_weight(self) -> Scalar:
        return sum((c * ri for c, ri in zip(self.coeffs, self.r)), ZERO)

    def div_classical_weight(self) -> Scalar:
        return sum((c * (ri + 1) for c, ri in zip(self.coeffs, self.r)), ZERO)

    def to_json(self) -> dict:
        from .serialize import scalar_to_json

        return {"exp": list(self.r), "coeffs": [scalar_to_json(c) for c in self.coeffs]}


def graded_decompose(u: VectorField) -> list[GradedComponent]:
    """Split ``u`` by exponent; components are sorted by ``r``."""
    by_r: dict = {}
    for (r, i), c in u.terms.items():
        by_r.setdefault(r, [ZERO] * u.n)[i - 1] = c
    return [GradedComponent(r, tuple(by_r[r])) for r in sorted(by_r)]


def split_cartan(u: VectorField) -> tuple[VectorField, VectorField]:
    """``u = derived part + Cartan part`` (the Cartan part is the ``r = 0`` component)."""
    zero = (0,) * u.n
    rest = {k: c for k, c in u.terms.items() if k[0] != zero}
    h = {k: c for k, c in u.terms.items() if k[0] == zero}
    return VectorField._raw(u.n, rest), VectorField._raw(u.n, h)


@dataclass(frozen=True)
class Membership:
    ok: bool
    tag: AlgebraTag
    certificate: GradedComponent | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"member": self.ok, "algebra": self.tag.value}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
            out["reason"] = self.reason
        return out


def _component_failure(tag: AlgebraTag, comp: GradedComponent) -> str | None:
    n = comp.n
    r = comp.r
    is_zero_exp = not any(r)
    is_minus_one = all(x == -1 for x in r)
    if tag is AlgebraTag.W:
        return None
    if tag is AlgebraTag.CartanH:
        return None if is_zero_exp else "nonzero exponent outside the Cartan subalgebra"
    if tag in (AlgebraTag.Stilde, AlgebraTag.StildePrime):
        if tag is AlgebraTag.StildePrime and is_zero_exp:
            return "Cartan component at r = 0 is not in the derived algebra"
        if comp.div_weight():
            return "div is nonzero on this component"
        return None
    # Div-based families
    if tag is AlgebraTag.Sbar and is_zero_exp:
        return None
    if comp.div_classical_weight():
        return "Div is nonzero on this component"
    if tag is AlgebraTag.Scl:
        return None
    if is_minus_one:
        return "component at r = -1 is excluded"
    if tag in (AlgebraTag.Sbar, AlgebraTag.SbarPrime) and n == 2 and r == (-2, -2):
        return "component at r = (-2,-2) is excluded for n = 2"
    return None


def is_member(u: VectorField, tag: AlgebraTag | str) -> Membership:
    """Decide ``u in tag``; on failure the offending graded component is the certificate."""
    tag = AlgebraTag(tag)
    for comp in graded_decompose(u):
        why = _component_failure(tag, comp)
        if why is not None:
            return Membership(False, tag, comp, why)
    return Membership(True, tag)


_STILDE_FAMILY = (AlgebraTag.Stilde, AlgebraTag.StildePrime)
_SBAR_FAMILY = (AlgebraTag.Sbar, AlgebraTag.SbarPrime, AlgebraTag.SclPrime)


def stilde_raw(n: int, r: Sequence[int], i: int, j: int) -> VectorField:
    """``r_j t^r d_i - r_i t^r d_j`` without any validity checks (may be zero)."""
    r = tuple(r)
    out = {}
    if r[j - 1]:
        out[(r, i)] = Scalar(r[j - 1])
    if r[i - 1]:
        out[(r, j)] = Scalar(-r[i - 1])
    return VectorField._raw(n, out)


def sbar_raw(n: int, r: Sequence[int], i: int, j: int) -> VectorField:
    """``(r_j + 1) t^r d_i - (r_i + 1) t^r d_j`` without validity checks (may be zero)."""
    r = tuple(r)
    out = {}
    if r[j - 1] + 1:
        out[(r, i)] = Scalar(r[j - 1] + 1)
    if r[i - 1] + 1:
        out[(r, j)] = Scalar(-(r[i - 1] + 1))
    return VectorField._raw(n, out)


def basis_element(family: AlgebraTag | str, r: Sequence[int], i: int, j: int) -> VectorField:
    """Spanning element of a divergence-zero family at exponent ``r``.

    ``Stilde``/``StildePrime``: ``r_j t^r d_i - r_i t^r d_j``.
    ``Sbar``/``SbarPrime``/``SclPrime``: ``(r_j + 1) t^r d_i - (r_i + 1) t^r d_j``.
    """
    family = AlgebraTag(family)
    r = tuple(r)
    n = len(r)
    check_rank(n)
    check_exponent(r, n, nonnegative=False)
    check_axis(i, n)
    check_axis(j, n)
    if i == j:
        raise PreconditionError("basis element needs i != j")
    if family in _STILDE_FAMILY:
        return stilde_raw(n, r, i, j)
    if family in _SBAR_FAMILY:
        if family is not AlgebraTag.SclPrime and n == 2 and r in ((-1, -1), (-2, -2)):
            raise ExcludedExponentError(f"exponent {r} is excluded from the n = 2 family")
        u = sbar_raw(n, r, i, j)
        if not u:
            raise ExcludedExponentError(f"spanning element at r = {r}, (i, j) = ({i}, {j}) is zero")
        return u
    raise PreconditionError(f"no spanning-element formula for family {family.value}")


def length(r: Sequence[int]) -> int:
    """Number of nonzero entries of ``r``."""
    return sum(1 for x in r if x)


def apply_to_function(u: VectorField, g: LaurentPoly) -> LaurentPoly:
    """Natural action of a vector field on a Laurent polynomial:
    ``t^r d_i (t^m) = m_i t^(r+m)``."""
    if g.n != u.n:
        raise DimensionError(f"vector field in {u.n} variables, function in {g.n}")
    out: dict = {}
    for (r, i), a in u.terms.items():
        for m, b in g.terms.items():
            w = m[i - 1]
            if w:
                e = tuple([x + y for x, y in zip(r, m)])
                out[e] = out.get(e, ZERO) + a * b * w
    return LaurentPoly._raw(u.n, {e: c for e, c in out.items() if c})


def _identity_record(name: str, prefactor: Scalar, lhs: VectorField, rhs: VectorField) -> dict:
    if not prefactor:
        return {"identity": name, "applicable": False, "reason": "not applicable: prefactor zero",
                "prefactor": prefactor}
    return {"identity": name, "applicable": True, "prefactor": prefactor,
            "holds": lhs == rhs, "lhs": lhs, "rhs": rhs}


def check_generation_identities(r: Sequence[int], i: int, j: int, l: int) -> dict:
    """Evaluate the three bracket identities used to generate the full
    algebra from rank-two pieces, with ``r`` the target exponent.

    * ``[X(r with r_l := 0), (r_l+1) t_l^{r_l} d_i - t_l^{r_l} d_l] = -(r_l+1) r_i X(r)``
    * ``[X(r with r_l := -2), 2 t_l d_i - t_l d_l] = -2 (r_i+1) X(r with r_l := -1)``
    * ``[t_i^-1 t_j^-1 d_i, t_i^-1 t_j^-1 d_j] = t_i^-2 t_j^-2 d_i - t_i^-2 t_j^-2 d_j``

    where ``X(s) = (s_j+1) t^s d_i - (s_i+1) t^s d_j``.
    """
    r = tuple(r)
    n = len(r)
    check_rank(n)
    for ax in (i, j, l):
        check_axis(ax, n)
    if len({i, j, l}) != 3:
        raise PreconditionError("axes i, j, l must be pairwise distinct")
    rl = r[l - 1]
    ri = r[i - 1]

    def with_l(value: int) -> tuple:
        s = list(r)
        s[l - 1] = value
        return tuple(s)

    ll = [0] * n
    ll[l - 1] = rl
    second = VectorField.monomial(n, ll, i, rl + 1) - VectorField.monomial(n, ll, l, 1)
    pref1 = Scalar(-(rl + 1) * ri)
    lhs1 = bracket(sbar_raw(n, with_l(0), i, j), second)
    rhs1 = sbar_raw(n, r, i, j) * pref1
    rec1 = _identity_record("length-step", pref1, lhs1, rhs1)

    el = [0] * n
    el[l - 1] = 1
    second2 = VectorField.monomial(n, el, i, 2) - VectorField.monomial(n, el, l, 1)
    pref2 = Scalar(-2 * (ri + 1))
    lhs2 = bracket(sbar_raw(n, with_l(-2), i, j), second2)
    rhs2 = sbar_raw(n, with_l(-1), i, j) * pref2
    rec2 = _identity_record("minus-one-step", pref2, lhs2, rhs2)

    rec3 = minus_two_identity(n, i, j)
    return {"r": r, "axes": (i, j, l), "identities": [rec1, rec2, rec3],
            "all_hold": all(rec.get("holds", True) for rec in (rec1, rec2, rec3))}


def minus_two_identity(n: int, i: int, j: int) -> dict:
    """``[t_i^-1 t_j^-1 d_i, t_i^-1 t_j^-1 d_j] = t_i^-2 t_j^-2 d_i - t_i^-2 t_j^-2 d_j``."""
    check_rank(n)
    check_axis(i, n)
    check_axis(j, n)
    if i == j:
        raise PreconditionError("need i != j")
    e1 = [0] * n
    e1[i - 1] = e1[j - 1] = -1
    e2 = [2 * x for x in e1]
    lhs = bracket(VectorField.monomial(n, e1, i), VectorField.monomial(n, e1, j))
    rhs = VectorField.monomial(n, e2, i) - VectorField.monomial(n, e2, j)
    return _identity_record("minus-two", ONE, lhs, rhs)


def divergence_cocycle_probe(u: VectorField, v: VectorField) -> dict:
    """Compare ``div[u, v]`` with ``u(div v) + v(div u)`` and ``u(div v) - v(div u)``."""
    lhs = div(bracket(u, v))
    du = apply_to_function(u, div(v))
    dv = apply_to_function(v, div(u))
    plus = du + dv
    minus = du - dv
    return {
        "div_bracket": lhs,
        "plus_form": plus,
        "minus_form": minus,
        "plus_holds": lhs == plus,
        "minus_holds": lhs == minus,
    }
