"""The Virasoro-like algebra.

Basis ``d_{i,j}`` for ``(i, j) != (0, 0)`` together with ``h_1, h_2``:

    [d_{i,j}, d_{k,l}] = (j k - i l) d_{i+k, j+l}
    [h_1, d_{i,j}] = i d_{i,j},   [h_2, d_{i,j}] = j d_{i,j},   [h_1, h_2] = 0

with ``d_{0,0} = 0``.  :func:`phi` embeds it into the rank-two Witt algebra
as the divergence-zero fields; :func:`phi_ij` identifies the rank-two piece
of the ``(i, j)`` coordinate plane of a higher-rank algebra with it.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError
from .poly import check_axis
from .scalar import ONE, ZERO, Scalar, as_scalar
from .vfield import VectorField, check_rank

__all__ = [
    "VLElement",
    "d",
    "h",
    "vl_bracket",
    "vl_structure_constant",
    "phi",
    "phi_ij",
    "bracket_closure",
    "GENERATORS",
]


class VLElement:
    """``sum c_{ij} d_{i,j} + a_1 h_1 + a_2 h_2``; immutable."""

    __slots__ = ("dterms", "hcoeffs", "_hash")

    def __init__(self, dterms: Mapping[tuple, object] | None = None,
                 hcoeffs: Sequence[object] = (0, 0)):
        clean: dict = {}
        for key, c in (dterms or {}).items():
            i, j = key
            if not isinstance(i, int) or not isinstance(j, int):
                raise TypeError("d-indices must be ints")
            s = as_scalar(c)
            if (i, j) == (0, 0):
                # d_{0,0} = 0 by convention
                continue
            if (i, j) in clean:
                s = clean[(i, j)] + s
            if s:
                clean[(i, j)] = s
            else:
                clean.pop((i, j), None)
        if len(hcoeffs) != 2:
            raise ValueError("exactly two Cartan coefficients expected")
        object.__setattr__(self, "dterms", clean)
        object.__setattr__(self, "hcoeffs", (as_scalar(hcoeffs[0]), as_scalar(hcoeffs[1])))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, dterms: dict, hcoeffs: tuple) -> VLElement:
        obj = object.__new__(cls)
        object.__setattr__(obj, "dterms", dterms)
        object.__setattr__(obj, "hcoeffs", hcoeffs)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("VLElement is immutable")

    def __reduce__(self):
        return (VLElement, (dict(self.dterms), self.hcoeffs))

    def __bool__(self) -> bool:
        return bool(self.dterms) or bool(self.hcoeffs[0]) or bool(self.hcoeffs[1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VLElement):
            return NotImplemented
        return self.dterms == other.dterms and self.hcoeffs == other.hcoeffs

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((frozenset(self.dterms.items()), self.hcoeffs)))
        return self._hash

    def _combine(self, other: VLElement, sign: Scalar) -> VLElement:
        out = dict(self.dterms)
        for k, c in other.dterms.items():
            s = out.get(k, ZERO) + c * sign
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        h0 = self.hcoeffs[0] + other.hcoeffs[0] * sign
        h1 = self.hcoeffs[1] + other.hcoeffs[1] * sign
        return VLElement._raw(out, (h0, h1))

    def __add__(self, other):
        if not isinstance(other, VLElement):
            return NotImplemented
        return self._combine(other, ONE)

    def __sub__(self, other):
        if not isinstance(other, VLElement):
            return NotImplemented
        return self._combine(other, -ONE)

    def __neg__(self) -> VLElement:
        return VLElement._raw({k: -c for k, c in self.dterms.items()},
                              (-self.hcoeffs[0], -self.hcoeffs[1]))

    def __mul__(self, c):
        try:
            c = as_scalar(c)
        except TypeError:
            return NotImplemented
        if not c:
            return VLElement._raw({}, (ZERO, ZERO))
        return VLElement._raw({k: v * c for k, v in self.dterms.items()},
                              (self.hcoeffs[0] * c, self.hcoeffs[1] * c))

    __rmul__ = __mul__

    def derived_part(self) -> VLElement:
        return VLElement._raw(dict(self.dterms), (ZERO, ZERO))

    def __str__(self) -> str:
        parts = [f"{c}*d[{i},{j}]" for (i, j), c in sorted(self.dterms.items())]
        for k, c in enumerate(self.hcoeffs, start=1):
            if c:
                parts.append(f"{c}*h{k}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"VLElement({self})"


def d(i: int, j: int, c=1) -> VLElement:
    return VLElement({(i, j): c})


def h(k: int, c=1) -> VLElement:
    if k not in (1, 2):
        raise ValueError("Cartan index must be 1 or 2")
    return VLElement({}, (c, 0) if k == 1 else (0, c))


#: the four elements that generate the derived algebra
GENERATORS: tuple = ((1, 0), (-1, 0), (0, 1), (0, -1))


def vl_structure_constant(a: tuple, b: tuple) -> int:
    """``c`` in ``[d_a, d_b] = c d_{a+b}``."""
    (i, j), (k, l) = a, b
    return j * k - i * l


def vl_bracket(x: VLElement, y: VLElement) -> VLElement:
    out: dict = {}

    def acc(key, c):
        if key == (0, 0) or not c:
            return
        out[key] = out.get(key, ZERO) + c

    for (i, j), a in x.dterms.items():
        for (k, l), b in y.dterms.items():
            sc = j * k - i * l
            if sc:
                acc((i + k, j + l), a * b * sc)
    # [h_1, d_{ij}] = i d_{ij}, [h_2, d_{ij}] = j d_{ij}
    x1, x2 = x.hcoeffs
    y1, y2 = y.hcoeffs
    if x1 or x2:
        for (i, j), b in y.dterms.items():
            acc((i, j), (x1 * i + x2 * j) * b)
    if y1 or y2:
        for (i, j), a in x.dterms.items():
            acc((i, j), -(y1 * i + y2 * j) * a)
    return VLElement._raw({k: c for k, c in out.items() if c}, (ZERO, ZERO))


def phi(x: VLElement) -> VectorField:
    """Embed into rank-two vector fields:
    ``h_k -> d_k``, ``d_{i,j} -> (-1)^i (j t^(i,j) d_1 - i t^(i,j) d_2)``."""
    out: dict = {}
    for (i, j), c in x.dterms.items():
        sign = c if i % 2 == 0 else -c
        if j:
            out[((i, j), 1)] = out.get(((i, j), 1), ZERO) + sign * j
        if i:
            out[((i, j), 2)] = out.get(((i, j), 2), ZERO) - sign * i
    h1, h2 = x.hcoeffs
    if h1:
        out[((0, 0), 1)] = h1
    if h2:
        out[((0, 0), 2)] = h2
    return VectorField._raw(2, {k: c for k, c in out.items() if c})


def phi_ij(u: VectorField, i: int, j: int) -> VLElement:
    """Identify a divergence-zero field in the ``(i, j)`` coordinate plane
    with an element of the Virasoro-like algebra.

    ``d_i -> h_1``, ``d_j -> h_2`` and
    ``r_j t^r d_i - r_i t^r d_j -> (-1)^{r_i} d_{r_i, r_j}``.
    """
    n = u.n
    check_rank(n)
    check_axis(i, n)
    check_axis(j, n)
    if i == j:
        raise PreconditionError("phi_ij needs i != j")
    others = [a for a in range(n) if a not in (i - 1, j - 1)]
    comps: dict = {}
    for (r, ax), c in u.terms.items():
        if any(r[a] for a in others) or ax not in (i, j):
            raise PreconditionError(
                f"term t^{r} d_{ax} lies outside the ({i},{j}) coordinate plane"
            )
        key = (r[i - 1], r[j - 1])
        ci, cj = comps.get(key, (ZERO, ZERO))
        comps[key] = (ci + c, cj) if ax == i else (ci, cj + c)
    dterms: dict = {}
    hco = (ZERO, ZERO)
    for (ri, rj), (ci, cj) in comps.items():
        if (ri, rj) == (0, 0):
            hco = (ci, cj)
            continue
        # component must be a multiple of (r_j, -r_i)
        if ci * ri + cj * rj:
            raise PreconditionError(f"component at ({ri},{rj}) is not divergence-free")
        mult = ci / rj if rj else -cj / ri
        dterms[(ri, rj)] = mult if ri % 2 == 0 else -mult
    return VLElement._raw({k: c for k, c in dterms.items() if c}, hco)


def bracket_closure(
    seeds: Iterable[tuple],
    structure_constant,
    box: int,
    max_length: int | None = None,
    excluded: Iterable[tuple] = (),
) -> dict:
    """Breadth-first bracket closure on a two-dimensional index lattice.

    Returns ``{index: (word_length, left, right, constant)}`` where
    ``[e_left, e_right] = constant * e_index``; seeds map to
    ``(1, None, None, None)``.  Each index is reached by the shortest
    word; ties go to the lexicographically smallest ``(left, right)``.
    Only indices with both coordinates in ``[-box, box]`` are kept.
    """
    excluded = set(excluded)
    reached: dict = {}
    for s in sorted(set(seeds)):
        reached[s] = (1, None, None, None)
    by_len: dict = {1: sorted(reached)}
    longest = 1
    length = 1
    while True:
        length += 1
        if max_length is not None and length > max_length:
            break
        # a new word of this length splits into two strictly shorter reached words
        if length > 2 * longest:
            break
        found: dict = {}
        for la in range(1, length):
            lb = length - la
            for a in by_len.get(la, ()):
                for b in by_len.get(lb, ()):
                    t = (a[0] + b[0], a[1] + b[1])
                    if t in reached or t in excluded:
                        continue
                    if abs(t[0]) > box or abs(t[1]) > box:
                        continue
                    c = structure_constant(a, b)
                    if not c:
                        continue
                    cand = (a, b)
                    prev = found.get(t)
                    if prev is None or cand < prev[0]:
                        found[t] = (cand, c)
        for t, ((a, b), c) in found.items():
            reached[t] = (length, a, b, c)
        by_len[length] = sorted(found)
        if found:
            longest = length
    return reached
