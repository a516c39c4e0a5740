"""Constructive reduction of a nonzero module element to the generators of
the proper submodule, for the n = 2 Stilde and Sbar families.

Starting from ``F != 0`` the algorithm

1. applies ``e_{i, c}`` (``d_{i,0}`` or ``l_{i,-1}``) for ``i = 1..deg_1 F + 1``
   and finds, by exact linear algebra, a combination free of ``h_1``;
2. applies ``e_{c', j}`` (``d_{0,j}`` or ``l_{-1,j}``) to that polynomial in
   ``h_2`` and finds a combination that is a nonzero multiple of the first
   ideal generator;
3. reaches the second ideal generator by one more bracket-free step.

Every step is recorded in a :class:`Trace`, and :meth:`Trace.replay`
recomputes all of them through the module action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import PreconditionError
from .linalg import nullspace
from .omega import ModuleSpec, act_general
from .poly import Poly, partial_degree
from .scalar import ONE, ZERO, Scalar, as_scalar
from .vfield import AlgebraTag, basis_element
from .vlike import d as vl_d

__all__ = ["Step", "Trace", "simple_reduce_stilde", "simple_reduce_sbar", "simple_reduce"]

@dataclass(frozen=True)
class Step:
    """One replayable step.

    ``act``: ``element . values[sources[0]]``;
    ``combine``: ``sum weights[k] * values[sources[k]]``;
    ``hmul``: ``factor * values[sources[0]]`` (multiplication inside ``U(h)``);
    ``scale``: ``scalar * values[sources[0]]``.
    """

    kind: str
    sources: tuple
    expected: Poly
    element: Any = None
    weights: tuple = ()
    factor: Poly | None = None
    scalar: Scalar | None = None
    label: str = ""

    def to_json(self) -> dict:
        from .serialize import to_jsonable

        out: dict = {"kind": self.kind, "sources": list(self.sources),
                     "expected": to_jsonable(self.expected), "label": self.label}
        if self.element is not None:
            out["element"] = to_jsonable(self.element)
        if self.weights:
            out["weights"] = [to_jsonable(w) for w in self.weights]
        if self.factor is not None:
            out["factor"] = to_jsonable(self.factor)
        if self.scalar is not None:
            out["scalar"] = to_jsonable(self.scalar)
        return out


@dataclass
class Trace:
    """``values[0]`` is the start; step ``k`` produces ``values[k + 1]``."""

    spec: ModuleSpec
    start: Poly
    steps: list = field(default_factory=list)
    targets: dict = field(default_factory=dict)

    def value(self, k: int) -> Poly:
        return self.start if k == 0 else self.steps[k - 1].expected

    def _add(self, step: Step) -> int:
        self.steps.append(step)
        return len(self.steps)

    def act(self, src: int, element, label: str = "") -> int:
        got = act_general(self.spec, element, self.value(src))
        return self._add(Step("act", (src,), got, element=element, label=label))

    def combine(self, srcs: Sequence[int], weights: Sequence[Scalar], label: str = "") -> int:
        acc = Poly.zero(self.spec.n)
        for s, w in zip(srcs, weights):
            acc = acc + self.value(s) * w
        return self._add(Step("combine", tuple(srcs), acc, weights=tuple(weights), label=label))

    def hmul(self, src: int, factor: Poly, label: str = "") -> int:
        return self._add(Step("hmul", (src,), factor * self.value(src), factor=factor, label=label))

    def scale(self, src: int, c: Scalar, label: str = "") -> int:
        return self._add(Step("scale", (src,), self.value(src) * c, scalar=c, label=label))

    def replay(self) -> dict:
        """Recompute every step from the start value; report mismatches."""
        values = [self.start]
        bad = []
        for k, st in enumerate(self.steps):
            if st.kind == "act":
                got = act_general(self.spec, st.element, values[st.sources[0]])
            elif st.kind == "combine":
                got = Poly.zero(self.spec.n)
                for s, w in zip(st.sources, st.weights):
                    got = got + values[s] * w
            elif st.kind == "hmul":
                got = st.factor * values[st.sources[0]]
            elif st.kind == "scale":
                got = values[st.sources[0]] * st.scalar
            else:
                raise ValueError(f"unknown step kind {st.kind!r}")
            if got != st.expected:
                bad.append(k)
            values.append(got)
        gens = self.spec.ideal_generators()
        reached = {name: values[idx] for name, idx in self.targets.items()}
        targets_ok = sorted(reached.values(), key=repr) == sorted(gens, key=repr)
        return {"steps_ok": not bad, "mismatched_steps": bad, "targets_ok": targets_ok,
                "holds": not bad and targets_ok, "reached": reached}

    def to_json(self) -> dict:
        from .serialize import poly_to_json, spec_to_json

        return {
            "spec": spec_to_json(self.spec),
            "start": poly_to_json(self.start),
            "steps": [s.to_json() for s in self.steps],
            "targets": {k: v for k, v in sorted(self.targets.items())},
        }


def _eliminating_combination(polys: Sequence[Poly], axis: int) -> tuple[list[Scalar], Poly]:
    """Weights ``c`` with ``sum c_k polys[k]`` nonzero and free of ``x_axis``."""
    rows: dict = {}
    for k, p in enumerate(polys):
        for e, c in p.terms.items():
            if e[axis - 1] >= 1:
                rows.setdefault(e, [ZERO] * len(polys))[k] = c
    basis = nullspace([rows[e] for e in sorted(rows)], len(polys))
    for vec in basis:
        acc = Poly.zero(polys[0].n)
        for c, p in zip(vec, polys):
            if c:
                acc = acc + p * c
        if acc:
            return vec, acc
    raise PreconditionError("no nonzero eliminating combination exists")


def _n2(spec: ModuleSpec, family: str) -> None:
    if spec.family != family or spec.n != 2:
        raise PreconditionError(f"reduction needs an n = 2 {family} module")


def _proportional(F: Poly, g: Poly) -> Scalar | None:
    """``c`` with ``F = c g`` if it exists."""
    if not g.terms or set(F.terms) != set(g.terms):
        return None
    e0 = next(iter(g.terms))
    c = F.terms[e0] / g.terms[e0]
    return c if F == g * c else None


def _reduce(spec: ModuleSpec, F: Poly, *, first, second, unit1, unit2, closing) -> Trace:
    """Shared two-stage driver.

    ``first(i)`` / ``second(j)`` return ``(element, prefactor)`` with
    ``element . g = prefactor * g(x - shift) * linear``.
    """
    if not isinstance(F, Poly) or F.n != 2:
        raise PreconditionError("F must be a polynomial in two variables")
    if not F:
        raise PreconditionError("F must be nonzero")
    tr = Trace(spec, F)
    c = _proportional(F, unit1)
    if c is not None:
        g1 = 0 if c == ONE else tr.scale(0, c.inverse(), "normalise")
    else:
        # stage 1: shifts in the first variable, kill every h1 power
        m = partial_degree(F, 1)
        acts = []
        for i in range(1, m + 2):
            elem, pref = first(i)
            acts.append((tr.act(0, elem, f"first stage i={i}"), pref))
        normed = [tr.value(k) * p.inverse() for k, p in acts]
        vec, _ = _eliminating_combination(normed, 1)
        weights = [w * p.inverse() for w, (_, p) in zip(vec, acts)]
        keep = [(k, w) for (k, _), w in zip(acts, weights) if w]
        k_h2 = tr.combine([k for k, _ in keep], [w for _, w in keep], "eliminate h1")
        # stage 2: shifts in the second variable, reach a multiple of unit1
        p = partial_degree(tr.value(k_h2), 2)
        acts = []
        for j in range(1, p + 2):
            elem, pref = second(j)
            acts.append((tr.act(k_h2, elem, f"second stage j={j}"), pref))
        normed = [tr.value(k) * q.inverse() for k, q in acts]
        vec, _ = _eliminating_combination(normed, 2)
        weights = [w * q.inverse() for w, (_, q) in zip(vec, acts)]
        keep = [(k, w) for (k, _), w in zip(acts, weights) if w]
        k_lin = tr.combine([k for k, _ in keep], [w for _, w in keep], "eliminate h2")
        gamma = _proportional(tr.value(k_lin), unit1)
        if gamma is None:
            raise PreconditionError("second stage did not reach the first generator")
        g1 = tr.scale(k_lin, gamma.inverse(), "normalise")
    tr.targets["first"] = g1
    tr.targets["second"] = closing(tr, g1)
    return tr


def simple_reduce_stilde(spec: ModuleSpec, F: Poly) -> Trace:
    """Reach ``h1 + alpha1`` and ``h2 + alpha2`` from any nonzero ``F``.

    ``d_{i,0} . g = (-1)^{i+1} i l1^i g(h1 - i, h2) (h2 + alpha2)`` and
    ``d_{0,j} . g = j l2^j g(h1, h2 - j) (h1 + alpha1)``.
    """
    _n2(spec, "Stilde")
    l1, l2 = spec.lam
    u1, u2 = spec.ideal_generators()

    def first(i):
        return vl_d(i, 0), as_scalar((-1) ** (i + 1) * i) * l1**i

    def second(j):
        return vl_d(0, j), as_scalar(j) * l2**j

    def closing(tr: Trace, g1: int) -> int:
        # d_{1,0} g1 / l1 - d_{2,0} g1 / (-2 l1^2) = h2 + alpha2
        a = tr.act(g1, vl_d(1, 0), "closing d_{1,0}")
        b = tr.act(g1, vl_d(2, 0), "closing d_{2,0}")
        return tr.combine([a, b], [l1.inverse(), (l1**2 * 2).inverse()], "second generator")

    return _reduce(spec, F, first=first, second=second, unit1=u1, unit2=u2, closing=closing)


def simple_reduce_sbar(spec: ModuleSpec, F: Poly) -> Trace:
    """Reach ``h1 - kappa`` and ``h2 - kappa`` from any nonzero ``F``.

    ``l_{i,-1} . g = -(i+1) l1^i l2^-1 g(h1 - i, h2 + 1) (h2 - kappa)``,
    ``l_{-1,j} . g = (j+1) l1^-1 l2^j g(h1, h2 - j) (h1 - kappa)`` and
    ``h2 - kappa = 1/2 l1^-1 l2 l_{1,-1} . (h1 - kappa) + (h1 - kappa)(h2 - kappa)``.
    """
    _n2(spec, "Sbar")
    l1, l2 = spec.lam
    u1, u2 = spec.ideal_generators()

    def first(i):
        return (basis_element(AlgebraTag.Sbar, (i, -1), 1, 2),
                as_scalar(-(i + 1)) * l1**i * l2.inverse())

    def second(j):
        return (basis_element(AlgebraTag.Sbar, (-1, j), 1, 2),
                as_scalar(j + 1) * l1.inverse() * l2**j)

    def closing(tr: Trace, g1: int) -> int:
        a = tr.act(g1, basis_element(AlgebraTag.Sbar, (1, -1), 1, 2), "closing l_{1,-1}")
        b = tr.hmul(g1, u2, "multiply by h2 - kappa")
        return tr.combine([a, b], [l1.inverse() * l2 / 2, ONE], "second generator")

    return _reduce(spec, F, first=first, second=second, unit1=u1, unit2=u2, closing=closing)


def simple_reduce(spec: ModuleSpec, F: Poly) -> Trace:
    if spec.family == "Stilde":
        return simple_reduce_stilde(spec, F)
    if spec.family == "Sbar":
        return simple_reduce_sbar(spec, F)
    raise PreconditionError("reduction is defined for the n = 2 Stilde and Sbar families")
