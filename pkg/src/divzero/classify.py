"""Classification machinery for the rank-one modules.

* :func:`solve_sigma_invariant` solves ``g(h1 - 1, h2 + 1) = g`` exactly;
* :func:`check_rank1_consistency` extends generator values by bracket words
  and tests every bracket relation among the reached basis elements;
* :func:`extract_parameters` / :func:`isomorphic` read the invariants back
  from generator actions;
* :func:`submodule_membership` / :func:`submodule_closure_check` test the
  maximal-ideal submodule;
* the reductions live in :mod:`divzero.reduction` and are re-exported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import ExcludedExponentError, NotRank1Error, PreconditionError
from .linalg import nullspace, rank
from .omega import (
    SBAR_EXCLUDED,
    SBAR_GENERATORS,
    ModuleSpec,
    _Recursion,
    _monomials,
    act_general,
    generator_values,
    sbar_structure_constant,
)
from .poly import Poly, evaluate, translate
from .reduction import Step, Trace, simple_reduce, simple_reduce_sbar, simple_reduce_stilde
from .scalar import Scalar, as_scalar
from .vfield import AlgebraTag, VectorField, basis_element, cartan, check_rank
from .vlike import GENERATORS as VL_GENERATORS, vl_structure_constant

__all__ = [
    "solve_sigma_invariant",
    "sigma_invariant_span_matches",
    "GeneratorAssignment",
    "check_rank1_consistency",
    "perturb_assignment",
    "InvariantTuple",
    "extract_parameters",
    "isomorphic",
    "submodule_membership",
    "submodule_closure_check",
    "algebra_basis",
    "Step",
    "Trace",
    "simple_reduce",
    "simple_reduce_stilde",
    "simple_reduce_sbar",
]


# -- sigma-invariant solutions -------------------------------------------


def _monomial_basis(degree: int) -> list[tuple]:
    return [(a, d - a) for d in range(degree + 1) for a in range(d, -1, -1)]


def solve_sigma_invariant(max_degree: int) -> list[Poly]:
    """Basis of ``{g : g(h1 - 1, h2 + 1) = g, total degree <= max_degree}``.

    Sets up the linear map ``g -> g(h1 - 1, h2 + 1) - g`` on the
    coefficient space and returns its kernel.
    """
    if not isinstance(max_degree, int) or max_degree < 0:
        raise PreconditionError("max_degree must be a non-negative integer")
    monos = _monomial_basis(max_degree)
    index = {e: k for k, e in enumerate(monos)}
    cols = []
    for e in monos:
        g = Poly.monomial(2, e)
        cols.append(translate(g, (1, -1)) - g)
    rows = [[col.coefficient(e) for col in cols] for e in monos]
    basis = nullspace(rows, len(monos))
    out = []
    for vec in basis:
        out.append(Poly(2, {monos[k]: c for k, c in enumerate(vec) if c}))
    assert len(index) == len(monos)
    return out


def sigma_invariant_span_matches(basis: Sequence[Poly], max_degree: int) -> bool:
    """Mutual containment of ``span(basis)`` and ``span{(h1 + h2)^k}``."""
    monos = _monomial_basis(max_degree)
    h1, h2 = Poly.gens(2)
    ref = [(h1 + h2) ** k for k in range(max_degree + 1)]

    def vec(p: Poly) -> list:
        return [p.coefficient(e) for e in monos]

    a = [vec(p) for p in basis]
    b = [vec(p) for p in ref]
    ra, rb = rank(a) if a else 0, rank(b)
    return ra == rb == rank(a + b)


# -- rank-one consistency --------------------------------------------------


@dataclass(frozen=True)
class GeneratorAssignment:
    """Candidate values ``e_g . 1`` for the generators of an n = 2 family."""

    family: str
    values: Mapping[tuple, Poly]

    def __post_init__(self):
        if self.family not in ("Stilde", "Sbar"):
            raise PreconditionError("assignments are defined for Stilde and Sbar")
        gens = VL_GENERATORS if self.family == "Stilde" else SBAR_GENERATORS
        missing = [g for g in gens if g not in self.values]
        if missing:
            raise PreconditionError(f"missing generator values for {missing}")
        for g, v in self.values.items():
            if not isinstance(v, Poly) or v.n != 2:
                raise PreconditionError(f"value for {g} must be a polynomial in two variables")
            if not v:
                raise PreconditionError(f"generator value for {g} is zero")
        object.__setattr__(self, "values", dict(self.values))

    @classmethod
    def from_spec(cls, spec: ModuleSpec) -> GeneratorAssignment:
        return cls(spec.family, generator_values(spec))

    def to_json(self) -> dict:
        from .serialize import poly_to_json

        return {"family": self.family,
                "values": [{"index": list(k), "value": poly_to_json(v)}
                           for k, v in sorted(self.values.items())]}


def check_rank1_consistency(assign: GeneratorAssignment, word_bound: int = 3,
                            box: int | None = None) -> dict:
    """Extend ``assign`` along bracket words of length ``<= word_bound`` and
    check ``[e_a, e_b] . 1 = e_a . (e_b . 1) - e_b . (e_a . 1)`` for every
    pair of reached indices.

    A relation is checked whenever the bracket is known: its target was
    reached, or the bracket vanishes (zero structure constant, ``d_{0,0}``,
    or ``l_{-1,-1} = 0``).  Reached values must also be nonzero.
    """
    if word_bound < 1:
        raise PreconditionError("word_bound must be >= 1")
    family = assign.family
    box = word_bound + 1 if box is None else box
    rec = _Recursion(family, assign.values, box, word_bound)
    sc = vl_structure_constant if family == "Stilde" else sbar_structure_constant
    reached = sorted(rec.closure)
    values = {t: rec.value(t) for t in reached}
    if family == "Sbar":
        values_all = dict(values)
        values_all[(0, 0)] = rec.memo[(0, 0)]
    else:
        values_all = values
    violations: list = []
    checked = 0
    zero = Poly.zero(2)
    for a, b in itertools.combinations(reached, 2):
        t = (a[0] + b[0], a[1] + b[1])
        c = sc(a, b)
        if family == "Stilde" and (c == 0 or t == (0, 0)):
            expected = zero
        elif family == "Sbar" and (c == 0 or t in SBAR_EXCLUDED):
            expected = zero
        elif t in values_all:
            expected = values_all[t] * c
        else:
            continue
        got = rec.act(a, values[b]) - rec.act(b, values[a])
        checked += 1
        if got != expected:
            violations.append({"kind": "relation", "left": a, "right": b, "target": t,
                               "constant": c, "expected": expected, "got": got})
    # a basis element never kills the generator
    violations.extend({"kind": "zero-value", "index": t} for t in reached if not values[t])
    return {
        "family": family,
        "word_bound": word_bound,
        "reached": len(reached),
        "relations_checked": checked,
        "holds": not violations,
        "first_violation": violations[0] if violations else None,
        "violations": violations,
    }


def perturb_assignment(assign: GeneratorAssignment, generator: tuple, exp: tuple,
                       coeff) -> GeneratorAssignment:
    """Add ``coeff * x^exp`` to one generator value."""
    values = dict(assign.values)
    values[generator] = values[generator] + Poly.monomial(2, exp, as_scalar(coeff))
    return GeneratorAssignment(assign.family, values)


# -- invariants ------------------------------------------------------------


@dataclass(frozen=True)
class InvariantTuple:
    """``(family, lambda, params)`` where ``params`` is ``alpha``,
    ``(kappa,)`` or ``(a,)``."""

    family: str
    lam: tuple
    params: tuple

    def to_json(self) -> dict:
        from .serialize import scalar_to_json

        return {"family": self.family, "lambda": [scalar_to_json(x) for x in self.lam],
                "params": [scalar_to_json(x) for x in self.params]}


Oracle = Callable[[VectorField], Poly]


def _linear_parts(f: Poly, n: int) -> tuple[list[Scalar], Scalar]:
    """Coefficients and constant of a polynomial of total degree <= 1."""
    if f.total_degree() != 1:
        raise NotRank1Error(f"not a rank-1 family member: generator value {f} has degree "
                            f"{f.total_degree()}, expected 1")
    coeffs = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        coeffs.append(f.coefficient(tuple(e)))
    return coeffs, f.constant_term()


def _unit(n: int, i: int) -> tuple:
    e = [0] * n
    e[i - 1] = 1
    return tuple(e)


def extract_parameters(source: ModuleSpec | Oracle, family: str | None = None,
                       n: int | None = None) -> InvariantTuple:
    """Read ``lambda`` and ``alpha`` / ``kappa`` / ``a`` from the values
    ``u . 1`` of a few algebra elements.

    ``source`` is a :class:`ModuleSpec` or an oracle ``u -> u . 1`` (then
    ``family`` and ``n`` are required).

    * Stilde: ``t_j d_i . 1 = lambda_j (x_i + alpha_i)`` for ``i != j``;
    * Sbar: ``(t_i d_i - 2 t_i d_j) . 1 = lambda_i (x_i - 2 x_j + kappa)``;
    * W: ``t_j d_i . 1 = lambda_j x_i`` and ``t_i d_i . 1 = lambda_i (x_i - a - 1)``.

    Every reading is cross-checked; any disagreement or wrong shape raises
    :class:`NotRank1Error`.
    """
    if isinstance(source, ModuleSpec):
        spec = source
        family, n = spec.family, spec.n

        def oracle(u):
            return act_general(spec, u, spec.one())
    else:
        if family is None or n is None:
            raise PreconditionError("an oracle needs explicit family and n")
        oracle = source
    check_rank(n)
    lam: list = [None] * n
    readings: dict = {}

    def put(store: list | dict, key, val, what: str):
        prev = store[key]
        if prev is not None and prev != val:
            raise NotRank1Error(f"not a rank-1 family member: inconsistent {what}")
        store[key] = val

    if family == "Stilde":
        alpha: list = [None] * n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                f = oracle(VectorField.monomial(n, _unit(n, j), i))
                coeffs, const = _linear_parts(f, n)
                lead = coeffs[i - 1]
                if not lead or any(c for k, c in enumerate(coeffs) if k != i - 1):
                    raise NotRank1Error("not a rank-1 family member: wrong linear shape")
                put(lam, j - 1, lead, "lambda")
                put(alpha, i - 1, const / lead, "alpha")
        return InvariantTuple("Stilde", tuple(lam), tuple(alpha))
    if family == "Sbar":
        kappa: list = [None]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                u = basis_element(AlgebraTag.Sbar, _unit(n, i), i, j)
                coeffs, const = _linear_parts(oracle(u), n)
                lead = coeffs[i - 1]
                ok = lead and coeffs[j - 1] == lead * -2 and not any(
                    c for k, c in enumerate(coeffs) if k not in (i - 1, j - 1))
                if not ok:
                    raise NotRank1Error("not a rank-1 family member: wrong linear shape")
                put(lam, i - 1, lead, "lambda")
                put(kappa, 0, const / lead, "kappa")
        return InvariantTuple("Sbar", tuple(lam), (kappa[0],))
    if family == "W":
        a: list = [None]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                coeffs, const = _linear_parts(oracle(VectorField.monomial(n, _unit(n, j), i)), n)
                lead = coeffs[i - 1]
                if not lead or any(c for k, c in enumerate(coeffs) if k != i - 1):
                    raise NotRank1Error("not a rank-1 family member: wrong linear shape")
                put(lam, j - 1, lead, "lambda")
                if i == j:
                    put(a, 0, -const / lead - 1, "a")
                elif const:
                    raise NotRank1Error("not a rank-1 family member: unexpected constant")
        return InvariantTuple("W", tuple(lam), (a[0],))
    raise PreconditionError(f"unknown family {family!r}")


def isomorphic(m1: ModuleSpec, m2: ModuleSpec) -> bool:
    """Isomorphism test by equality of the extracted invariants."""
    if m1.family != m2.family or m1.n != m2.n:
        raise PreconditionError("isomorphism is tested within one family and rank")
    return extract_parameters(m1) == extract_parameters(m2)


# -- submodules ------------------------------------------------------------


def submodule_membership(spec: ModuleSpec, f: Poly, point: Sequence | None = None) -> bool:
    """Membership in the maximal ideal of ``point`` (default: the ideal
    of the proper submodule), decided by evaluation."""
    pt = spec.ideal_point() if point is None else tuple(as_scalar(p) for p in point)
    return not evaluate(f, pt)


def algebra_basis(spec: ModuleSpec, box: int) -> list[VectorField]:
    """Spanning elements with exponents in ``[-box, box]^n`` plus the Cartan
    elements.  The W family uses its divergence-zero part (the Stilde
    spanning set), on which its proper submodule is defined."""
    n = spec.n
    out = [cartan(n, i) for i in range(1, n + 1)]
    fam = AlgebraTag.Sbar if spec.family == "Sbar" else AlgebraTag.Stilde
    for r in itertools.product(range(-box, box + 1), repeat=n):
        if not any(r):
            continue
        for i, j in itertools.combinations(range(1, n + 1), 2):
            try:
                u = basis_element(fam, r, i, j)
            except ExcludedExponentError:
                continue
            if u:
                out.append(u)
    return out


def submodule_closure_check(spec: ModuleSpec, degree_bound: int, box: int, *,
                            point: Sequence | None = None, stop_after: int | None = None) -> dict:
    """Act with every spanning element in the box on ``g_k * m`` for every
    ideal generator ``g_k`` and monomial ``m`` of degree ``<= degree_bound``;
    report actions that leave the ideal.

    ``point`` replaces the ideal's point (for deliberately wrong ideals);
    ``stop_after`` ends the search after that many escapes.
    """
    if degree_bound < 0 or box < 1:
        raise PreconditionError("need degree_bound >= 0 and box >= 1")
    pt = spec.ideal_point() if point is None else tuple(as_scalar(p) for p in point)
    gens = [spec.x(i) - pt[i - 1] for i in range(1, spec.n + 1)]
    elems = [g * m for g in gens for m in _monomials(spec.n, degree_bound)]
    basis = algebra_basis(spec, box)
    escapes: list = []
    checked = 0
    for u in basis:
        for f in elems:
            checked += 1
            val = act_general(spec, u, f, check=False)
            if evaluate(val, pt):
                escapes.append({"element": u, "input": f, "value_at_point": evaluate(val, pt)})
                if stop_after is not None and len(escapes) >= stop_after:
                    return {"closed": False, "checked": checked, "escapes": escapes,
                            "point": pt}
    return {"closed": not escapes, "checked": checked, "escapes": escapes, "point": pt}
