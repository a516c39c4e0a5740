from __future__ import annotations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from divzero import (
    ModuleSpec,
    NotRank1Error,
    Poly,
    PreconditionError,
    Scalar,
    VectorField,
    act_general,
    check_rank1_consistency,
    extract_parameters,
    isomorphic,
    perturb_assignment,
    simple_reduce,
    solve_sigma_invariant,
    submodule_closure_check,
    submodule_membership,
)
from divzero.classify import GeneratorAssignment, sigma_invariant_span_matches
from divzero.linalg import rank
from divzero.poly import translate
from divzero.sampling import Sampler, SuiteConfig

x1, x2 = Poly.gens(2)


# -- sigma-invariant solutions -------------------------------------------


def test_sigma_degree0():
    (b,) = solve_sigma_invariant(0)
    assert b.is_constant() and b


def test_sigma_degree2_span():
    basis = solve_sigma_invariant(2)
    want = [Poly.one(2), x1 + x2, (x1 + x2) ** 2]
    coords = sorted({e for f in basis + want for e in f.terms})
    rows = [[f.coefficient(e) for e in coords] for f in basis]
    assert rank(rows) == 3 == rank(rows + [[f.coefficient(e) for e in coords] for f in want])


@pytest.mark.parametrize("deg", range(7))
def test_sigma_dimension_and_invariance(deg):
    basis = solve_sigma_invariant(deg)
    assert len(basis) == deg + 1
    for g in basis:
        assert translate(g, (1, -1)) == g
    assert sigma_invariant_span_matches(basis, deg)


def test_sigma_dimension_matches_sympy_oracle():
    # brute-force solve the same linear system with an independent solver
    h1, h2 = sympy.symbols("h1 h2")
    for deg in range(5):
        monos = [h1**a * h2**b for a in range(deg + 1) for b in range(deg + 1 - a)]
        cs = sympy.symbols(f"c0:{len(monos)}")
        g = sum(c * m for c, m in zip(cs, monos))
        eqs = sympy.Poly(sympy.expand(g.subs({h1: h1 - 1, h2: h2 + 1}, simultaneous=True) - g),
                         h1, h2).coeffs()
        sol = sympy.linsolve(eqs, cs)
        (vec,) = sol
        free = set().union(*(sympy.sympify(v).free_symbols for v in vec))
        assert len(free) == deg + 1


# -- rank-one consistency --------------------------------------------------


def test_closed_form_assignments_consistent(stilde2, sbar2):
    for spec in (stilde2, sbar2):
        r = check_rank1_consistency(GeneratorAssignment.from_spec(spec), 3)
        assert r["holds"] and r["relations_checked"] > 50


def test_constant_generator_counterexample(stilde2):
    values = dict(GeneratorAssignment.from_spec(stilde2).values)
    values[(1, 0)] = Poly.constant(2, 5)
    values[(0, 1)] = x1 * 2 + 1
    r = check_rank1_consistency(GeneratorAssignment("Stilde", values), 3)
    assert not r["holds"]
    bad = {(v["left"], v["right"], v["target"]) for v in r["violations"] if v["kind"] == "relation"}
    assert ((-1, 0), (1, 1), (0, 1)) in bad


def test_assignment_validation(stilde2):
    values = dict(GeneratorAssignment.from_spec(stilde2).values)
    values[(1, 0)] = Poly.zero(2)
    with pytest.raises(PreconditionError):
        GeneratorAssignment("Stilde", values)
    del values[(1, 0)]
    with pytest.raises(PreconditionError):
        GeneratorAssignment("Stilde", values)


@pytest.mark.parametrize("family", ["Stilde", "Sbar"])
@given(seed=st.integers(0, 2**32))
def test_perturbations_rejected(family, seed):
    s = Sampler(SuiteConfig(seed=seed))
    base = GeneratorAssignment.from_spec(s.spec(family, 2))
    gen = s.rng.choice(sorted(base.values))
    a, b = s.rng.randint(0, 2), s.rng.randint(0, 2)
    pert = perturb_assignment(base, gen, (a, b), s.rational(nonzero=True))
    assert not check_rank1_consistency(pert, 3)["holds"]


# -- invariants ------------------------------------------------------------


def test_extract_examples():
    spec = ModuleSpec.stilde((2, 3), (Scalar("1/2"), -1))
    t = extract_parameters(spec)
    assert t.lam + t.params == (2, 3, Scalar("1/2"), -1)
    t = extract_parameters(ModuleSpec.sbar((5, 7), 2))
    assert t.lam + t.params == (5, 7, 2)


def test_extract_rejects_degree2_oracle(stilde2):
    def oracle(u: VectorField) -> Poly:
        val = act_general(stilde2, u, Poly.one(2))
        return val * x1 if u == VectorField.monomial(2, (1, 0), 2) else val

    with pytest.raises(NotRank1Error, match="not a rank-1 family"):
        extract_parameters(oracle, "Stilde", 2)


def test_isomorphic_examples(stilde2, sbar2):
    assert isomorphic(stilde2, stilde2)
    a1, a2 = stilde2.alpha
    assert not isomorphic(stilde2, ModuleSpec.stilde(stilde2.lam, (a1, a2 + 1)))
    assert not isomorphic(sbar2, ModuleSpec.sbar(sbar2.lam, sbar2.kappa + 3))


@pytest.mark.parametrize("family", ["W", "Stilde", "Sbar"])
@given(seed=st.integers(0, 2**32))
def test_extract_round_trip(family, seed):
    s = Sampler(SuiteConfig(n=3, seed=seed))
    spec = s.spec(family, complex_prob=0.3)
    t = extract_parameters(spec)
    assert t.lam + t.params == spec.params()


# -- reductions ------------------------------------------------------------


def _check_trace(spec, F):
    tr = simple_reduce(spec, F)
    r = tr.replay()
    assert r["steps_ok"] and r["targets_ok"], r
    return tr


def test_stilde_reduce_from_first_generator(stilde2):
    a1, a2 = stilde2.alpha
    tr = _check_trace(stilde2, x1 + a1)
    assert tr.value(tr.targets["second"]) == x2 + a2
    assert [s.kind for s in tr.steps] == ["act", "act", "combine"]


def test_stilde_reduce_from_second_generator(stilde2):
    a1, a2 = stilde2.alpha
    tr = _check_trace(stilde2, x2 + a2)
    assert tr.value(tr.targets["first"]) == x1 + a1


def test_sbar_reduce_examples(sbar2):
    k = sbar2.kappa
    tr = _check_trace(sbar2, x1 - k)
    assert tr.value(tr.targets["second"]) == x2 - k
    tr = _check_trace(sbar2, (x2 - k) ** 3)
    assert len(tr.steps) > 4


def test_reduce_rejects_zero_and_wrong_family(stilde2):
    with pytest.raises(PreconditionError):
        simple_reduce(stilde2, Poly.zero(2))
    with pytest.raises(PreconditionError):
        simple_reduce(ModuleSpec.w((1, 2), 0), x1)


def test_replay_detects_tampering(sbar2):
    tr = simple_reduce(sbar2, x1 * x2 + 1)
    from dataclasses import replace

    tr.steps[0] = replace(tr.steps[0], expected=tr.steps[0].expected + 1)
    assert not tr.replay()["steps_ok"]


@pytest.mark.parametrize("family", ["Stilde", "Sbar"])
@given(seed=st.integers(0, 2**32))
def test_reduce_random(family, seed):
    s = Sampler(SuiteConfig(seed=seed))
    spec = s.spec(family, 2)
    F = s.poly(2, 4, nonzero=True)
    _check_trace(spec, F)
    # members of the proper submodule reduce as well
    G = spec.ideal_generators()[0] * s.poly(2, 3, nonzero=True)
    _check_trace(spec, G)


# -- submodules ------------------------------------------------------------


def test_membership_examples(stilde2):
    a1, a2 = stilde2.alpha
    assert submodule_membership(stilde2, x1 + a1)
    assert not submodule_membership(stilde2, Poly.one(2))
    assert submodule_membership(stilde2, (x1 + a1) * x2 + (x2 + a2) * 5)


def test_closure_stilde_n2(stilde2):
    r = submodule_closure_check(stilde2, 3, 4)
    assert r["closed"] and r["checked"] > 1000


def test_closure_sbar_n3():
    spec = ModuleSpec.sbar((2, Scalar("-1/3"), 5), Scalar("3/2"))
    r = submodule_closure_check(spec, 2, 3)
    assert r["closed"]


def test_wrong_ideal_escapes(stilde2):
    a1, a2 = stilde2.alpha
    r = submodule_closure_check(stilde2, 1, 2, point=(-a1 - 1, -a2), stop_after=1)
    assert not r["closed"] and r["escapes"]
