"""Verification suites and deterministic reports.

Each suite takes a :class:`SuiteConfig`, draws everything it needs from a
seeded :class:`Sampler`, and returns check records
``{"check", "id", "inputs", "expected", "got", "pass"}``.  Reports sort the
records by ``(check, id)`` and carry the config, so a report is a function
of the config alone (the ``timestamp`` field excepted).
"""

from __future__ import annotations

import datetime as _dt
import itertools
from typing import Callable

from . import __version__
from .classify import (
    GeneratorAssignment,
    check_rank1_consistency,
    extract_parameters,
    isomorphic,
    perturb_assignment,
    sigma_invariant_span_matches,
    simple_reduce,
    solve_sigma_invariant,
    submodule_closure_check,
)
from .errors import ExcludedExponentError
from .omega import (
    SBAR_EXCLUDED,
    ModuleSpec,
    act_general,
    act_stilde,
    check_module_axiom,
    closed_form_dij,
    closed_form_lr,
    cross_route_check,
    generator_recursion,
    generator_values,
    restriction_compare,
    twisted_action_identity,
)
from .poly import LaurentPoly, partial_degree, sigma_shift, translate
from .sampling import Sampler, SuiteConfig
from .vfield import (
    AlgebraTag,
    VectorField,
    apply_to_function,
    basis_element,
    bracket,
    check_generation_identities,
    div,
    div_classical,
    divergence_cocycle_probe,
    minus_two_identity,
    is_member,
    split_cartan,
)
from .vlike import d as vl_d, h as vl_h, phi, phi_ij, vl_bracket

__all__ = ["SUITES", "run_suite", "canonical", "suite_names"]


class _Records:
    def __init__(self):
        self.items: list = []
        self.extra: dict = {}
        self._ids: dict = {}

    def add(self, check: str, inputs, expected, got, passed: bool) -> None:
        k = self._ids.get(check, 0)
        self._ids[check] = k + 1
        self.items.append({"check": check, "id": k, "inputs": _s(inputs),
                           "expected": _s(expected), "got": _s(got), "pass": bool(passed)})

    def eq(self, check: str, inputs, expected, got) -> None:
        self.add(check, inputs, expected, got, expected == got)


def _s(x) -> str:
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(_s(v) for v in x) + ")"
    return str(x)


def _oracle_bracket(u: VectorField, v: VectorField) -> VectorField:
    """Bracket from composing derivations on the coordinate functions."""
    n = u.n
    out = VectorField.zero(n)
    for k in range(1, n + 1):
        e = [0] * n
        e[k - 1] = 1
        tk = LaurentPoly.monomial(n, e)
        comp = apply_to_function(u, apply_to_function(v, tk)) - apply_to_function(
            v, apply_to_function(u, tk))
        # comp = sum c_m t^m, and t^m = t^(m - e_k) t_k: coefficient of t^(m-e_k) d_k
        for m, c in comp.terms.items():
            r = list(m)
            r[k - 1] -= 1
            out = out + VectorField.monomial(n, r, k, c)
    return out


# -- exact algebra ---------------------------------------------------------


def suite_ring_laws(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    n = cfg.n
    for _ in range(cfg.samples):
        a, b, c = (LaurentPoly(n, s.laurent_terms(n)) for _ in range(3))
        rec.eq("assoc-mul", (a, b, c), (a * b) * c, a * (b * c))
        rec.eq("distrib", (a, b, c), a * (b + c), a * b + a * c)
        rec.eq("comm-mul", (a, b), a * b, b * a)
        f, g = s.poly(n), s.poly(n)
        i = s.rng.randint(1, n)
        rec.eq("sigma-automorphism", (f, g, i), sigma_shift(f * g, i), sigma_shift(f, i) * sigma_shift(g, i))
        if partial_degree(f, i) >= 0:
            rec.eq("deg-drop", (f, i), partial_degree(f, i) - 1,
                   partial_degree(sigma_shift(f, i) - f, i))
        k1, k2 = s.exponent(n, 3), s.exponent(n, 3)
        rec.eq("translate-compose", (f, k1, k2), translate(f, tuple(x + y for x, y in zip(k1, k2))),
               translate(translate(f, k1), k2))


def suite_bracket(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    n = cfg.n
    box = min(cfg.box, 5)
    for _ in range(cfg.samples):
        u, v, w = (s.field(AlgebraTag.W, n, box) for _ in range(3))
        jac = bracket(bracket(u, v), w) + bracket(bracket(v, w), u) + bracket(bracket(w, u), v)
        rec.eq("jacobi", (u, v, w), VectorField.zero(n), jac)
        rec.eq("oracle", (u, v), _oracle_bracket(u, v), bracket(u, v))
        rec.eq("antisymmetry", (u, v), -bracket(v, u), bracket(u, v))


def suite_divergence(cfg: SuiteConfig, rec: _Records) -> None:
    n = cfg.n
    box = min(cfg.box, 4)
    zero = LaurentPoly.zero(n)
    for r in itertools.product(range(-box, box + 1), repeat=n):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            rec.eq("div-stilde-basis", (r, i, j), zero, div(basis_element(AlgebraTag.Stilde, r, i, j)))
            try:
                u = basis_element(AlgebraTag.Sbar, r, i, j)
            except ExcludedExponentError:
                continue
            rec.eq("Div-sbar-basis", (r, i, j), zero, div_classical(u))


def suite_closure(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    for tag in (AlgebraTag.Stilde, AlgebraTag.StildePrime, AlgebraTag.Sbar, AlgebraTag.SbarPrime):
        for _ in range(cfg.samples):
            u, v = s.field(tag), s.field(tag)
            m = is_member(bracket(u, v), tag)
            rec.add(f"closure-{tag.value}", (u, v), True, m.reason or True, m.ok)
    for _ in range(cfg.samples):
        u = s.field(AlgebraTag.Stilde)
        derived, h = split_cartan(u)
        ok = (is_member(derived, AlgebraTag.StildePrime).ok and is_member(h, AlgebraTag.CartanH).ok
              and derived + h == u)
        rec.add("cartan-split", u, True, ok, ok)


def suite_divergence_sign_probe(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    plus = minus = 0
    for _ in range(cfg.samples):
        u, v = s.field(AlgebraTag.W, box=min(cfg.box, 4)), s.field(AlgebraTag.W, box=min(cfg.box, 4))
        p = divergence_cocycle_probe(u, v)
        plus += p["plus_holds"]
        minus += p["minus_holds"]
        rec.add("cocycle-minus-form", (u, v), p["minus_form"], p["div_bracket"], p["minus_holds"])
    verdict = "minus" if minus == cfg.samples else ("plus" if plus == cfg.samples else "neither")
    rec.extra["probe"] = {"samples": cfg.samples, "plus_form_holds": plus,
                          "minus_form_holds": minus, "verdict": verdict}


# -- Virasoro-like algebra ---------------------------------------------------


def suite_vl_homomorphism(cfg: SuiteConfig, rec: _Records) -> None:
    b = min(cfg.box, 4)
    idx = [(i, j) for i in range(-b, b + 1) for j in range(-b, b + 1) if (i, j) != (0, 0)]
    elems = [vl_d(i, j) for i, j in idx] + [vl_h(1), vl_h(2)]
    images = [phi(x) for x in elems]
    for x, px in zip(elems, images):
        tag = AlgebraTag.StildePrime if not any(x.hcoeffs) else AlgebraTag.Stilde
        rec.add("phi-membership", x, tag.value, is_member(px, tag).reason or tag.value,
                is_member(px, tag).ok)
        rec.eq("phi-ij-inverse", x, x, phi_ij(px, 1, 2))
    for (x, px), (y, py) in itertools.product(zip(elems, images), repeat=2):
        rec.eq("phi-homomorphism", (x, y), phi(vl_bracket(x, y)), bracket(px, py))
        rec.eq("phi-ij-homomorphism", (x, y), vl_bracket(phi_ij(px, 1, 2), phi_ij(py, 1, 2)),
               phi_ij(bracket(px, py), 1, 2))


# -- modules ---------------------------------------------------------------


def suite_module_axioms(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    for fam in cfg.families:
        spec = s.spec(fam)
        for k in range(cfg.samples):
            if k % 10 == 0:
                spec = s.spec(fam)
            u, v, f = s.field(spec.algebra), s.field(spec.algebra), s.poly(cfg.n)
            r = check_module_axiom(spec, u, v, f)
            rec.add(f"axiom-{fam}", (spec.params(), u, v, f), r["lhs"], r["rhs"], r["holds"])


def suite_twisted_action(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    for fam in cfg.families:
        for _ in range(cfg.samples):
            spec = s.spec(fam)
            u = s._basis_term(spec.algebra, cfg.n, cfg.box)
            f = s.poly(cfg.n)
            r = twisted_action_identity(spec, u, f)
            rec.add(f"twisted-{fam}", (u, f), r["rhs"], r["lhs"], r["holds"])


def suite_closed_forms(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg.replace(n=2))
    tuples = min(cfg.samples, 5)
    for _ in range(tuples):
        st = s.spec("Stilde", 2)
        sb = s.spec("Sbar", 2)
        for i in range(-5, 6):
            for j in range(-5, 6):
                if (i, j) != (0, 0):
                    rec.eq("dij-recursion", (st.params(), i, j), closed_form_dij(st, i, j),
                           generator_recursion(st, (i, j)))
                if (i, j) not in SBAR_EXCLUDED:
                    rec.eq("lr-recursion", (sb.params(), i, j), closed_form_lr(sb, i, j),
                           generator_recursion(sb, (i, j)))
        for g, val in generator_values(st).items():
            rec.eq("dij-generator", (st.params(), g), closed_form_dij(st, *g), val)
            rec.eq("dij-generator-action", (st.params(), g), val, act_general(st, vl_d(*g), st.one()))
        for g, val in generator_values(sb).items():
            rec.eq("lr-generator", (sb.params(), g), closed_form_lr(sb, *g), val)
            u = basis_element(AlgebraTag.Sbar, g, 1, 2)
            rec.eq("lr-generator-action", (sb.params(), g), val, act_general(sb, u, sb.one()))
        for t in ((2, 3), (-3, 1), (4, -4)):
            for spec in (st, sb):
                r = cross_route_check(spec, t)
                rec.add(f"cross-route-{spec.family}", t, r["value"], r.get("alternative"),
                        r.get("agree", False))
        for i in range(-3, 4):
            for j in range(-3, 4):
                if (i, j) != (0, 0):
                    rec.eq("phi-route", (st.params(), i, j), closed_form_dij(st, i, j),
                           act_general(st, phi(vl_d(i, j)), st.one()))


def suite_compatibility(cfg: SuiteConfig, rec: _Records) -> None:
    n = max(cfg.n, 3)
    s = Sampler(cfg.replace(n=n))
    for _ in range(min(cfg.samples, 5)):
        spec = s.spec("Stilde", n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                for ri in range(-4, 5):
                    if not ri:
                        continue
                    e = [0] * n
                    e[i - 1] = ri
                    u = VectorField.monomial(n, e, j)
                    expected = (spec.x(j) + spec.alpha[j - 1]) * spec.lam[i - 1] ** ri
                    rec.eq("compatibility", (spec.params(), i, j, ri), expected,
                           act_general(spec, u, spec.one()))


def suite_factored_form(cfg: SuiteConfig, rec: _Records) -> None:
    n = max(cfg.n, 3)
    s = Sampler(cfg.replace(n=n))
    for _ in range(cfg.samples):
        spec = s.spec("Stilde", n)
        r = s.exponent(n)
        i, j = s._pair(n)
        f = s.poly(n)
        full = act_stilde(spec, r, i, j, f)
        rec.eq("factored-form", (r, i, j, f), translate(f, r) * act_stilde(spec, r, i, j, spec.one()), full)
        u = basis_element(AlgebraTag.Stilde, r, i, j)
        rec.eq("general-vs-basis", (r, i, j, f), full, act_general(spec, u, f))


def suite_restriction(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    for _ in range(min(cfg.samples, 3)):
        spec = s.spec("W")
        r = restriction_compare(spec, min(cfg.box, 4), min(cfg.degree_bound, 3))
        rec.add("restriction", (spec.params(),), "no mismatch", r["mismatches"][:3] or "no mismatch",
                r["holds"])


# -- classification --------------------------------------------------------


def suite_sigma_solver(cfg: SuiteConfig, rec: _Records) -> None:
    for d in range(0, 7):
        basis = solve_sigma_invariant(d)
        rec.eq("sigma-dimension", d, d + 1, len(basis))
        rec.add("sigma-span", d, True, sigma_invariant_span_matches(basis, d),
                sigma_invariant_span_matches(basis, d))


def suite_reductions(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg.replace(n=2))
    for fam in ("Stilde", "Sbar"):
        for _ in range(cfg.samples):
            spec = s.spec(fam, 2)
            F = s.poly(2, min(cfg.degree_bound, 4), nonzero=True)
            tr = simple_reduce(spec, F)
            r = tr.replay()
            rec.add(f"reduce-{fam}", (spec.params(), F), spec.ideal_generators(),
                    sorted(r["reached"].values(), key=repr), r["holds"])


def _single_changes(spec: ModuleSpec) -> list[ModuleSpec]:
    out = []
    lam = list(spec.lam)
    for k in range(spec.n):
        l2 = list(lam)
        l2[k] = l2[k] + 1 if l2[k] + 1 else l2[k] + 2
        out.append(ModuleSpec(spec.family, spec.n, tuple(l2), a=spec.a, alpha=spec.alpha,
                              kappa=spec.kappa))
    if spec.family == "Stilde":
        for k in range(spec.n):
            al = list(spec.alpha)
            al[k] = al[k] + 1
            out.append(ModuleSpec.stilde(spec.lam, al))
    elif spec.family == "Sbar":
        out.append(ModuleSpec.sbar(spec.lam, spec.kappa + 1))
    else:
        out.append(ModuleSpec.w(spec.lam, spec.a + 1))
    return out


def suite_invariants(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    for fam in cfg.families:
        for _ in range(cfg.samples):
            spec = s.spec(fam)
            t = extract_parameters(spec)
            rec.eq(f"roundtrip-{fam}", spec.params(), spec.params(), t.lam + t.params)
            rec.add(f"reflexive-{fam}", spec.params(), True, isomorphic(spec, spec), isomorphic(spec, spec))
            for other in _single_changes(spec):
                iso = isomorphic(spec, other)
                rec.add(f"distinguish-{fam}", (spec.params(), other.params()), False, iso, not iso)


def suite_negative_controls(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg.replace(n=2))
    for fam in ("Stilde", "Sbar"):
        for _ in range(cfg.samples):
            spec = s.spec(fam, 2)
            base = GeneratorAssignment.from_spec(spec)
            gen = s.rng.choice(sorted(base.values))
            d = s.rng.randint(0, 2)
            a = s.rng.randint(0, d)
            pert = perturb_assignment(base, gen, (a, d - a), s.rational(nonzero=True))
            r = check_rank1_consistency(pert, cfg.word_bound)
            rec.add(f"rank1-rejects-{fam}", (spec.params(), gen, pert.values[gen]), "violation",
                    r["first_violation"] and _s(r["first_violation"].get("target")), not r["holds"])
    for fam in ("Stilde", "Sbar"):
        for _ in range(cfg.samples):
            spec = s.spec(fam, 2)
            pt = list(spec.ideal_point())
            k = s.rng.randrange(2)
            pt[k] = pt[k] + s.rational(nonzero=True)
            r = submodule_closure_check(spec, 1, 2, point=pt, stop_after=1)
            rec.add(f"ideal-escapes-{fam}", (spec.params(), pt), "escape",
                    "escape" if r["escapes"] else "closed", not r["closed"])


def suite_rank1_positive(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg.replace(n=2))
    for fam in ("Stilde", "Sbar"):
        for _ in range(min(cfg.samples, 5)):
            spec = s.spec(fam, 2)
            r = check_rank1_consistency(GeneratorAssignment.from_spec(spec), cfg.word_bound)
            rec.add(f"rank1-accepts-{fam}", spec.params(), "consistent",
                    "consistent" if r["holds"] else r["first_violation"], r["holds"])


def suite_submodule_closure(cfg: SuiteConfig, rec: _Records) -> None:
    s = Sampler(cfg)
    for fam in ("Stilde", "Sbar"):
        spec = s.spec(fam)
        r = submodule_closure_check(spec, min(cfg.degree_bound, 3), min(cfg.box, 4))
        rec.add(f"submodule-closed-{fam}", (spec.params(),), "closed",
                "closed" if r["closed"] else r["escapes"][:1], r["closed"])


def suite_generation_identities(cfg: SuiteConfig, rec: _Records) -> None:
    n = max(cfg.n, 3)
    b = min(cfg.box, 3)
    for r in itertools.product(range(-b, b + 1), repeat=n):
        for i, j, l in itertools.permutations(range(1, n + 1), 3):
            rep = check_generation_identities(r, i, j, l)
            for ident in rep["identities"][:2]:
                if ident["applicable"]:
                    rec.add(f"generation-{ident['identity']}", (r, i, j, l), ident["rhs"],
                            ident["lhs"], ident["holds"])
    for i, j in itertools.permutations(range(1, n + 1), 2):
        ident = minus_two_identity(n, i, j)
        rec.add("generation-minus-two", (n, i, j), ident["rhs"], ident["lhs"], ident["holds"])


SUITES: dict[str, Callable[[SuiteConfig, _Records], None]] = {
    "ring-laws": suite_ring_laws,
    "bracket": suite_bracket,
    "divergence": suite_divergence,
    "closure": suite_closure,
    "divergence-sign-probe": suite_divergence_sign_probe,
    "vl-homomorphism": suite_vl_homomorphism,
    "module-axioms": suite_module_axioms,
    "twisted-action": suite_twisted_action,
    "closed-forms": suite_closed_forms,
    "compatibility": suite_compatibility,
    "factored-form": suite_factored_form,
    "restriction": suite_restriction,
    "sigma-solver": suite_sigma_solver,
    "reductions": suite_reductions,
    "invariants": suite_invariants,
    "rank1-consistency": suite_rank1_positive,
    "negative-controls": suite_negative_controls,
    "submodule-closure": suite_submodule_closure,
    "generation-identities": suite_generation_identities,
}


def suite_names() -> list[str]:
    return sorted(SUITES) + ["all"]


def run_suite(name: str, cfg: SuiteConfig) -> dict:
    """Run one suite (or ``"all"``) and return its report."""
    names = sorted(SUITES) if name == "all" else [name]
    for nm in names:
        if nm not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")
    rec = _Records()
    for nm in names:
        sub = _Records()
        SUITES[nm](cfg, sub)
        for item in sub.items:
            item["suite"] = nm
        rec.items.extend(sub.items)
        rec.extra.update(sub.extra)
    records = sorted(rec.items, key=lambda r: (r["suite"], r["check"], r["id"]))
    passed = sum(r["pass"] for r in records)
    report = {
        "suite": name,
        "version": __version__,
        "config": cfg.to_json(),
        "records": records,
        "counts": {"total": len(records), "passed": passed, "failed": len(records) - passed},
        "pass": passed == len(records),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    report.update(rec.extra)
    return report


def canonical(report: dict) -> dict:
    """The report without its timestamp: the part that must be reproducible."""
    return {k: v for k, v in report.items() if k != "timestamp"}
