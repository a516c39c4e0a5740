from __future__ import annotations

import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divzero import (
    AlgebraTag,
    DivzeroError,
    ModuleSpec,
    Poly,
    PreconditionError,
    Scalar,
    VectorField,
    act_general,
    bracket,
    is_member,
)
from divzero.cli import main
from divzero.sampling import Sampler, SuiteConfig, sample_random
from divzero.serialize import (
    ParseError,
    dumps,
    field_from_json,
    poly_from_json,
    poly_to_json,
    scalar_from_json,
    scalar_to_json,
    spec_from_json,
    spec_to_json,
    vl_from_json,
    vl_to_json,
)
from divzero.suites import canonical, run_suite, suite_names

from conftest import polys, scalars

M = VectorField.monomial
x1, x2 = Poly.gens(2)


def _write(tmp_path, name: str, obj) -> str:
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else dumps(obj))
    return str(p)


# -- serialization ---------------------------------------------------------


@given(scalars)
def test_scalar_round_trip(c):
    assert scalar_from_json(json.loads(json.dumps(scalar_to_json(c)))) == c


@given(polys(3, 4, 6, scalars))
def test_poly_round_trip(f):
    assert poly_from_json(json.loads(json.dumps(poly_to_json(f)))) == f


@given(st.integers(0, 2**32))
def test_field_vl_spec_round_trip(seed):
    s = Sampler(SuiteConfig(n=3, seed=seed))
    u = s.field(AlgebraTag.W)
    assert field_from_json(json.loads(dumps(u))) == u
    x = s.vl_element()
    assert vl_from_json(json.loads(json.dumps(vl_to_json(x)))) == x
    for fam in ("W", "Stilde", "Sbar"):
        spec = s.spec(fam, complex_prob=0.5)
        assert spec_from_json(json.loads(json.dumps(spec_to_json(spec)))) == spec


@pytest.mark.parametrize("bad", [
    {"terms": []},
    {"n": 2, "terms": [{"exp": [1], "coeff": "1"}]},
    {"n": 2, "terms": [{"exp": [1, "a"], "coeff": "1"}]},
    {"n": 2, "terms": [{"exp": [1, 0], "coeff": "1/0"}]},
    {"n": 2, "terms": [{"exp": [-1, 0], "coeff": "1"}]},
])
def test_poly_parse_errors(bad):
    with pytest.raises(ParseError):
        poly_from_json(bad)


def test_dumps_is_canonical():
    f = x1 * 3 + x2 - Scalar("1/2")
    g = Poly(2, dict(reversed(list(f.terms.items()))))
    assert dumps(f) == dumps(g)


# -- config and sampling ---------------------------------------------------


@pytest.mark.parametrize("kw", [{"box": 0}, {"samples": 0}, {"degree_bound": -1}, {"n": 1},
                                {"families": ["X"]}, {"seed": -1}, {"n": "2"}])
def test_config_validation(kw):
    with pytest.raises(DivzeroError):
        SuiteConfig(**kw)


def test_config_json_round_trip():
    cfg = SuiteConfig(n=3, seed=11, families=("Sbar",))
    assert SuiteConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg
    with pytest.raises(PreconditionError):
        SuiteConfig.from_json({"bogus": 1})


def test_sampler_reproducible():
    cfg = SuiteConfig(seed=42)
    a = [sample_random(cfg, "Stilde", s) for s in [Sampler(cfg)] for _ in range(5)]
    b = [sample_random(cfg, "Stilde", s) for s in [Sampler(cfg)] for _ in range(5)]
    assert a == b


@given(st.integers(0, 2**32))
def test_sampler_respects_tags_and_degrees(seed):
    cfg = SuiteConfig(seed=seed, degree_bound=3)
    s = Sampler(cfg)
    for tag in AlgebraTag:
        assert is_member(s.field(tag), tag)
    f = s.poly(2, 3)
    assert all(max(e) <= 3 for e in f.terms)
    assert all(x for x in s.spec("Sbar").lam)


# -- suites ----------------------------------------------------------------


def test_suite_names():
    names = suite_names()
    assert names[-1] == "all"
    for must in ("module-axioms", "closed-forms", "divergence-sign-probe", "reductions",
                 "negative-controls", "generation-identities"):
        assert must in names


def test_report_is_deterministic():
    cfg = SuiteConfig(samples=4, seed=3)
    a = run_suite("module-axioms", cfg)
    b = run_suite("module-axioms", cfg)
    assert dumps(canonical(a)) == dumps(canonical(b))
    assert a["pass"] and a["config"] == cfg.to_json() and a["version"]
    keys = [(r["suite"], r["check"], r["id"]) for r in a["records"]]
    assert keys == sorted(keys)


def test_sign_probe_report():
    rep = run_suite("divergence-sign-probe", SuiteConfig(samples=10))
    assert rep["probe"]["verdict"] == "minus"


# -- command line ----------------------------------------------------------


def test_cli_bracket(tmp_path, capsys):
    a = _write(tmp_path, "a.json", M(2, (0, 0), 1))
    b = _write(tmp_path, "b.json", M(2, (0, 0), 2))
    assert main(["bracket", a, b, "--json"]) == 0
    assert field_from_json(json.loads(capsys.readouterr().out)) == VectorField.zero(2)
    u, v = M(2, (1, 0), 2), M(2, (0, 1), 1)
    a, b = _write(tmp_path, "u.json", u), _write(tmp_path, "v.json", v)
    assert main(["bracket", a, b, "--json"]) == 0
    assert field_from_json(json.loads(capsys.readouterr().out)) == bracket(u, v)


def test_cli_parse_error(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", "{not json")
    assert main(["bracket", bad, bad]) == 2
    assert "parse error" in capsys.readouterr().err
    assert main(["bracket", str(tmp_path / "missing.json"), bad]) == 2


def test_cli_act(tmp_path, capsys):
    w = _write(tmp_path, "w.json", ModuleSpec.w((2, 3), 1))
    f = x1 * x2 + 1
    fp = _write(tmp_path, "f.json", f)
    d1 = _write(tmp_path, "d1.json", M(2, (0, 0), 1))
    assert main(["act", w, d1, fp, "--json"]) == 0
    assert poly_from_json(json.loads(capsys.readouterr().out)) == x1 * f

    sb = ModuleSpec.sbar((2, 3), Scalar("1/2"))
    spec = _write(tmp_path, "sb.json", sb)
    l10 = _write(tmp_path, "l10.json", M(2, (1, 0), 1) - M(2, (1, 0), 2, 2))
    one = _write(tmp_path, "one.json", Poly.one(2))
    assert main(["act", spec, l10, one, "--json"]) == 0
    got = poly_from_json(json.loads(capsys.readouterr().out))
    assert got == (x1 - x2 * 2 + sb.kappa) * 2


def test_cli_act_membership_failure(tmp_path, capsys):
    st_ = _write(tmp_path, "st.json", ModuleSpec.stilde((2, 3), (0, 1)))
    u = _write(tmp_path, "u.json", M(2, (1, 0), 1))
    one = _write(tmp_path, "one.json", Poly.one(2))
    assert main(["act", st_, u, one]) == 3
    out = json.loads(capsys.readouterr().out)
    assert out["certificate"]["exp"] == [1, 0]


def test_cli_act_vl_element(tmp_path, capsys):
    st_ = _write(tmp_path, "st.json", ModuleSpec.stilde((2, 3), (0, 1)))
    d10 = _write(tmp_path, "d10.json", {"d": [{"i": 1, "j": 0, "coeff": "1"}], "h": ["0", "0"]})
    one = _write(tmp_path, "one.json", Poly.one(2))
    assert main(["act", st_, d10, one, "--json"]) == 0
    assert poly_from_json(json.loads(capsys.readouterr().out)) == (x2 + 1) * 2


def test_cli_reduce(tmp_path, capsys):
    sb = ModuleSpec.sbar((2, 3), Scalar("1/2"))
    spec = _write(tmp_path, "sb.json", sb)
    F = _write(tmp_path, "F.json", (x2 - sb.kappa) ** 2)
    assert main(["reduce", spec, F, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["replay"]["holds"] and len(out["steps"]) > 3
    st_ = ModuleSpec.stilde((2, 3), (Scalar("1/2"), -1))
    spec = _write(tmp_path, "st.json", st_)
    F = _write(tmp_path, "F1.json", x1 + Scalar("1/2"))
    assert main(["reduce", spec, F, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["replay"]["holds"] and len(out["steps"]) == 3
    zero = _write(tmp_path, "zero.json", Poly.zero(2))
    assert main(["reduce", spec, zero]) == 4


def test_cli_extract(tmp_path, capsys):
    spec = ModuleSpec.sbar((5, 7), 2)
    p = _write(tmp_path, "sb.json", spec)
    assert main(["extract", p, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [scalar_from_json(c) for c in out["lambda"] + out["params"]] == [5, 7, 2]
    # recorded readings of u . 1 for the elements the extractor queries
    st_ = ModuleSpec.stilde((2, 3), (1, -1))
    readings = [{"element": M(2, e, i), "value": act_general(st_, M(2, e, i), st_.one())}
                for e, i in (((0, 1), 1), ((1, 0), 2))]
    p = _write(tmp_path, "r.json", {"family": "Stilde", "n": 2, "readings": readings})
    assert main(["extract", p]) == 0
    assert "alpha = (1, -1)" in capsys.readouterr().out
    bad = _write(tmp_path, "bad.json", {"family": "Stilde", "n": 2, "readings": readings[:1]})
    assert main(["extract", bad]) == 4


def test_cli_solve_sigma(capsys):
    assert main(["solve-sigma", "--degree", "3", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["dimension"] == 4 and len(out["basis"]) == 4


def test_cli_verify(tmp_path, capsys, monkeypatch):
    assert main(["verify", "--suite", "closed-forms", "--samples", "2"]) == 0
    assert "passed" in capsys.readouterr().out
    assert main(["verify", "--suite", "nope"]) == 4
    assert main(["verify", "--suite", "sigma-solver", "--box", "0"]) == 4
    cfg = _write(tmp_path, "cfg.json", {"seed": 9, "samples": 3, "n": 2})
    monkeypatch.setenv("DIVZERO_CONFIG", cfg)
    out = tmp_path / "rep.json"
    assert main(["verify", "--suite", "module-axioms", "--json", "--output", str(out)]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["config"]["seed"] == 9 and printed["config"]["samples"] == 3
    assert json.loads(out.read_text())["records"] == printed["records"]
    assert main(["verify", "--suite", "module-axioms", "--json", "--seed", "10"]) == 0
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 10


def test_cli_verify_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        assert main(["verify", "--suite", "reductions", "--samples", "3", "--output", str(p)]) == 0
        rep = json.loads(p.read_text())
        outs.append(dumps(canonical(rep)))
    assert outs[0] == outs[1]


def test_cli_check_failure_exit_code(monkeypatch, capsys):
    import divzero.suites as suites

    def broken(cfg, rec):
        rec.add("always-false", (), True, False, False)

    monkeypatch.setitem(suites.SUITES, "broken", broken)
    assert main(["verify", "--suite", "broken"]) == 1
    assert "FAIL broken/always-false#0" in capsys.readouterr().out


def test_console_script_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "divzero.cli", "solve-sigma", "--degree", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("dimension 2")
    out = subprocess.run([sys.executable, "-m", "divzero.cli", "bogus"], capture_output=True, text=True)
    assert out.returncode == 2
