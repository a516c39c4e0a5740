"""Command-line front end.

Exit codes: 0 pass, 1 check failure, 2 parse error, 3 membership failure,
4 precondition failure.  Inputs are JSON files (``-`` reads stdin); every
subcommand prints canonical JSON with ``--json`` and a short text form
otherwise.  ``DIVZERO_CONFIG`` names the default ``--config`` file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import __version__
from ._backend import BACKEND
from .classify import InvariantTuple, extract_parameters, solve_sigma_invariant
from .errors import DivzeroError, ExcludedExponentError, MembershipError, PreconditionError
from .omega import act_general
from .reduction import simple_reduce
from .sampling import SuiteConfig
from .serialize import (
    ParseError,
    dumps,
    element_from_json,
    field_from_json,
    poly_from_json,
    spec_from_json,
)
from .suites import run_suite, suite_names
from .vfield import bracket

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_MEMBERSHIP, EXIT_PRECONDITION = 0, 1, 2, 3, 4
CONFIG_ENV = "DIVZERO_CONFIG"


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None


def _emit(args: argparse.Namespace, payload: Any, text: str) -> None:
    print(dumps(payload) if args.json else text)


def _config(args: argparse.Namespace) -> SuiteConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        data = _load(path)
        if not isinstance(data, dict):
            raise ParseError(f"{path}: config must be a JSON object")
        cfg = SuiteConfig.from_json(data)
    else:
        cfg = SuiteConfig()
    return cfg.replace(seed=args.seed, n=args.n, box=args.box,
                       degree_bound=args.degree, samples=args.samples)


def cmd_bracket(args: argparse.Namespace) -> int:
    u = field_from_json(_load(args.u))
    v = field_from_json(_load(args.v))
    w = bracket(u, v)
    _emit(args, w, str(w))
    return EXIT_OK


def cmd_act(args: argparse.Namespace) -> int:
    spec = spec_from_json(_load(args.spec))
    u = element_from_json(_load(args.element))
    f = poly_from_json(_load(args.poly))
    g = act_general(spec, u, f)
    _emit(args, g, str(g))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if args.suite not in suite_names():
        raise KeyError(f"unknown suite {args.suite!r}; choose from {', '.join(suite_names())}")
    report = run_suite(args.suite, cfg)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(report) + "\n")
    if args.json:
        print(dumps(report))
    else:
        c = report["counts"]
        print(f"{report['suite']}: {c['passed']}/{c['total']} passed "
              f"(seed {cfg.seed}, n {cfg.n}, backend {BACKEND})")
        if "probe" in report:
            p = report["probe"]
            print(f"cocycle sign: {p['verdict']} (minus form {p['minus_form_holds']}/{p['samples']}, "
                  f"plus form {p['plus_form_holds']}/{p['samples']})")
        for r in report["records"]:
            if not r["pass"]:
                print(f"FAIL {r['suite']}/{r['check']}#{r['id']}: inputs {r['inputs']} "
                      f"expected {r['expected']} got {r['got']}")
    return EXIT_OK if report["pass"] else EXIT_CHECK


def cmd_reduce(args: argparse.Namespace) -> int:
    spec = spec_from_json(_load(args.spec))
    F = poly_from_json(_load(args.poly))
    trace = simple_reduce(spec, F)
    result = trace.replay()
    payload = trace.to_json()
    payload["replay"] = {k: v for k, v in result.items() if k != "reached"}
    if args.json:
        print(dumps(payload))
    else:
        for k, st in enumerate(trace.steps, 1):
            print(f"[{k}] {st.kind:<7} {st.label}: {st.expected}")
        print("replay ok" if result["holds"] else f"replay FAILED at steps {result['mismatched_steps']}")
    return EXIT_OK if result["holds"] else EXIT_CHECK


def _readings_oracle(data: dict):
    readings = data["readings"]
    if not isinstance(readings, list) or not all(
            isinstance(r, dict) and "element" in r and "value" in r for r in readings):
        raise ParseError("'readings' must be a list of {element, value} objects")
    table = [(field_from_json(r["element"]), poly_from_json(r["value"])) for r in readings]

    def oracle(u):
        for v, val in table:
            if v == u:
                return val
        raise PreconditionError(f"no reading supplied for {u}")

    return oracle


def cmd_extract(args: argparse.Namespace) -> int:
    data = _load(args.input)
    if isinstance(data, dict) and "readings" in data:
        family = data.get("family")
        n = data.get("n")
        if not isinstance(family, str) or isinstance(n, bool) or not isinstance(n, int):
            raise ParseError("readings need 'family' (string) and 'n' (integer)")
        inv = extract_parameters(_readings_oracle(data), family, n)
    else:
        inv = extract_parameters(spec_from_json(data))
    _emit(args, inv, _invariant_text(inv))
    return EXIT_OK


def _invariant_text(inv: InvariantTuple) -> str:
    name = {"Stilde": "alpha", "Sbar": "kappa", "W": "a"}[inv.family]
    return (f"{inv.family}: lambda = ({', '.join(map(str, inv.lam))}), "
            f"{name} = ({', '.join(map(str, inv.params))})")


def cmd_solve_sigma(args: argparse.Namespace) -> int:
    d = 4 if args.degree is None else args.degree
    basis = solve_sigma_invariant(d)
    _emit(args, {"degree": d, "dimension": len(basis), "basis": basis},
          f"dimension {len(basis)}\n" + "\n".join(str(b) for b in basis))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--config", metavar="PATH",
                        help=f"SuiteConfig JSON (default: ${CONFIG_ENV})")
    common.add_argument("--seed", type=int, metavar="N")
    common.add_argument("--n", type=int, metavar="N")
    common.add_argument("--box", type=int, metavar="N")
    common.add_argument("--degree", type=int, metavar="N")
    common.add_argument("--samples", type=int, metavar="N")

    parser = argparse.ArgumentParser(prog="divzero",
                                     description="Exact divergence-zero Lie algebra toolkit.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", parents=[common], help="bracket of two vector fields")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("act", parents=[common], help="act with an element on a polynomial")
    p.add_argument("spec")
    p.add_argument("element")
    p.add_argument("poly")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="all", metavar="NAME",
                   help=f"one of: {', '.join(suite_names())}")
    p.add_argument("--output", metavar="PATH", help="also write the report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", parents=[common], help="reduction trace to the ideal generators")
    p.add_argument("spec")
    p.add_argument("poly")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("extract", parents=[common],
                       help="invariants of a module spec or of recorded u . 1 readings")
    p.add_argument("input")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("solve-sigma", parents=[common],
                       help="polynomials with g(h1 - 1, h2 + 1) = g up to --degree")
    p.set_defaults(func=cmd_solve_sigma)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MembershipError, ExcludedExponentError) as exc:
        print(f"membership failure: {exc}", file=sys.stderr)
        cert = getattr(exc, "certificate", None)
        if cert is not None:
            print(dumps({"certificate": cert.to_json(), "reason": str(exc)}))
        return EXIT_MEMBERSHIP
    except (DivzeroError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"precondition failure: {msg}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
