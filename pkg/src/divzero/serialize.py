"""JSON encodings shared by the library and the command line.

Rationals are ``"p/q"`` strings, scalars are ``{"re": "p/q", "im": "p/q"}``.
Polynomials: ``{"n": int, "terms": [{"exp": [...], "coeff": scalar}]}``.
Vector fields add a 1-based ``"dir"`` to every term.  Virasoro-like
elements: ``{"d": [{"i", "j", "coeff"}], "h": [scalar, scalar]}``.
Module specs: ``{"family", "n", "lambda", "a" | "alpha" | "kappa"}``.

Every encoder emits terms in sorted order so output is canonical.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import DivzeroError
from .poly import LaurentPoly, Poly
from .scalar import Scalar, format_rational, parse_rational
from .vfield import VectorField
from .vlike import VLElement

__all__ = [
    "ParseError",
    "scalar_to_json",
    "scalar_from_json",
    "poly_to_json",
    "poly_from_json",
    "field_to_json",
    "field_from_json",
    "vl_to_json",
    "vl_from_json",
    "spec_to_json",
    "spec_from_json",
    "element_from_json",
    "to_jsonable",
    "dumps",
]


class ParseError(DivzeroError, ValueError):
    """Malformed JSON input."""


def _need(obj: Any, key: str, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"key {key!r} must be {kind.__name__}")
    return val


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def scalar_to_json(c: Scalar) -> dict:
    return {"re": format_rational(c.re), "im": format_rational(c.im)}


def scalar_from_json(obj: Any) -> Scalar:
    """Accept ``{"re", "im"}``, a bare ``"p/q"`` string, or an integer."""
    try:
        if isinstance(obj, dict):
            re = parse_rational(obj.get("re", "0"))
            im = parse_rational(obj.get("im", "0"))
            return Scalar._make(re, im)
        if isinstance(obj, (str, int)) and not isinstance(obj, bool):
            return Scalar._make(parse_rational(obj), parse_rational(0))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"not a scalar: {obj!r}")


def poly_to_json(f) -> dict:
    return {
        "n": f.n,
        "terms": [{"exp": list(e), "coeff": scalar_to_json(f.terms[e])} for e in sorted(f.terms)],
    }


def poly_from_json(obj: Any, *, laurent: bool = False):
    n = _int(_need(obj, "n"), "n")
    terms = {}
    for t in _need(obj, "terms", list):
        exp = tuple(_int(x, "exponent entry") for x in _need(t, "exp", list))
        c = scalar_from_json(_need(t, "coeff"))
        terms[exp] = terms[exp] + c if exp in terms else c
    cls = LaurentPoly if laurent else Poly
    try:
        return cls(n, terms)
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from None


def field_to_json(u: VectorField) -> dict:
    return {
        "n": u.n,
        "terms": [
            {"exp": list(r), "dir": i, "coeff": scalar_to_json(u.terms[(r, i)])}
            for (r, i) in sorted(u.terms)
        ],
    }


def field_from_json(obj: Any) -> VectorField:
    n = _int(_need(obj, "n"), "n")
    terms: dict = {}
    for t in _need(obj, "terms", list):
        exp = tuple(_int(x, "exponent entry") for x in _need(t, "exp", list))
        d = _int(_need(t, "dir"), "dir")
        c = scalar_from_json(_need(t, "coeff"))
        key = (exp, d)
        terms[key] = terms[key] + c if key in terms else c
    try:
        return VectorField(n, terms)
    except (ValueError, TypeError, IndexError) as exc:
        raise ParseError(str(exc)) from None


def vl_to_json(x: VLElement) -> dict:
    return {
        "d": [{"i": i, "j": j, "coeff": scalar_to_json(x.dterms[(i, j)])}
              for (i, j) in sorted(x.dterms)],
        "h": [scalar_to_json(c) for c in x.hcoeffs],
    }


def vl_from_json(obj: Any) -> VLElement:
    dterms: dict = {}
    for t in _need(obj, "d", list):
        key = (_int(_need(t, "i"), "i"), _int(_need(t, "j"), "j"))
        c = scalar_from_json(_need(t, "coeff"))
        dterms[key] = dterms[key] + c if key in dterms else c
    h = obj.get("h", ["0", "0"])
    if not isinstance(h, list) or len(h) != 2:
        raise ParseError("'h' must be a list of two scalars")
    return VLElement(dterms, (scalar_from_json(h[0]), scalar_from_json(h[1])))


def spec_to_json(spec) -> dict:
    out: dict = {"family": spec.family, "n": spec.n,
                 "lambda": [scalar_to_json(x) for x in spec.lam]}
    if spec.family == "W":
        out["a"] = scalar_to_json(spec.a)
    elif spec.family == "Stilde":
        out["alpha"] = [scalar_to_json(x) for x in spec.alpha]
    else:
        out["kappa"] = scalar_to_json(spec.kappa)
    return out


def spec_from_json(obj: Any):
    from .omega import ModuleSpec

    family = _need(obj, "family", str)
    n = _int(_need(obj, "n"), "n")
    lam = tuple(scalar_from_json(x) for x in _need(obj, "lambda", list))
    kw: dict = {}
    if "a" in obj:
        kw["a"] = scalar_from_json(obj["a"])
    if "alpha" in obj:
        if not isinstance(obj["alpha"], list):
            raise ParseError("'alpha' must be a list")
        kw["alpha"] = tuple(scalar_from_json(x) for x in obj["alpha"])
    if "kappa" in obj:
        kw["kappa"] = scalar_from_json(obj["kappa"])
    try:
        return ModuleSpec(family, n, lam, **kw)
    except DivzeroError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from None


def element_from_json(obj: Any):
    """A vector field, or a Virasoro-like element when the ``"d"`` key is present."""
    if isinstance(obj, dict) and "d" in obj:
        return vl_from_json(obj)
    return field_from_json(obj)


def to_jsonable(x: Any) -> Any:
    """Recursively convert library values into JSON-ready data."""
    if isinstance(x, Scalar):
        return scalar_to_json(x)
    if isinstance(x, (Poly, LaurentPoly)):
        return poly_to_json(x)
    if isinstance(x, VectorField):
        return field_to_json(x)
    if isinstance(x, VLElement):
        return vl_to_json(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "family") and hasattr(x, "lam"):
        return spec_to_json(x)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def dumps(x: Any, *, indent: int | None = 2) -> str:
    return json.dumps(to_jsonable(x), indent=indent, sort_keys=True)
