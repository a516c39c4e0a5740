"""Seeded random sampling of scalars, polynomials, specs and algebra elements."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import ExcludedExponentError, PreconditionError
from .omega import ModuleSpec
from .poly import Poly
from .scalar import Scalar
from .vfield import AlgebraTag, VectorField, basis_element, cartan, check_rank
from .vlike import VLElement

__all__ = ["SuiteConfig", "Sampler", "sample_random", "FAMILIES"]

FAMILIES = ("W", "Stilde", "Sbar")


@dataclass(frozen=True)
class SuiteConfig:
    """Parameters shared by every verification suite."""

    n: int = 2
    seed: int = 0
    box: int = 4
    degree_bound: int = 4
    samples: int = 20
    families: tuple = FAMILIES
    num_bound: int = 20
    den_bound: int = 10
    word_bound: int = 3

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        for name in ("n", "seed", "box", "degree_bound", "samples", "num_bound",
                     "den_bound", "word_bound"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise PreconditionError(f"config field {name!r} must be an integer")
        check_rank(self.n)
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")
        if self.box < 1:
            raise PreconditionError("box must be >= 1")
        if self.degree_bound < 0:
            raise PreconditionError("degree_bound must be >= 0")
        if self.samples < 1:
            raise PreconditionError("samples must be >= 1")
        if self.num_bound < 1 or self.den_bound < 1:
            raise PreconditionError("rational bounds must be >= 1")
        if self.word_bound < 1:
            raise PreconditionError("word_bound must be >= 1")
        bad = [f for f in self.families if f not in FAMILIES]
        if bad:
            raise PreconditionError(f"unknown families {bad}")

    def to_json(self) -> dict:
        out = asdict(self)
        out["families"] = list(self.families)
        return out

    @classmethod
    def from_json(cls, obj: Any) -> SuiteConfig:
        if not isinstance(obj, dict):
            raise PreconditionError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(obj) - known
        if unknown:
            raise PreconditionError(f"unknown config keys {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def load(cls, path: str) -> SuiteConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def replace(self, **kw) -> SuiteConfig:
        data = asdict(self)
        data.update({k: v for k, v in kw.items() if v is not None})
        return SuiteConfig(**data)


@dataclass
class Sampler:
    """Reproducible streams of random objects for one ``SuiteConfig``."""

    config: SuiteConfig = field(default_factory=SuiteConfig)
    rng: random.Random = field(init=False)

    def __post_init__(self):
        self.rng = random.Random(self.config.seed)

    def rational(self, nonzero: bool = False) -> Scalar:
        c = self.config
        while True:
            p = self.rng.randint(-c.num_bound, c.num_bound)
            if p or not nonzero:
                return Scalar(p) / self.rng.randint(1, c.den_bound)

    def scalar(self, nonzero: bool = False, complex_prob: float = 0.0) -> Scalar:
        if complex_prob and self.rng.random() < complex_prob:
            while True:
                s = Scalar((self.rational().re), self.rational(nonzero=True).re)
                if s or not nonzero:
                    return s
        return self.rational(nonzero)

    def exponent(self, n: int, box: int | None = None, nonneg: bool = False) -> tuple:
        b = self.config.box if box is None else box
        lo = 0 if nonneg else -b
        return tuple(self.rng.randint(lo, b) for _ in range(n))

    def poly(self, n: int, degree: int | None = None, max_terms: int = 4,
             nonzero: bool = False) -> Poly:
        d = self.config.degree_bound if degree is None else degree
        while True:
            terms = {}
            for _ in range(self.rng.randint(1, max_terms)):
                e = tuple(self.rng.randint(0, d) for _ in range(n))
                while sum(e) > d:
                    k = self.rng.randrange(n)
                    if e[k]:
                        e = e[:k] + (e[k] - 1,) + e[k + 1:]
                terms[e] = self.rational()
            p = Poly(n, terms)
            if p or not nonzero:
                return p

    def laurent_terms(self, n: int, box: int | None = None, max_terms: int = 4) -> dict:
        return {self.exponent(n, box): self.rational() for _ in range(self.rng.randint(1, max_terms))}

    def spec(self, family: str, n: int | None = None, complex_prob: float = 0.0) -> ModuleSpec:
        n = self.config.n if n is None else n
        lam = tuple(self.scalar(True, complex_prob) for _ in range(n))
        if family == "W":
            return ModuleSpec.w(lam, self.scalar(False, complex_prob))
        if family == "Stilde":
            return ModuleSpec.stilde(lam, tuple(self.scalar(False, complex_prob) for _ in range(n)))
        if family == "Sbar":
            return ModuleSpec.sbar(lam, self.scalar(False, complex_prob))
        raise PreconditionError(f"unknown family {family!r}")

    def _pair(self, n: int) -> tuple:
        i, j = self.rng.sample(range(1, n + 1), 2)
        return i, j

    def _basis_term(self, tag: AlgebraTag, n: int, box: int) -> VectorField:
        """One nonzero spanning element of ``tag`` (retrying excluded exponents)."""
        while True:
            r = self.exponent(n, box)
            if tag is AlgebraTag.W:
                return VectorField.monomial(n, r, self.rng.randint(1, n), 1)
            if tag is AlgebraTag.CartanH:
                return cartan(n, self.rng.randint(1, n))
            if tag is AlgebraTag.Scl and all(x == -1 for x in r):
                return VectorField.monomial(n, r, self.rng.randint(1, n), 1)
            fam = {AlgebraTag.Stilde: AlgebraTag.Stilde, AlgebraTag.StildePrime: AlgebraTag.Stilde,
                   AlgebraTag.Sbar: AlgebraTag.Sbar, AlgebraTag.SbarPrime: AlgebraTag.SbarPrime,
                   AlgebraTag.Scl: AlgebraTag.SclPrime, AlgebraTag.SclPrime: AlgebraTag.SclPrime}[tag]
            if tag is AlgebraTag.StildePrime and not any(r):
                continue
            try:
                u = basis_element(fam, r, *self._pair(n))
            except ExcludedExponentError:
                continue
            if u:
                return u

    def field(self, tag: AlgebraTag | str, n: int | None = None, box: int | None = None,
              max_terms: int = 2) -> VectorField:
        """A sparse random member of ``tag``: a combination of spanning elements,
        plus a Cartan element for the algebras that contain one."""
        tag = AlgebraTag(tag)
        n = self.config.n if n is None else n
        box = self.config.box if box is None else box
        u = VectorField.zero(n)
        for _ in range(self.rng.randint(1, max_terms)):
            u = u + self._basis_term(tag, n, box) * self.rational(nonzero=True)
        if tag in (AlgebraTag.W, AlgebraTag.Stilde, AlgebraTag.Sbar) \
                and self.rng.random() < 0.25:
            u = u + cartan(n, self.rng.randint(1, n)) * self.rational(nonzero=True)
        return u

    def vl_element(self, box: int | None = None, max_terms: int = 2,
                   cartan_prob: float = 0.25) -> VLElement:
        b = self.config.box if box is None else box
        dterms = {}
        for _ in range(self.rng.randint(1, max_terms)):
            k = (0, 0)
            while k == (0, 0):
                k = (self.rng.randint(-b, b), self.rng.randint(-b, b))
            dterms[k] = self.rational(nonzero=True)
        h = (self.rational(), self.rational()) if self.rng.random() < cartan_prob else (0, 0)
        return VLElement(dterms, h)


def sample_random(config: SuiteConfig, kind: str, sampler: Sampler | None = None):
    """One sample of ``kind``: ``"Poly"``, ``"Scalar"``, ``"VL"``, an
    :class:`AlgebraTag` name, or ``"spec:<family>"``."""
    s = sampler or Sampler(config)
    if kind == "Poly":
        return s.poly(config.n)
    if kind == "Scalar":
        return s.scalar()
    if kind == "VL":
        return s.vl_element()
    if kind.startswith("spec:"):
        return s.spec(kind.split(":", 1)[1])
    try:
        tag = AlgebraTag(kind)
    except ValueError:
        raise PreconditionError(f"unknown sample kind {kind!r}") from None
    return s.field(tag)

