from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from divzero import LaurentPoly, ModuleSpec, Poly, Scalar

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=10)
nonzero_rationals = rationals.filter(bool)


def to_scalar(re: Fraction, im: Fraction = Fraction(0)) -> Scalar:
    return Scalar(f"{re.numerator}/{re.denominator}", f"{im.numerator}/{im.denominator}")


scalars = st.builds(to_scalar, rationals, rationals)
real_scalars = st.builds(to_scalar, rationals)
nonzero_real_scalars = st.builds(to_scalar, nonzero_rationals)


def polys(n: int = 2, max_deg: int = 3, max_terms: int = 4, coeffs=real_scalars):
    exps = st.tuples(*[st.integers(0, max_deg)] * n)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: Poly(n, t))


def laurents(n: int = 2, box: int = 3, max_terms: int = 4, coeffs=real_scalars):
    exps = st.tuples(*[st.integers(-box, box)] * n)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: LaurentPoly(n, t))


@pytest.fixture
def stilde2() -> ModuleSpec:
    return ModuleSpec.stilde((2, 3), (Scalar("1/2"), -1))


@pytest.fixture
def sbar2() -> ModuleSpec:
    return ModuleSpec.sbar((2, 3), Scalar("1/2"))


@pytest.fixture
def w2() -> ModuleSpec:
    return ModuleSpec.w((2, 3), 0)
