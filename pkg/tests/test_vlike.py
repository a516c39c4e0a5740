from __future__ import annotations

import itertools

from hypothesis import given
from hypothesis import strategies as st

from divzero import AlgebraTag, VectorField, VLElement, bracket, cartan, is_member, phi, phi_ij
from divzero.sampling import Sampler, SuiteConfig
from divzero.vlike import d, h, vl_bracket

M = VectorField.monomial

vl_elements = st.integers(0, 2**32).map(lambda s: Sampler(SuiteConfig(seed=s)).vl_element(box=4))


def test_bracket_examples():
    assert vl_bracket(d(1, 0), d(0, 1)) == -d(1, 1)
    assert vl_bracket(h(1), h(2)) == VLElement()
    assert vl_bracket(h(2), d(3, 5)) == d(3, 5) * 5


def test_d00_is_zero():
    assert not d(0, 0)
    assert vl_bracket(d(1, 2), d(-1, -2)) == VLElement()


def test_phi_examples():
    assert phi(d(1, 0)) == M(2, (1, 0), 2)
    assert phi(d(0, -1)) == -M(2, (0, -1), 1)
    lhs = bracket(phi(d(1, 0)), phi(d(0, 1)))
    assert lhs == M(2, (1, 1), 1) - M(2, (1, 1), 2) == phi(-d(1, 1))


def test_phi_ij_examples():
    assert phi_ij(cartan(3, 2), 2, 3) == h(1)
    assert phi_ij(M(3, (0, 0, 1), 2), 2, 3) == d(0, 1)


def test_exhaustive_homomorphism_box2():
    idx = [(i, j) for i in range(-2, 3) for j in range(-2, 3) if (i, j) != (0, 0)]
    elems = [d(*k) for k in idx] + [h(1), h(2)]
    for x, y in itertools.product(elems, repeat=2):
        assert phi(vl_bracket(x, y)) == bracket(phi(x), phi(y))


@given(vl_elements, vl_elements, vl_elements)
def test_jacobi(x, y, z):
    j = vl_bracket(vl_bracket(x, y), z) + vl_bracket(vl_bracket(y, z), x) + vl_bracket(vl_bracket(z, x), y)
    assert j == VLElement()


@given(vl_elements, vl_elements)
def test_phi_is_homomorphism(x, y):
    assert phi(vl_bracket(x, y)) == bracket(phi(x), phi(y))


@given(vl_elements)
def test_phi_lands_in_stilde(x):
    assert is_member(phi(x), AlgebraTag.Stilde)
    assert is_member(phi(x.derived_part()), AlgebraTag.StildePrime)


@given(st.integers(0, 2**32))
def test_phi_ij_round_trip(seed):
    s = Sampler(SuiteConfig(n=3, seed=seed))
    x = s.vl_element(box=3)
    # embed via phi into the (1, 2) plane of three variables, then read back
    u = VectorField(3, {((r[0], r[1], 0), i): c for (r, i), c in phi(x).terms.items()})
    assert phi_ij(u, 1, 2) == x
    assert phi_ij(phi(x), 1, 2) == x
