from __future__ import annotations

import pytest

from cayleybench import PeripheralError, peripheral_structure


def test_factor_membership(zz, zz_factors):
    fa, fb = zz_factors[0], zz_factors[1]
    assert fa.contains(zz.normalize("aaa"))
    assert fa.contains(zz.identity)
    assert not fa.contains(zz.normalize("ab"))
    assert fb.contains(zz.normalize("BB"))
    assert not fb.contains(zz.normalize("a"))


def test_membership_closed_under_inverse_and_product(zz, zz_factors):
    fa = zz_factors[0]
    g = zz.normalize("aa")
    assert fa.contains(zz.inverse(g))
    assert fa.contains(zz.multiply(g, g))


def test_coset_representative_strips_trailing_syllable(zz, zz_factors):
    fa = zz_factors[0]
    assert fa.coset_rep_value(zz.normalize("ba").value) == zz.normalize("b").value
    assert fa.coset_rep_value(zz.normalize("baaa").value) == zz.normalize("b").value
    assert fa.coset_rep_value(zz.normalize("ab").value) == zz.normalize("ab").value
    assert fa.coset_rep_value(zz.identity.value) == zz.identity.value


def test_coset_equality_iff_same_key(zz, zz_factors):
    struct = zz_factors
    c1 = struct.coset_of(zz.normalize("ba"), 0)
    c2 = struct.coset_of(zz.normalize("baa"), 0)
    c3 = struct.coset_of(zz.normalize("ab"), 0)
    assert c1 == c2
    assert c1 != c3


def test_trivial_peripheral(z2):
    struct = peripheral_structure(z2, "trivial")
    assert len(struct) == 1
    sub = struct[0]
    assert sub.contains(z2.identity)
    assert not sub.contains(z2.generator(0))
    g = z2.normalize("ab")
    assert sub.coset_rep_value(g.value) == g.value


def test_factors_descriptor_requires_free_product(free2):
    with pytest.raises(PeripheralError):
        peripheral_structure(free2, "factors")
    with pytest.raises(PeripheralError):
        peripheral_structure(free2, "banana")


def test_elements_in_ball(zz_ball5, zz_factors):
    fa = zz_factors[0]
    members = fa.elements_in_ball(zz_ball5)
    # the infinite-cyclic section of the radius-5 ball: 1, a..a^5, A..A^5
    assert len(members) == 11
    assert all(fa.contains(zz_ball5.element(i)) for i in members)
