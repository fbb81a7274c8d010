from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffam.family import (
    GroundSetMismatch, SetFamily, are_cross_intersecting, complement_family, degrees,
    diversity, elements_of, is_intersecting, k_subset_masks, mask_of, mu_p, popcounts,
    restrict, restrict_in, restrict_out, size_profile,
)

from oracles import cross_intersecting, intersecting, masks_to_sets


def fam(n, *sets):
    return SetFamily.from_sets(sets, n)


def test_mask_roundtrip():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b101) == (1, 3)
    assert elements_of(1 << 63) == (64,)
    with pytest.raises(ValueError):
        mask_of([0])
    with pytest.raises(ValueError):
        mask_of([5], 4)


def test_canonical_order_and_dedup():
    f = SetFamily.from_masks([6, 1, 6, 3], 3)
    assert f.masks.tolist() == [1, 3, 6]
    assert not f.masks.flags.writeable
    assert f.uniform_k is None
    assert SetFamily.from_masks([3, 5], 3).uniform_k == 2


def test_rejects_bad_members():
    with pytest.raises(ValueError):
        SetFamily(3, np.array([8], dtype=np.uint64))
    with pytest.raises(ValueError):
        SetFamily(3, np.array([1, 3], dtype=np.uint64), 1)
    with pytest.raises(ValueError):
        SetFamily(0, np.empty(0, dtype=np.uint64))
    with pytest.raises(ValueError):
        SetFamily(65, np.empty(0, dtype=np.uint64))


def test_n64_top_bit():
    f = SetFamily.from_sets([(1, 64), (64,)], 64)
    assert (1 << 63) in f
    assert f.sets() == [(64,), (1, 64)]


def test_containment_equality_hash():
    f = fam(4, (1, 2), (3, 4))
    g = fam(4, (3, 4), (1, 2))
    assert f == g and hash(f) == hash(g)
    assert mask_of((1, 2)) in f and 5 not in f and -1 not in f and "x" not in f
    assert f != fam(5, (1, 2), (3, 4))


def test_intersecting_edge_cases():
    assert is_intersecting(SetFamily.empty(3))
    assert not is_intersecting(fam(3, ()))
    assert is_intersecting(fam(3, (1, 2), (2, 3), (1, 3)))
    assert not is_intersecting(fam(4, (1, 2), (3, 4)))


def test_cross_intersecting_and_mismatch():
    assert are_cross_intersecting(fam(4, (1, 2)), fam(4, (2, 3), (1, 4)))
    assert not are_cross_intersecting(fam(4, (1, 2)), fam(4, (3, 4)))
    with pytest.raises(GroundSetMismatch):
        are_cross_intersecting(fam(4, (1,)), fam(5, (1,)))


def test_restrictions():
    f = fam(5, (1, 2, 3), (1, 4, 5), (2, 4, 5))
    b = mask_of((1, 2))
    assert restrict(f, mask_of((1,)), b).sets() == [(4, 5)]
    assert restrict_in(f, b).sets() == [(3,)]
    assert restrict_out(f, b).sets() == []
    assert restrict_out(f, mask_of((3,))).sets() == [(1, 4, 5), (2, 4, 5)]
    with pytest.raises(ValueError):
        restrict(f, mask_of((3,)), b)


def test_complement_degrees_diversity():
    f = fam(4, (1, 2), (1, 3), (2, 3))
    assert set(complement_family(f).sets()) == {(3, 4), (2, 4), (1, 4)}
    assert complement_family(f).uniform_k == 2
    assert degrees(f) == [2, 2, 2, 0]
    assert diversity(f) == (1, 1)
    star = fam(4, (1, 2), (1, 3))
    assert diversity(star) == (0, 1)
    with pytest.raises(ValueError):
        diversity(SetFamily.empty(3))


def test_mu_p_exact_and_float():
    p = SetFamily.power_set(4)
    assert mu_p(p, Fraction(1, 3)) == 1
    half = mu_p(fam(3, (1,), (1, 2)), Fraction(1, 2))
    assert half == Fraction(2, 8)
    assert abs(mu_p(fam(2, (1,)), 0.25) - 0.25 * 0.75) < 1e-15
    with pytest.raises(ValueError):
        mu_p(p, 1)


def test_size_profile_and_k_sets():
    assert size_profile(SetFamily.power_set(3)) == [1, 3, 3, 1]
    assert len(k_subset_masks(7, 3)) == 35
    assert SetFamily.all_k_sets(6, 2).uniform_k == 2


def test_union_and_subfamily():
    a, b = fam(3, (1, 2)), fam(3, (2, 3))
    u = a.union(b)
    assert a.is_subfamily(u) and not u.is_subfamily(a)
    assert u.uniform_k == 2


masks_st = st.integers(1, 10).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 2**n - 1), max_size=25))
)


@given(masks_st)
def test_intersecting_matches_oracle(data):
    n, masks = data
    f = SetFamily.from_masks(masks, n)
    assert is_intersecting(f) == intersecting(masks_to_sets(masks))


@given(masks_st, st.lists(st.integers(0, 1023), max_size=15))
def test_cross_matches_oracle(data, other):
    n, masks = data
    other = [m & ((1 << n) - 1) for m in other]
    f, g = SetFamily.from_masks(masks, n), SetFamily.from_masks(other, n)
    assert are_cross_intersecting(f, g) == cross_intersecting(masks_to_sets(masks), masks_to_sets(other))


@given(st.lists(st.integers(0, 2**64 - 1), max_size=50))
def test_popcounts(masks):
    assert popcounts(np.array(masks, dtype=np.uint64)).tolist() == [bin(m).count("1") for m in masks]
