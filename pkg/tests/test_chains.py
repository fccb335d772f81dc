import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polychain import Chain, CoefficientGroup, DimensionMismatch, GroupMismatch, NonGenericLevel
from polychain.samples import random_chain, random_group

from conftest import seeds

F = Fraction
ZZ = CoefficientGroup.integers()


def segment(a, b, g=1, group=ZZ):
    return Chain(len(a), 1, group, [((a, b), g)])


def test_reversed_cell_is_the_negative():
    assert segment((0, 0), (1, 1)) + segment((1, 1), (0, 0)) == Chain.zero(2, 1)


def test_boundary_of_segment():
    b = segment((0, 0), (1, 1)).boundary()
    assert b == Chain.point((1, 1)) - Chain.point((0, 0))


def test_collinear_subdivision_is_equivalent():
    whole = segment((0, 0), (2, 1))
    parts = segment((0, 0), (1, F(1, 2))) + segment((1, F(1, 2)), (2, 1))
    assert whole != parts
    assert whole.equivalent(parts)
    assert (whole - parts).is_zero()


def test_overlap_cancels_in_true_mass():
    c = segment((0, 0), (2, 0)) + segment((1, 0), (3, 0), -1)
    assert c.overlapping_pairs()
    assert c.stored_mass() == 4
    assert c.true_mass() == 2
    assert not c.mass(certify_overlap=True).certified
    report = c.refine().mass(certify_overlap=True)
    assert report.certified and report.total == 2


def test_mismatched_chains_do_not_add():
    with pytest.raises(DimensionMismatch):
        segment((0, 0), (1, 0)) + Chain.point((0, 0))
    with pytest.raises(GroupMismatch):
        segment((0, 0), (1, 0)) + segment((0, 0), (1, 0), group=CoefficientGroup.mod(2))


def test_section_at_vertex_is_non_generic():
    with pytest.raises(NonGenericLevel):
        segment((0, 0), (1, 1)).section(0, 1)


def test_section_sign_follows_slice_orientation():
    sec = segment((0, 0), (1, 1)).section(0, F(1, 2))
    assert sec == Chain.point((F(1, 2), F(1, 2)))


def test_mod_two_cancellation():
    z2 = CoefficientGroup.mod(2)
    c = segment((0, 0), (1, 0), group=z2)
    assert (c + c).is_zero()


@given(seeds, st.integers(1, 3), st.integers(0, 3))
def test_boundary_squares_to_zero(seed, k, extra):
    rng = random.Random(seed)
    n = k + extra if k + extra <= 3 else 3
    c = random_chain(rng, n, min(k, n), cells=3, group=random_group(rng))
    if c.dim >= 2:
        assert c.boundary().boundary().is_zero()


@given(seeds)
def test_mass_triangle_inequality(seed):
    rng = random.Random(seed)
    a = random_chain(rng, 2, 1)
    b = random_chain(rng, 2, 1)
    assert (a + b).true_mass() <= a.true_mass() + b.true_mass()
    assert a.true_mass() <= a.stored_mass()


@given(seeds)
def test_refinement_preserves_the_chain(seed):
    rng = random.Random(seed)
    c = random_chain(rng, 2, 2, cells=3)
    r = c.refine()
    assert not r.overlapping_pairs()
    assert r.equivalent(c)
    assert r.stored_mass() == c.true_mass()


@given(seeds)
def test_json_round_trip(seed):
    rng = random.Random(seed)
    c = random_chain(rng, 3, 1, group=random_group(rng))
    assert Chain.from_json(c.to_json()) == c


@given(seeds, st.sampled_from([1, 2]))
def test_boundary_zero_test_agrees_with_refinement(seed, k):
    rng = random.Random(seed)
    group = random_group(rng)
    a = random_chain(rng, 2, k, cells=2, group=group)
    b = a.refine()
    if rng.random() < 0.5:
        b = b + random_chain(rng, 2, k, cells=1, group=group)
    d = a - b
    assert d.is_zero() == (not d.refine())
