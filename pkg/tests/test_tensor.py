import random
from fractions import Fraction

import pytest
from hypothesis import given

from polychain import (Chain, CoefficientGroup, NotTensorRepresentable, TensorChain, TypeMismatch, chi_wedge,
                       dyadic_collapse, j_decompose)
from polychain.samples import random_tensor_chain
from polychain.slicing import TypeIndex
from polychain.tensor import dyadic_corner

from conftest import seeds

F = Fraction
ZZ = CoefficientGroup.integers()


def test_frozen_dyadic_corner():
    assert dyadic_corner((F(3, 10), F(7, 10)), 1) == (0, F(1, 2))


def test_j_decompose_splits_horizontal_and_vertical():
    c = Chain(2, 1, ZZ, [(((0, 0), (1, 0)), 1), (((1, 0), (1, 1)), 1)])
    parts = j_decompose(c, 1)
    assert set(parts) == {TypeIndex(1, 0), TypeIndex(0, 1)}
    assert [parts[t].mass() for t in sorted(parts, key=tuple)] == [1, 1]


def test_j_decompose_rejects_oblique_cells():
    with pytest.raises(NotTensorRepresentable):
        j_decompose(Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)]), 1)


def test_chi_wedge_of_four_corner_vanishes():
    a = Chain.point((0,)) - Chain.point((F(1, 2),))
    t = TensorChain.wedge(a, a)
    assert chi_wedge(t).value == 0


def test_chi_wedge_needs_type_zero_zero():
    t = TensorChain.wedge(Chain(1, 1, ZZ, [(((0,), (1,)), 1)]), Chain.point((0,)))
    with pytest.raises(TypeMismatch):
        chi_wedge(t)


@given(seeds)
def test_product_boundary_rule(seed):
    rng = random.Random(seed)
    t = random_tensor_chain(rng, (2, 2), (1, 2))
    emb = t.embed()
    assert emb.boundary().equivalent(t.d1().embed() + t.d2().embed())


@given(seeds)
def test_differentials_square_to_zero_and_anticommute(seed):
    rng = random.Random(seed)
    t = random_tensor_chain(rng, (2, 2), (2, 2))
    assert not t.d1().d1()
    assert not t.d2().d2()
    assert not (t.d1().d2() + t.d2().d1())


@given(seeds)
def test_i_map_round_trip(seed):
    rng = random.Random(seed)
    t = random_tensor_chain(rng, (2, 1), (1, 1))
    assert t.i_map().i_inverse() == t
    assert TensorChain.from_json(t.to_json()) == t


@given(seeds)
def test_j_decompose_inverts_embed(seed):
    rng = random.Random(seed)
    t = random_tensor_chain(rng, (2, 1), (1, 1), terms=1)
    parts = j_decompose(t.embed(), 2)
    assert parts[TypeIndex(1, 1)].embed().equivalent(t.embed())


@given(seeds)
def test_collapse_preserves_chi_wedge(seed):
    rng = random.Random(seed)
    t = random_tensor_chain(rng, (1, 1), (0, 0), terms=3)
    for j in range(4):
        assert chi_wedge(dyadic_collapse(t, j)) == chi_wedge(t)
