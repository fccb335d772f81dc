import random
from fractions import Fraction

import pytest
from hypothesis import given

from polychain import (Chain, CoefficientGroup, NonGenericPoint, coarea_bound, slice_at, slices_vanish_ae,
                       splitting_test, types_of_dim)
from polychain.slicing import NeedsCertifiedRep, NonzeroAt, NotSplit, Split, TypeIndex, Vanishes
from polychain.samples import random_chain

from conftest import seeds

F = Fraction
ZZ = CoefficientGroup.integers()


def test_frozen_diagonal_slice():
    diag = Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)])
    assert slice_at(diag, (0,), (F(1, 2),)) == Chain(2, 0, ZZ, [(((0, F(1, 2)),), 1)])


def test_slice_through_vertex_is_rejected():
    diag = Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)])
    with pytest.raises(NonGenericPoint):
        slice_at(diag, (0,), (1,))


def test_types_of_dim():
    assert types_of_dim(2, 2, 2) == [TypeIndex(0, 2), TypeIndex(1, 1), TypeIndex(2, 0)]
    assert types_of_dim(1, 1, 1) == [TypeIndex(0, 1), TypeIndex(1, 0)]


def test_splitting_verdicts():
    horiz = Chain(2, 1, ZZ, [(((0, 0), (1, 0)), 1)])
    diag = Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)])
    assert isinstance(splitting_test(horiz, 1, 0, 1), Split)
    assert isinstance(splitting_test(diag, 1, 0, 1), NotSplit)
    overlap = horiz + Chain(2, 1, ZZ, [(((F(1, 2), 0), (2, 0)), 1)])
    assert isinstance(splitting_test(overlap, 1, 0, 1), NeedsCertifiedRep)


def test_vanishing_verdicts():
    sq = Chain(2, 1, ZZ, [(((0, 0), (1, 0)), 1), (((1, 0), (1, 1)), 1)])
    assert isinstance(slices_vanish_ae(sq, (0,)), NonzeroAt)
    vert = Chain(2, 1, ZZ, [(((0, 0), (0, 1)), 1)])
    assert isinstance(slices_vanish_ae(vert, (0,)), Vanishes)


def test_coarea_of_unit_square():
    sq = Chain(2, 2, ZZ, [(((0, 0), (1, 0), (1, 1)), 1), (((0, 0), (1, 1), (0, 1)), 1)])
    assert coarea_bound(sq, (0, 1)) == 1
    assert coarea_bound(sq, (0,)) == 1


@given(seeds)
def test_slice_commutes_with_boundary(seed):
    rng = random.Random(seed)
    c = random_chain(rng, 3, 2, cells=2)
    x = (F(rng.randint(-200, 200), 97),)
    try:
        lhs = slice_at(c.boundary(), (0,), x)
        rhs = slice_at(c, (0,), x).boundary()
    except NonGenericPoint:
        return
    assert lhs.equivalent(rhs)


@given(seeds)
def test_slice_is_additive(seed):
    rng = random.Random(seed)
    a = random_chain(rng, 2, 1)
    b = random_chain(rng, 2, 1)
    x = (F(rng.randint(-200, 200), 89),)
    try:
        lhs = slice_at(a + b, (1,), x)
        rhs = slice_at(a, (1,), x) + slice_at(b, (1,), x)
    except NonGenericPoint:
        return
    assert lhs.equivalent(rhs)
