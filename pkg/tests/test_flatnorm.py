import random
from fractions import Fraction

import pytest
from hypothesis import given

from polychain import (Chain, CoefficientGroup, CubicalComplex, NotGridAligned, cross_mass_bounds, flat_norm,
                       rasterize, tensor_flat_norm)
from polychain.flatnorm import (cross_mass_m, flat_norm_bruteforce, integer_flat_norm, tensor_flat_norm_bruteforce,
                                GridChain)
from polychain.reproduce import four_corner

from conftest import seeds

F = Fraction
ZZ = CoefficientGroup.integers()


def test_four_corner_tensor_flat_norm():
    cx = CubicalComplex((-1, -1), F(1, 2), (5, 5), n1=1)
    g = rasterize(four_corner(F(1, 2)), cx)
    assert tensor_flat_norm(g, 0, 0).value == F(1, 4)


def test_single_point_flat_norm():
    cx = CubicalComplex((-2,), 1, (4,))
    g = rasterize(Chain.point((0,)), cx)
    assert flat_norm(g).value == 1


def test_dipole_flat_norm_is_distance():
    cx = CubicalComplex((-1,), 1, (5,))
    g = rasterize(Chain.point((0,)) - Chain.point((1,)), cx)
    assert flat_norm(g).value == 1
    g = rasterize(Chain.point((0,)) - Chain.point((3,)), cx)
    assert flat_norm(g).value == 2


def test_diagonal_is_not_grid_aligned():
    cx = CubicalComplex((0, 0), 1, (2, 2))
    with pytest.raises(NotGridAligned):
        rasterize(Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)]), cx)


def test_rasterize_merges_collinear_pieces():
    cx = CubicalComplex((0, 0), 1, (3, 3))
    c = Chain(2, 1, ZZ, [(((0, 1), (2, 1)), 1)])
    g = rasterize(c, cx)
    assert g.mass() == 2
    assert g.to_chain().equivalent(c)


def test_cross_mass_counts():
    assert cross_mass_m(1, 1, 1) == 2
    assert cross_mass_m(0, 1, 1) == 1
    assert cross_mass_m(3, 2, 2) == 2
    seg = Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)])
    b = cross_mass_bounds(seg, 1)
    assert b.m == 2 and b.lower <= b.upper


def test_pad_check_flags_small_complexes():
    cx = CubicalComplex((0,), 1, (3,))
    g = rasterize(Chain.point((0,)) - Chain.point((3,)), cx)
    res = flat_norm(g, pad_check=True)
    assert res.touches_boundary


@given(seeds)
def test_flat_norm_matches_oracles_on_the_unit_square(seed):
    rng = random.Random(seed)
    cx = CubicalComplex((0, 0), 1, (1, 1), n1=1)
    k = rng.choice([0, 1])
    g = GridChain.from_vector(cx, k, [F(rng.randint(-2, 2)) for _ in cx.cells(k)])
    value = flat_norm(g, method="exact").value
    assert value == flat_norm_bruteforce(g)
    assert value <= integer_flat_norm(g, 2)
    assert value <= g.mass()


@given(seeds)
def test_solver_routes_agree_on_a_larger_grid(seed):
    rng = random.Random(seed)
    cx = CubicalComplex((0, 0), 1, (3, 3), n1=1)
    cells = cx.cells(1)
    g = GridChain.from_vector(cx, 1, [F(rng.choice([-1, 0, 0, 0, 1])) for _ in cells])
    assert flat_norm(g, method="exact").value == flat_norm(g).value


@given(seeds)
def test_tensor_flat_norm_is_below_flat_norm(seed):
    rng = random.Random(seed)
    cx = CubicalComplex((0, 0), 1, (1, 1), n1=1)
    g = GridChain.from_vector(cx, 0, [F(rng.choice([-1, 0, 1])) for _ in cx.cells(0)])
    tv = tensor_flat_norm(g, 0, 0).value
    assert tv == tensor_flat_norm_bruteforce(g, 0, 0)
    assert tv <= flat_norm(g).value <= g.mass()
