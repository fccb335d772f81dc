from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polychain import Chain, CoefficientGroup, SearchBudgetExceeded, SpecInvalid
from polychain.lab import (DEFAULT_SPECS, StaircaseSpec, ThetaGraphSpec, atom_weight, build_counterexample,
                           build_staircase, decomposition_lower_bound_search, default_theta_spec,
                           hyperplane_split_probe, segment_intersection, slice_target, staircase_boundary_growth,
                           staircase_endpoint, zero_sum_vectors)

F = Fraction
ZZ = CoefficientGroup.integers()


def test_staircase_level_zero():
    a1, a2 = build_staircase(StaircaseSpec(0))
    assert a1 == Chain(2, 1, ZZ, [(((0, 0), (1, 0)), 1)])
    assert not a2
    _, jump = build_staircase(StaircaseSpec(0), jump_at_one=True)
    assert jump.true_mass() == F(1, 2)


@given(st.integers(0, 8))
def test_staircase_is_a_graph_with_filled_jumps(level):
    a1, a2 = build_staircase(StaircaseSpec(level))
    assert a1.true_mass() == 1
    end = staircase_endpoint(level)
    expected = Chain.point(end) - Chain.point((0, 0))
    assert (a1 + a2).boundary().equivalent(expected)
    assert a2.true_mass() == end[1]


def test_staircase_endpoint_tends_to_one_third():
    gaps = [abs(staircase_endpoint(j)[1] - F(1, 3)) for j in range(8)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert all(g < F(1, 2**j) for j, g in enumerate(gaps))


def test_boundary_growth_doubles():
    rows = staircase_boundary_growth(6)
    assert [r.boundary_mass for r in rows] == [2 ** (j + 1) for j in range(7)]
    assert [r.segments for r in rows] == [2**j for j in range(7)]


def test_atom_weights_total_one_with_two_thirds_at_one():
    for level in range(8):
        n = 2**level
        total = sum(atom_weight(F(m, n), level) for m in range(1, n + 1))
        assert total == 1 - F(1, 2 ** (level + 1))
        interior = total - atom_weight(F(1), level)
        assert staircase_endpoint(level)[1] == interior
    assert abs(atom_weight(F(1), 30) - F(2, 3)) < F(1, 10**15)


def test_staircase_level_is_bounded():
    with pytest.raises(ValueError):
        StaircaseSpec(17)


def test_segment_intersection():
    assert segment_intersection(((F(0), F(0)), (F(2), F(2))), ((F(0), F(2)), (F(2), F(0)))) == ((1, 1),)
    assert segment_intersection(((F(0), F(0)), (F(1), F(0))), ((F(0), F(1)), (F(1), F(1)))) == ()
    assert len(segment_intersection(((F(0), F(0)), (F(2), F(0))), ((F(1), F(0)), (F(3), F(0))))) == 2


@pytest.mark.parametrize("name", DEFAULT_SPECS)
def test_default_counterexamples_verify(name):
    spec = default_theta_spec(name)
    assert spec.monotone
    _, report = build_counterexample(spec)
    assert report.ok
    assert report.slice_mass == 2 * spec.n
    assert report.mass == spec.common_length * spec.common_length * (2 * spec.n)


def test_theta_spec_round_trip():
    spec = default_theta_spec("rational")
    assert ThetaGraphSpec.from_json(spec.to_json()) == spec


def test_theta_spec_rejects_bad_input():
    tent = [(0, 0), (F(1, 2), F(1, 2)), (1, 0)]
    low = [(0, 0), (F(1, 2), F(-1, 2)), (1, 0)]
    with pytest.raises(SpecInvalid):
        ThetaGraphSpec((tent, low))
    with pytest.raises(SpecInvalid):
        ThetaGraphSpec((tent, low, [(0, 0), (1, 0)]))
    with pytest.raises(SpecInvalid):
        ThetaGraphSpec((tent, low, tent))
    with pytest.raises(SpecInvalid):
        ThetaGraphSpec((tent, low, [(0, 0), (1, 1), (2, 0)]))
    with pytest.raises(SpecInvalid):
        default_theta_spec("missing")


def test_slice_target_rows():
    assert slice_target(3) == ((1, -1, 0), (0, 1, -1), (-1, 0, 1))


@given(st.integers(3, 4), st.integers(1, 2))
def test_zero_sum_vectors_have_even_mass(n, bound):
    for v in zero_sum_vectors(n, bound):
        assert sum(v) == 0 and any(v)
        assert sum(abs(x) for x in v) % 2 == 0


def test_ip_search_small_cases():
    res = decomposition_lower_bound_search(3, 3, 1)
    assert res.min_found == 8 and res.parity_ok
    res = decomposition_lower_bound_search(5, 4, 2)
    assert res.min_found == 16 == 4 * (5 - 1)
    total = [[0] * 5 for _ in range(5)]
    for u, v in res.witness:
        for i in range(5):
            for j in range(5):
                total[i][j] += u[i] * v[j]
    assert tuple(map(tuple, total)) == slice_target(5)


def test_ip_search_node_limit():
    with pytest.raises(SearchBudgetExceeded):
        decomposition_lower_bound_search(5, 4, 2, node_limit=3)


def test_hyperplane_probe():
    seg = Chain(2, 1, ZZ, [(((0, 0), (1, 0)), 1)])
    rows = hyperplane_split_probe(seg, 0, [F(1, 2), F(2)])
    assert [(r.slice_zero, r.boundary_additive) for r in rows] == [(False, False), (True, True)]
    vert = Chain(2, 1, ZZ, [(((0, 0), (0, 1)), 1)])
    [row] = hyperplane_split_probe(vert, 1, [F(1, 2)])
    assert not row.slice_zero and not row.boundary_additive
