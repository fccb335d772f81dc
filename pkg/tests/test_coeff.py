from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polychain import CoefficientGroup, GroupMismatch

GROUPS = [CoefficientGroup.integers(), CoefficientGroup.rationals(),
          CoefficientGroup.mod(2), CoefficientGroup.mod(5), CoefficientGroup.mod(6)]


def test_frozen_examples():
    assert CoefficientGroup.mod(5)(4).norm() == 1
    z2 = CoefficientGroup.mod(2)
    assert (z2(1) + z2(1)).value == 0
    q = CoefficientGroup.rationals()
    assert (q(Fraction(1, 2)) + q(Fraction(1, 3))).value == Fraction(5, 6)


def test_mixing_groups_is_rejected():
    with pytest.raises(GroupMismatch):
        CoefficientGroup.mod(2)(1) + CoefficientGroup.mod(3)(1)


def test_non_integer_in_integer_group():
    with pytest.raises(ValueError):
        CoefficientGroup.integers()(Fraction(1, 2))


@given(st.sampled_from(GROUPS), st.integers(-50, 50), st.integers(-50, 50))
def test_norm_is_symmetric_subadditive_and_definite(g, a, b):
    x, y = g(a), g(b)
    assert x.norm() >= 0
    assert (x.norm() == 0) == (x.value == 0)
    assert (-x).norm() == x.norm()
    assert (x + y).norm() <= x.norm() + y.norm()


@given(st.sampled_from(GROUPS), st.integers(-20, 20), st.integers(-50, 50))
def test_z_action_norm_bound(g, n, a):
    x = g(a)
    assert (n * x).norm() <= abs(n) * x.norm()


@given(st.sampled_from(GROUPS))
def test_json_round_trip(g):
    assert CoefficientGroup.from_json(g.to_json()) == g
