from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polychain.exact import RadicalSum, det, rank, solve, sqrt_split, to_rational

from conftest import rationals


def test_sqrt_split_extracts_square_factor():
    assert sqrt_split(Fraction(8)) == (Fraction(2), 2)
    assert sqrt_split(Fraction(9, 4)) == (Fraction(3, 2), 1)
    assert sqrt_split(Fraction(1, 2)) == (Fraction(1, 2), 2)


def test_radical_sum_normal_form():
    assert RadicalSum.sqrt(8) == RadicalSum.sqrt(2) * 2
    assert (RadicalSum.sqrt(2) * RadicalSum.sqrt(2)).as_rational() == 2
    assert RadicalSum.sqrt(2) + RadicalSum.sqrt(3) > 3
    assert RadicalSum.sqrt(2) < Fraction(142, 100)


def test_irrational_has_no_rational_value():
    with pytest.raises(ValueError):
        RadicalSum.sqrt(2).as_rational()


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_interval_encloses_and_is_narrow(p, q):
    x = RadicalSum.sqrt(Fraction(p, q))
    iv = x.interval(Fraction(1, 10**12))
    assert iv.width < Fraction(1, 10**12)
    assert iv.lo >= 0 and iv.lo**2 <= Fraction(p, q) <= iv.hi**2


@given(st.lists(st.tuples(st.integers(1, 50), rationals), max_size=4))
def test_sign_agrees_with_float(terms):
    x = RadicalSum.sum(RadicalSum.sqrt(r) * c for r, c in terms)
    f = sum(float(c) * r**0.5 for r, c in terms)
    if abs(f) > 1e-9:
        assert x.sign() == (1 if f > 0 else -1)


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_rank_and_solve(m):
    d = det(m)
    assert (d != 0) == (rank(m) == 3)
    if d:
        b = [Fraction(1), Fraction(2), Fraction(3)]
        x = solve(m, b)
        assert [sum(a * xi for a, xi in zip(row, x)) for row in m] == b


def test_to_rational_accepts_strings():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(2) == Fraction(2)
