import random
from fractions import Fraction

from hypothesis import given, strategies as st

from polychain.lp import L1Problem, check_certificate, float_certified_l1, objective, simplex_l1, vertex_enumeration_l1

from conftest import seeds

F = Fraction


def random_problem(rng: random.Random, m: int, extra: int) -> L1Problem:
    cols = [{i: F(1)} for i in range(m)]
    for _ in range(extra):
        rows = rng.sample(range(m), rng.randint(1, min(3, m)))
        cols.append({i: F(rng.choice([-1, 1])) for i in rows})
    weights = [F(rng.randint(1, 4), rng.choice([1, 2])) for _ in cols]
    b = [F(rng.randint(-3, 3)) for _ in range(m)]
    return L1Problem(m, cols, weights, b, list(range(m)))


def test_single_column_problem():
    p = L1Problem(1, [{0: F(1)}], [F(2)], [F(3)], [0])
    sol = simplex_l1(p)
    assert sol.value == 6
    assert check_certificate(p, sol.z, sol.y)


@given(seeds, st.integers(1, 4), st.integers(0, 4))
def test_exact_simplex_matches_vertex_enumeration(seed, m, extra):
    p = random_problem(random.Random(seed), m, extra)
    sol = simplex_l1(p)
    assert sol.value == vertex_enumeration_l1(p)
    assert objective(p, sol.z) == sol.value
    assert check_certificate(p, sol.z, sol.y)


@given(seeds, st.integers(1, 5), st.integers(0, 6))
def test_float_route_is_certified_or_declines(seed, m, extra):
    p = random_problem(random.Random(seed), m, extra)
    sol = float_certified_l1(p)
    if sol is not None:
        assert sol.value == simplex_l1(p).value
        assert check_certificate(p, sol.z, sol.y)
