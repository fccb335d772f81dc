from fractions import Fraction

from hypothesis import assume, settings, strategies as st

from polychain.geometry import affine_rank

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-12, 12), st.sampled_from([1, 2, 3, 4]))
small_ints = st.integers(-3, 3).filter(bool)


def points(n: int):
    return st.tuples(*[rationals] * n)


@st.composite
def simplices(draw, n: int, k: int):
    verts = tuple(draw(points(n)) for _ in range(k + 1))
    assume(affine_rank(verts) == k)
    return verts


seeds = st.integers(0, 2**32 - 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module and module.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
