"""Concrete constructions: dyadic staircases, theta-graph cycles and the decomposition search.

The staircase is the graph of the distribution function of a dyadic atomic
measure, truncated at depth J so that every object is a finite polyhedral
chain. The theta-graph cycle is a (1,1)-split, boundaryless 2-chain in ℝ⁴
built from N equal-length broken lines, and the integer search bounds how
cheaply its generic 0-slices factor into products of 0-cycles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .chains import Chain
from .coeff import CoefficientGroup
from .errors import NonGenericPoint, SearchBudgetExceeded, SpecInvalid
from .exact import RadicalSum, RationalLike, fmt_rational, rank, to_rational
from .geometry import Point, point
from .slicing import (Split, Vanishes, j_vanishing_test, slice_at,
                      splitting_test, types_of_dim)
from .tensor import TensorChain

ZERO = Fraction(0)
MAX_LEVEL = 16


# ---------------------------------------------------------------------------
# dyadic staircase


@dataclass(frozen=True)
class StaircaseSpec:
    level: int

    def __post_init__(self) -> None:
        if not 0 <= self.level <= MAX_LEVEL:
            raise ValueError(f"level must lie in 0..{MAX_LEVEL}")


def dyadic_depth(x: Fraction) -> int:
    """j(x): the least j with 2^j x an integer."""
    j = 0
    while (x * 2**j).denominator != 1:
        j += 1
    return j


def atom_weight(x: Fraction, level: int) -> Fraction:
    """Mass of the truncated measure ½ Σ_{j≤J} 4^{-j} Σ_i δ_{i/2^j} at the dyadic point x."""
    return sum((Fraction(1, 2 * 4**j) for j in range(dyadic_depth(x), level + 1)), ZERO)


def staircase_ordinates(level: int) -> list[Fraction]:
    """Heights y_1..y_{2^J} of the horizontal pieces; y_m counts atoms in (0, (m-1)/2^J]."""
    n = 2**level
    ys = [ZERO]
    for m in range(1, n):
        ys.append(ys[-1] + atom_weight(Fraction(m, n), level))
    return ys


def staircase_endpoint(level: int) -> Point:
    """Right end (1, f(1)) of the truncated graph; f(1) tends to 1/3 as J grows."""
    return (Fraction(1), staircase_ordinates(level)[-1])


def build_staircase(spec: StaircaseSpec, jump_at_one: bool = False) -> tuple[Chain, Chain]:
    """(A1, A2): horizontal unit-multiplicity segments and the upward vertical fillers.

    Fillers sit at the dyadic points of (0, 1); ``jump_at_one`` adds the atom at
    x = 1 as a last filler, which moves the right endpoint up by its weight.
    """
    n = 2**spec.level
    ys = staircase_ordinates(spec.level)
    zz = CoefficientGroup.integers()
    a1 = Chain(2, 1, zz, ((((Fraction(m - 1, n), y), (Fraction(m, n), y)), 1)
                          for m, y in enumerate(ys, start=1)))
    jumps = [((Fraction(m, n), ys[m - 1]), (Fraction(m, n), ys[m])) for m in range(1, n)]
    if jump_at_one:
        top = ys[-1] + atom_weight(Fraction(1), spec.level)
        jumps.append(((Fraction(1), ys[-1]), (Fraction(1), top)))
    a2 = Chain(2, 1, zz, ((seg, 1) for seg in jumps))
    return a1, a2


@dataclass(frozen=True)
class GrowthRow:
    level: int
    segments: int
    boundary_mass: Fraction

    def to_json(self) -> dict:
        return {"J": self.level, "segments": self.segments,
                "boundary_mass": fmt_rational(self.boundary_mass)}


def staircase_boundary_growth(j_max: int) -> list[GrowthRow]:
    if not 0 <= j_max <= MAX_LEVEL:
        raise ValueError(f"j_max must lie in 0..{MAX_LEVEL}")
    rows = []
    for level in range(j_max + 1):
        a1, _ = build_staircase(StaircaseSpec(level))
        rows.append(GrowthRow(level, len(a1), a1.boundary().true_mass().as_rational()))
    return rows


# ---------------------------------------------------------------------------
# theta graphs and the (1,1) counterexample

S_PT: Point = (Fraction(0), Fraction(0))
N_PT: Point = (Fraction(1), Fraction(0))


def _orient(a: Point, b: Point, c: Point) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segment_intersection(a: tuple[Point, Point], b: tuple[Point, Point]) -> tuple[Point, ...]:
    """Exact intersection of two closed segments: () if disjoint, (p,) for a
    single point, (p, q) for a collinear overlap from p to q."""
    (p1, p2), (q1, q2) = a, b
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 == o2 == o3 == o4 == 0:
        pts = sorted({p for p in (p1, p2) if _on_segment(p, q1, q2)}
                     | {q for q in (q1, q2) if _on_segment(q, p1, p2)})
        if not pts:
            return ()
        return (pts[0],) if len(pts) == 1 else (pts[0], pts[-1])
    if o1 * o2 > 0 or o3 * o4 > 0:
        return ()
    # proper crossing or touching: solve p1 + t (p2 - p1) on line q
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    ex, ey = q2[0] - q1[0], q2[1] - q1[1]
    den = dx * ey - dy * ex
    t = ((q1[0] - p1[0]) * ey - (q1[1] - p1[1]) * ex) / den
    return ((p1[0] + t * dx, p1[1] + t * dy),)


def _segments(path: Sequence[Point]) -> list[tuple[Point, Point]]:
    return list(zip(path[:-1], path[1:]))


def path_length(path: Sequence[Point]) -> RadicalSum:
    return RadicalSum.sum(RadicalSum.sqrt((b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2)
                          for a, b in _segments(path))


@dataclass(frozen=True)
class ThetaGraphSpec:
    """N ≥ 3 pairwise internally disjoint broken lines from (0,0) to (1,0) of equal length."""

    paths: tuple[tuple[Point, ...], ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "paths", tuple(tuple(point(v) for v in p) for p in self.paths))
        self.validate()

    @property
    def n(self) -> int:
        return len(self.paths)

    @property
    def common_length(self) -> RadicalSum:
        return path_length(self.paths[0])

    @property
    def monotone(self) -> bool:
        """Every path is a graph over the first axis, so each generic vertical line meets it once."""
        return all(a[0] < b[0] for p in self.paths for a, b in _segments(p))

    def validate(self) -> None:
        if self.n < 3:
            raise SpecInvalid("a theta graph needs at least three paths")
        for i, p in enumerate(self.paths):
            if len(p) < 2 or p[0] != S_PT or p[-1] != N_PT:
                raise SpecInvalid(f"path {i} must run from (0,0) to (1,0)")
            if any(len(v) != 2 for v in p):
                raise SpecInvalid(f"path {i} has a vertex outside the plane")
            if any(a == b for a, b in _segments(p)):
                raise SpecInvalid(f"path {i} repeats a vertex")
            self._check_simple(i, p)
        ell = self.common_length
        for i, p in enumerate(self.paths[1:], start=1):
            if path_length(p) != ell:
                raise SpecInvalid(f"path {i} has length {path_length(p)}, path 0 has {ell}")
        for i, j in itertools.combinations(range(self.n), 2):
            for sa in _segments(self.paths[i]):
                for sb in _segments(self.paths[j]):
                    meet = segment_intersection(sa, sb)
                    if len(meet) == 2 or (meet and meet[0] not in (S_PT, N_PT)):
                        raise SpecInvalid(f"paths {i} and {j} meet at {[tuple(map(str, q)) for q in meet]}")

    @staticmethod
    def _check_simple(i: int, p: Sequence[Point]) -> None:
        segs = _segments(p)
        for a, b in itertools.combinations(range(len(segs)), 2):
            meet = segment_intersection(segs[a], segs[b])
            if not meet:
                continue
            if b == a + 1 and meet == (segs[a][1],):
                continue
            raise SpecInvalid(f"path {i} intersects itself between segments {a} and {b}")

    def to_json(self) -> dict:
        return {"name": self.name,
                "paths": [[[fmt_rational(x) for x in v] for v in p] for p in self.paths]}

    @classmethod
    def from_json(cls, data: dict) -> ThetaGraphSpec:
        paths = tuple(tuple(tuple(to_rational(Fraction(x)) for x in v) for v in p) for p in data["paths"])
        return cls(paths, data.get("name", "custom"))


def _mirror(path: Sequence[tuple]) -> list[tuple]:
    return [(x, -Fraction(y)) for x, y in path]


def _f(*xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def _default_paths() -> dict[str, list[list[tuple]]]:
    h = Fraction(1, 2)
    near_unit_tent = [_f(0, 0), (h, Fraction(10, 99)), _f(1, 0)]
    near_unit_mid = [_f(0, 0), (h - Fraction(1, 66), ZERO), (h, Fraction(2, 99)),
                     (h + Fraction(1, 66), ZERO), _f(1, 0)]
    rational_tent = [_f(0, 0), (h, Fraction(2, 3)), _f(1, 0)]
    rational_mid = [_f(0, 0), (Fraction(7, 24), ZERO), (h, h), (Fraction(17, 24), ZERO), _f(1, 0)]
    sqrt2_tent = [_f(0, 0), (h, h), _f(1, 0)]
    sqrt2_mid = [_f(0, 0), (Fraction(14, 30), Fraction(2, 30)), (h, Fraction(9, 30)),
                 (Fraction(16, 30), Fraction(2, 30)), _f(1, 0)]
    # four paths of length 5/3: two tents and two low trapezoids with a 5-12-13 bump
    w = Fraction(19, 96)
    low = Fraction(1, 20)
    trapezoid = [_f(0, 0), (Fraction(1, 15), low), (h - w, low), (h, low + Fraction(12, 5) * w),
                 (h + w, low), (Fraction(14, 15), low), _f(1, 0)]
    return {
        "near-unit": [near_unit_tent, near_unit_mid, _mirror(near_unit_tent)],
        "rational": [rational_tent, rational_mid, _mirror(rational_tent)],
        "sqrt2": [sqrt2_tent, sqrt2_mid, _mirror(sqrt2_tent)],
        "four-paths": [rational_tent, trapezoid, _mirror(trapezoid), _mirror(rational_tent)],
    }


DEFAULT_SPECS = tuple(_default_paths())


def default_theta_spec(name: str = "near-unit") -> ThetaGraphSpec:
    paths = _default_paths()
    if name not in paths:
        raise SpecInvalid(f"unknown default spec {name!r}; choose from {', '.join(DEFAULT_SPECS)}")
    return ThetaGraphSpec(tuple(tuple(p) for p in paths[name]), name)


def path_chain(path: Sequence[Point]) -> Chain:
    return Chain(2, 1, CoefficientGroup.integers(), ((seg, 1) for seg in _segments(path)))


@dataclass
class CounterexampleReport:
    n: int
    length: RadicalSum
    mass: RadicalSum
    mass_certified: bool
    mass_matches: bool
    boundary_zero: bool
    split: bool
    off_types_vanish: dict[str, bool]
    slice_point: tuple[Fraction, Fraction] | None = None
    slice_mass: Fraction | None = None
    monotone: bool = True

    @property
    def ok(self) -> bool:
        slice_ok = self.slice_mass is None or not self.monotone or self.slice_mass == 2 * self.n
        return (self.mass_certified and self.mass_matches and self.boundary_zero and self.split
                and all(self.off_types_vanish.values()) and slice_ok)

    def to_json(self) -> dict:
        out = {
            "N": self.n,
            "length": self.length.to_json(),
            "mass": self.mass.to_json(),
            "expected_mass": "2*N*length^2",
            "mass_certified": self.mass_certified,
            "mass_matches": self.mass_matches,
            "boundary_zero": self.boundary_zero,
            "split_1_1": self.split,
            "off_types_vanish": self.off_types_vanish,
            "monotone": self.monotone,
            "ok": self.ok,
        }
        if self.slice_point is not None:
            out["slice"] = {"gamma": [1, 3], "point": [fmt_rational(x) for x in self.slice_point],
                            "mass": fmt_rational(self.slice_mass)}
        return out


def counterexample_chain(spec: ThetaGraphSpec) -> TensorChain:
    """Σ_i C_i ∧ (C'_i − C'_{i+1 mod N}) with C'_i the copy of C_i in the second factor."""
    cs = [path_chain(p) for p in spec.paths]
    out = TensorChain((2, 2), (1, 1), CoefficientGroup.integers())
    for i, c in enumerate(cs):
        out = out + TensorChain.wedge(c, c - cs[(i + 1) % spec.n])
    return out


_SLICE_CANDIDATES = [(Fraction(1, 3), Fraction(2, 7)), (Fraction(3, 11), Fraction(5, 13)),
                     (Fraction(7, 17), Fraction(4, 19)), (Fraction(12, 23), Fraction(10, 29))]


def generic_slice_mass(chain: Chain, gamma: Sequence[int] = (0, 2)) -> tuple[tuple[Fraction, Fraction], Fraction]:
    for x in _SLICE_CANDIDATES:
        try:
            sl = slice_at(chain, gamma, x)
        except NonGenericPoint:
            continue
        return x, sl.true_mass().as_rational()
    raise NonGenericPoint("no generic slice level among the candidates")


def build_counterexample(spec: ThetaGraphSpec, verify: bool = True) -> tuple[TensorChain, CounterexampleReport]:
    a = counterexample_chain(spec)
    ell = spec.common_length
    emb = a.embed()
    mass = emb.mass(certify_overlap=True)
    report = CounterexampleReport(
        n=spec.n, length=ell, mass=mass.total, mass_certified=mass.certified,
        mass_matches=mass.total == ell * ell * (2 * spec.n),
        boundary_zero=not emb.boundary(), split=False, off_types_vanish={},
        monotone=spec.monotone)
    if verify:
        report.split = isinstance(splitting_test(emb, 1, 1, 2), Split)
        for t in types_of_dim(2, 2, 2):
            if tuple(t) != (1, 1):
                verdict = j_vanishing_test(emb, t.k1, t.k2, 2)
                report.off_types_vanish[f"({t.k1},{t.k2})"] = isinstance(verdict, Vanishes)
        report.slice_point, report.slice_mass = generic_slice_mass(emb)
    return a, report


# ---------------------------------------------------------------------------
# integer decomposition search


@dataclass
class IPSearchResult:
    n: int
    max_terms: int
    bound: int
    min_found: int | None
    witness: list[tuple[tuple[int, ...], tuple[int, ...]]]
    parity_ok: bool
    nodes: int
    budgets_exhausted: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"N": self.n, "J_max": self.max_terms, "B": self.bound,
                "min_found": self.min_found,
                "witness": [{"m": list(u), "m_prime": list(v)} for u, v in self.witness],
                "parity_ok": self.parity_ok, "nodes": self.nodes,
                "budgets_exhausted": self.budgets_exhausted}


def slice_target(n: int) -> tuple[tuple[int, ...], ...]:
    """Coefficient matrix of the generic 0-slice: +1 at (i,i), −1 at (i,i+1 mod N)."""
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] = 1
        row[(i + 1) % n] = -1
        rows.append(tuple(row))
    return tuple(rows)


def zero_sum_vectors(n: int, bound: int) -> list[tuple[int, ...]]:
    """Nonzero integer vectors in [−B, B]^N with vanishing sum (the 0-cycles on N points)."""
    out = []
    for head in itertools.product(range(-bound, bound + 1), repeat=n - 1):
        last = -sum(head)
        if -bound <= last <= bound and (any(head) or last):
            out.append(head + (last,))
    return out


def _l1(v: Sequence[int]) -> int:
    return sum(abs(x) for x in v)


@lru_cache(maxsize=None)
def _rank(r: tuple[tuple[int, ...], ...]) -> int:
    return rank([[Fraction(x) for x in row] for row in r])


class _Search:
    def __init__(self, n: int, max_terms: int, bound: int, node_limit: int):
        self.n, self.max_terms, self.node_limit = n, max_terms, node_limit
        vecs = zero_sum_vectors(n, bound)
        self.vectors = vecs
        # (u, v) and (−u, −v) give the same product; keep u with positive leading entry
        lead = [u for u in vecs if next(x for x in u if x) > 0]
        terms = [(_l1(u) * _l1(v), u, v) for u in lead for v in vecs]
        terms.sort()
        self.cover = {(r, c): [t for t in terms if t[1][r] and t[2][c]]
                      for r in range(n) for c in range(n)}
        self.nodes = 0
        self.failed: set = set()

    def run(self, target, budget: int):
        return self._dfs(target, self.max_terms, budget)

    def _dfs(self, r, left: int, budget: int):
        first = next(((i, j) for i, row in enumerate(r) for j, x in enumerate(row) if x), None)
        if first is None:
            return []
        if left == 0 or _l1(itertools.chain.from_iterable(r)) > budget:
            return None
        rk = _rank(r)
        if rk > left or 4 * rk > budget:
            return None
        key = (r, left, budget)
        if key in self.failed:
            return None
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise SearchBudgetExceeded(f"node limit {self.node_limit} reached")
        for cost, u, v in self.cover[first]:
            if cost > budget - 4 * (rk - 1):
                break
            nr = tuple(tuple(x - u[i] * v[j] for j, x in enumerate(row)) for i, row in enumerate(r))
            sub = self._dfs(nr, left - 1, budget - cost)
            if sub is not None:
                return [(u, v)] + sub
        self.failed.add(key)
        return None


def decomposition_lower_bound_search(n: int, j_max: int, bound: int,
                                     node_limit: int = 2_000_000) -> IPSearchResult:
    """Least Σ_j |m_j|₁ |m'_j|₁ over at most J_max pairs of integer 0-cycles on N
    points with Σ_j m_j m'_jᵀ equal to the slice matrix.

    Budgets are tried in increasing multiples of 4 (each factor of a nonzero
    0-cycle has even mass at least 2), so the first feasible budget is the
    exact minimum over the bounded search space.
    """
    if n < 3 or j_max < 1 or bound < 1:
        raise ValueError("need N ≥ 3, J_max ≥ 1 and B ≥ 1")
    search = _Search(n, j_max, bound, node_limit)
    target = slice_target(n)
    parity_ok = all(_l1(u) % 2 == 0 for u in search.vectors)
    largest = j_max * (bound * n) ** 2
    exhausted = []
    for budget in range(4, largest + 1, 4):
        try:
            found = search.run(target, budget)
        except SearchBudgetExceeded as exc:
            raise SearchBudgetExceeded(
                f"{exc}; minimum proven ≥ {budget} (budgets up to {budget - 4} infeasible)") from None
        if found is not None:
            cost = sum(_l1(u) * _l1(v) for u, v in found)
            parity_ok = parity_ok and all(_l1(u) % 2 == 0 and _l1(v) % 2 == 0 for u, v in found)
            return IPSearchResult(n, j_max, bound, cost, found, parity_ok, search.nodes, exhausted)
        exhausted.append(budget)
    return IPSearchResult(n, j_max, bound, None, [], parity_ok, search.nodes, exhausted)


# ---------------------------------------------------------------------------
# hyperplane probe


@dataclass(frozen=True)
class ProbeRow:
    level: Fraction
    slice_zero: bool
    boundary_additive: bool

    def to_json(self) -> dict:
        return {"level": fmt_rational(self.level), "slice_zero": self.slice_zero,
                "boundary_additive": self.boundary_additive}


def hyperplane_split_probe(c: Chain, axis: int, levels: Sequence[RationalLike]) -> list[ProbeRow]:
    """Per level: does the hyperplane section vanish, and does cutting there add no boundary mass?"""
    whole = c.boundary().true_mass()
    rows = []
    for level in levels:
        level = to_rational(level)
        section = c.section(axis, level)  # raises NonGenericLevel on a vertex
        upper = c.restrict_halfspace(axis, level, ">").boundary().true_mass()
        lower = c.restrict_halfspace(axis, level, "<").boundary().true_mass()
        rows.append(ProbeRow(level, section.is_zero(), upper + lower == whole))
    return rows


__all__ = [
    "StaircaseSpec", "build_staircase", "staircase_boundary_growth", "staircase_ordinates",
    "staircase_endpoint", "atom_weight", "dyadic_depth", "GrowthRow",
    "ThetaGraphSpec", "default_theta_spec", "DEFAULT_SPECS", "build_counterexample",
    "counterexample_chain", "CounterexampleReport", "segment_intersection", "path_length",
    "generic_slice_mass", "decomposition_lower_bound_search", "IPSearchResult", "slice_target",
    "zero_sum_vectors", "hyperplane_split_probe", "ProbeRow",
]
