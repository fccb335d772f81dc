"""Exact rational simplices: volumes, Pluecker coordinates, slicing and clipping.

A simplex is an ordered tuple of vertices; the order is the orientation. Clipping
and slicing work in barycentric coordinates of the parent simplex: every output
vertex is a rational convex combination of the parent's vertices, the output
polytope is triangulated by a pulling triangulation, and orientations are read
off determinants of barycentric matrices.

Axes are 0-based in the Python API.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateCell, NonGenericLevel, ZeroDimensional
from .exact import RadicalSum, RationalLike, det, fmt_rational, rank, rref, to_rational

Point = tuple[Fraction, ...]
Verts = tuple[Point, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def point(coords: Iterable[RationalLike]) -> Point:
    return tuple(to_rational(c) for c in coords)


def edge_matrix(verts: Sequence[Point]) -> list[list[Fraction]]:
    v0 = verts[0]
    return [[a - b for a, b in zip(v, v0)] for v in verts[1:]]


def affine_rank(pts: Sequence[Sequence[Fraction]]) -> int:
    if len(pts) <= 1:
        return 0
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]])


def gram(verts: Sequence[Point]) -> list[list[Fraction]]:
    e = edge_matrix(verts)
    return [[sum((x * y for x, y in zip(a, b)), ZERO) for b in e] for a in e]


def squared_volume(verts: Sequence[Point]) -> Fraction:
    k = len(verts) - 1
    return det(gram(verts)) / (math.factorial(k) ** 2)


def permutation_parity(seq: Sequence) -> int:
    """+1 for an even rearrangement into sorted order, -1 for odd."""
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def canonical(verts: Sequence[Point]) -> tuple[Verts, int]:
    """Sorted vertex tuple and the parity of the sorting permutation."""
    return tuple(sorted(verts)), permutation_parity(verts)


def pluecker(verts: Sequence[Point]) -> dict[tuple[int, ...], Fraction]:
    """Nonzero k x k minors of the edge matrix, keyed by 0-based coordinate sets."""
    k = len(verts) - 1
    n = len(verts[0])
    if k == 0:
        return {(): ONE}
    e = edge_matrix(verts)
    out: dict[tuple[int, ...], Fraction] = {}
    for gamma in itertools.combinations(range(n), k):
        m = det([[row[c] for c in gamma] for row in e])
        if m:
            out[gamma] = m
    return out


def orientation_minor(verts: Sequence[Point]) -> tuple[tuple[int, ...], Fraction]:
    """First coordinate set with a nonzero minor, and that minor."""
    k = len(verts) - 1
    if k == 0:
        return (), ONE
    e = edge_matrix(verts)
    for gamma in itertools.combinations(range(len(verts[0])), k):
        m = det([[row[c] for c in gamma] for row in e])
        if m:
            return gamma, m
    raise DegenerateCell("degenerate simplex")


def minor(verts: Sequence[Point], gamma: Sequence[int]) -> Fraction:
    if len(verts) == 1:
        return ONE
    e = edge_matrix(verts)
    return det([[row[c] for c in gamma] for row in e])


@dataclass(frozen=True)
class Volume:
    squared: Fraction

    @property
    def exact(self) -> RadicalSum:
        return RadicalSum.sqrt(self.squared)

    def interval(self, width: RationalLike = Fraction(1, 10**12)):
        return self.exact.interval(width)


@dataclass(frozen=True, order=True)
class SimplexCell:
    vertices: Verts

    def __post_init__(self) -> None:
        verts = tuple(point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise DegenerateCell("a simplex needs at least one vertex")
        n = len(verts[0])
        if any(len(v) != n for v in verts):
            raise ValueError("vertices of differing dimension")
        if len(verts) - 1 > n or affine_rank(verts) != len(verts) - 1:
            raise DegenerateCell(f"vertices are not affinely independent: {verts}")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def canonical(self) -> tuple[SimplexCell, int]:
        verts, sign = canonical(self.vertices)
        return _trusted(verts), sign

    def negated(self) -> SimplexCell:
        v = self.vertices
        if len(v) < 2:
            raise ZeroDimensional("a point cannot be reoriented by reordering")
        return _trusted((v[1], v[0]) + v[2:])

    def to_json(self) -> list:
        return [[fmt_rational(c) for c in v] for v in self.vertices]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> SimplexCell:
        return cls(tuple(point(v) for v in data))


def _trusted(verts: Verts) -> SimplexCell:
    """Build without re-validating (vertices known to be independent)."""
    cell = object.__new__(SimplexCell)
    object.__setattr__(cell, "vertices", verts)
    return cell


def boundary_faces(s: SimplexCell) -> list[tuple[SimplexCell, int]]:
    if s.dim < 1:
        raise ZeroDimensional("points have no faces")
    v = s.vertices
    return [(_trusted(v[:j] + v[j + 1:]), 1 if j % 2 == 0 else -1) for j in range(len(v))]


def volume(s: SimplexCell) -> Volume:
    return Volume(squared_volume(s.vertices))


# ---------------------------------------------------------------------------
# barycentric machinery


def _pulling(vals: list[list[Fraction]], pts: list[tuple[Fraction, ...]],
             idx: tuple[int, ...], d: int) -> list[tuple[int, ...]]:
    """Pulling triangulation of conv(pts[idx]) of dimension d.

    ``vals[f][i]`` is the value at point i of a facet functional f that is
    nonnegative on the polytope; every facet must be the zero set of some f.
    """
    if len(idx) == d + 1:
        return [idx]
    apex = idx[0]
    out: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for fv in vals:
        if fv[apex] == 0:
            continue
        face = tuple(i for i in idx if fv[i] == 0)
        if len(face) < d or face in seen:
            continue
        seen.add(face)
        if affine_rank([pts[i] for i in face]) != d - 1:
            continue
        for simplex in _pulling(vals, pts, face, d - 1):
            out.append((apex,) + simplex)
    return out


def _lam_to_point(lam: Sequence[Fraction], verts: Sequence[Point]) -> Point:
    n = len(verts[0])
    return tuple(sum((l * v[c] for l, v in zip(lam, verts) if l), ZERO) for c in range(n))


def _crossing(k1: int, hp: Fraction, q: int, hq: Fraction, size: int) -> tuple[Fraction, ...]:
    lam = [ZERO] * size
    lam[k1] = hq / (hq - hp)
    lam[q] = -hp / (hq - hp)
    return tuple(lam)


def clip_values(verts: Sequence[Point], h: Sequence[Fraction]) -> list[tuple[Verts, int]]:
    """Triangulate simplex ∩ {h > 0} where h is affine with vertex values ``h``.

    Output pieces carry the parent's orientation (sign always +1).
    """
    k = len(verts) - 1
    if all(x > 0 for x in h) or (k > 0 and all(x >= 0 for x in h)):
        return [(tuple(verts), 1)]
    if not any(x > 0 for x in h):
        return []
    size = k + 1
    pts: list[tuple[Fraction, ...]] = []
    for j, x in enumerate(h):
        if x >= 0:
            pts.append(tuple(ONE if i == j else ZERO for i in range(size)))
    for p, q in itertools.product(range(size), repeat=2):
        if h[p] < 0 < h[q]:
            pts.append(_crossing(p, h[p], q, h[q], size))
    pts.sort(reverse=True)
    funcs = [[pt[j] for pt in pts] for j in range(size)]
    funcs.append([sum((l * x for l, x in zip(pt, h)), ZERO) for pt in pts])
    out = []
    for simplex in _pulling(funcs, pts, tuple(range(len(pts))), k):
        lam = [pts[i] for i in simplex]
        if det(lam) < 0:
            lam[0], lam[1] = lam[1], lam[0]
        out.append((tuple(_lam_to_point(l, verts) for l in lam), 1))
    return out


def section_values(verts: Sequence[Point], h: Sequence[Fraction]) -> list[tuple[Verts, int]]:
    """Triangulate simplex ∩ {h = 0}, oriented so that ξ_q ∧ ∇h is positive on ξ_p."""
    k = len(verts) - 1
    if k < 1:
        raise ZeroDimensional("cannot section a point")
    if any(x == 0 for x in h):
        raise NonGenericLevel("hyperplane passes through a vertex")
    if all(x > 0 for x in h) or all(x < 0 for x in h):
        return []
    size = k + 1
    pts = []
    for p, q in itertools.product(range(size), repeat=2):
        if h[p] < 0 < h[q]:
            pts.append(_crossing(p, h[p], q, h[q], size))
    pts.sort(reverse=True)
    up_q = next(j for j in range(size) if h[j] > 0)
    up_p = next(j for j in range(size) if h[j] < 0)
    u = tuple(ONE if i == up_q else (-ONE if i == up_p else ZERO) for i in range(size))
    funcs = [[pt[j] for pt in pts] for j in range(size)]
    out = []
    for simplex in _pulling(funcs, pts, tuple(range(len(pts))), k - 1):
        lam = [pts[i] for i in simplex]
        w0 = lam[0]
        rows = [w0] + [tuple(a - b for a, b in zip(w, w0)) for w in lam[1:]] + [u]
        sign = 1 if det(rows) > 0 else -1
        if sign < 0 and len(lam) >= 2:
            lam[0], lam[1] = lam[1], lam[0]
            sign = 1
        out.append((tuple(_lam_to_point(l, verts) for l in lam), sign))
    return out


def axis_values(verts: Sequence[Point], axis: int, level: Fraction) -> list[Fraction]:
    return [v[axis] - level for v in verts]


def slice_by_hyperplane(s: SimplexCell, axis: int, level: RationalLike) -> list[tuple[SimplexCell, int]]:
    """Intersection with {x_axis = level}, in place (coordinates not projected)."""
    if s.dim < 1:
        raise ZeroDimensional("cannot slice a point")
    level = to_rational(level)
    return [(_trusted(v), sg) for v, sg in section_values(s.vertices, axis_values(s.vertices, axis, level))]


def clip_halfspace(s: SimplexCell, axis: int, level: RationalLike, side: str) -> list[tuple[SimplexCell, int]]:
    level = to_rational(level)
    h = axis_values(s.vertices, axis, level)
    if side == "<":
        h = [-x for x in h]
    elif side != ">":
        raise ValueError("side must be '>' or '<'")
    return [(_trusted(v), sg) for v, sg in clip_values(s.vertices, h)]


# ---------------------------------------------------------------------------
# planes and products


def plane_key(verts: Sequence[Point]) -> tuple:
    """Canonical key of the affine hull."""
    v0 = verts[0]
    if len(verts) == 1:
        return ((), v0)
    rows, piv = rref(edge_matrix(verts))
    offset = list(v0)
    for row, c in zip(rows, piv):
        f = offset[c]
        if f:
            offset = [o - f * r for o, r in zip(offset, row)]
    return (tuple(tuple(r) for r in rows), tuple(offset))


def staircase(a: int, b: int) -> list[tuple[tuple[int, int], ...]]:
    """Lattice paths (0,0) -> (a,b); each is a simplex of Δ^a × Δ^b."""
    paths = []
    for ups in itertools.combinations(range(a + b), a):
        i = j = 0
        path = [(0, 0)]
        for t in range(a + b):
            if t in ups:
                i += 1
            else:
                j += 1
            path.append((i, j))
        paths.append(tuple(path))
    return paths


def product_simplices(va: Sequence[Point], vb: Sequence[Point]) -> list[Verts]:
    """Staircase triangulation of conv(va) × conv(vb), each oriented as ξ_a ∧ ξ_b."""
    a, b = len(va) - 1, len(vb) - 1
    out = []
    for path in staircase(a, b):
        rows = []
        for i, j in path[1:]:
            rows.append([ONE if i == r + 1 else ZERO for r in range(a)]
                        + [ONE if j == r + 1 else ZERO for r in range(b)])
        verts = [tuple(va[i]) + tuple(vb[j]) for i, j in path]
        if a + b > 0 and det(rows) < 0:
            verts[0], verts[1] = verts[1], verts[0]
        out.append(tuple(verts))
    return out


def centroid(verts: Sequence[Point]) -> Point:
    n = len(verts)
    return tuple(sum(c, ZERO) / n for c in zip(*verts))


def split_factors(verts: Sequence[Point], n1: int) -> tuple[list[Point], list[Point]]:
    """Distinct first-factor and second-factor projections of the vertices."""
    first = sorted({v[:n1] for v in verts})
    second = sorted({v[n1:] for v in verts})
    return first, second
