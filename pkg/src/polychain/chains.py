"""Polyhedral G-chains as canonical sums of oriented simplices.

Every stored cell is a sorted vertex tuple; the sign of the sorting permutation
is folded into the coefficient, so ``g p + g(-p) = 0`` and merging of identical
cells hold structurally. Subdivision is not normalized on construction;
:meth:`Chain.refine` computes a non-overlapping representative, which makes
the true mass and equality modulo subdivision exact.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .coeff import CoefficientGroup, CoefficientValue
from .errors import DimensionMismatch, GroupMismatch, NonGenericBox
from .exact import RadicalSum, RationalLike, fmt_rational, rref, to_rational
from .geometry import (
    ONE,
    ZERO,
    Point,
    SimplexCell,
    Verts,
    affine_rank,
    axis_values,
    centroid,
    clip_values,
    minor,
    orientation_minor,
    permutation_parity,
    plane_key,
    point,
    product_simplices,
    section_values,
    squared_volume,
)

Interval1D = tuple[Fraction | None, Fraction | None]


def _add_term(terms: dict[Verts, Fraction], verts: Sequence[Point], coeff: Fraction,
              group: CoefficientGroup) -> None:
    key = tuple(sorted(verts))
    if permutation_parity(verts) < 0:
        coeff = -coeff
    value = group.reduce(terms.get(key, ZERO) + coeff)
    if value:
        terms[key] = value
    else:
        terms.pop(key, None)


@dataclass
class MassReport:
    terms: list[tuple[Fraction, Fraction]]  # (norm of coefficient, squared volume)
    total: RadicalSum
    certified: bool | None = None  # None: overlap not checked
    overlaps: list[tuple[int, int]] = field(default_factory=list)

    def interval(self, width: RationalLike = Fraction(1, 10**12)):
        return self.total.interval(width)

    def to_json(self) -> dict:
        out = {"mass": self.total.to_json(), "cells": len(self.terms)}
        if self.certified is not None:
            out["certified"] = self.certified
            out["status"] = "exact" if self.certified else "possible overestimate"
        return out


class Chain:
    __slots__ = ("ambient_dim", "dim", "group", "terms")

    def __init__(self, ambient_dim: int, dim: int, group: CoefficientGroup,
                 terms: Iterable[tuple[Sequence[Point], RationalLike]] = ()):
        self.ambient_dim = ambient_dim
        self.dim = dim
        self.group = group
        self.terms: dict[Verts, Fraction] = {}
        for verts, coeff in terms:
            _add_term(self.terms, verts, to_rational(coeff), group)

    @classmethod
    def from_cells(cls, cells: Iterable[tuple[SimplexCell | Sequence, RationalLike]],
                   group: CoefficientGroup | None = None) -> Chain:
        """Validated constructor; infers ambient and cell dimension."""
        group = group or CoefficientGroup.integers()
        checked = []
        for cell, coeff in cells:
            if not isinstance(cell, SimplexCell):
                cell = SimplexCell(tuple(point(v) for v in cell))
            checked.append((cell, coeff))
        if not checked:
            raise ValueError("cannot infer dimensions of an empty chain; use Chain.zero")
        n, k = checked[0][0].ambient_dim, checked[0][0].dim
        for cell, _ in checked:
            if (cell.ambient_dim, cell.dim) != (n, k):
                raise DimensionMismatch("cells of mixed dimension")
        return cls(n, k, group, ((c.vertices, g) for c, g in checked))

    @classmethod
    def zero(cls, ambient_dim: int, dim: int, group: CoefficientGroup | None = None) -> Chain:
        return cls(ambient_dim, dim, group or CoefficientGroup.integers())

    @classmethod
    def point(cls, coords: Sequence[RationalLike], coeff: RationalLike = 1,
              group: CoefficientGroup | None = None) -> Chain:
        p = point(coords)
        return cls(len(p), 0, group or CoefficientGroup.integers(), [((p,), coeff)])

    def _like(self, terms: Iterable[tuple[Sequence[Point], Fraction]] = (), dim: int | None = None,
              ambient_dim: int | None = None) -> Chain:
        return Chain(self.ambient_dim if ambient_dim is None else ambient_dim,
                     self.dim if dim is None else dim, self.group, terms)

    def _check(self, other: Chain) -> None:
        if self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")
        if (self.ambient_dim, self.dim) != (other.ambient_dim, other.dim):
            raise DimensionMismatch(
                f"({self.ambient_dim},{self.dim}) vs ({other.ambient_dim},{other.dim})")

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: Chain) -> Chain:
        self._check(other)
        out = self._like(self.terms.items())
        for verts, c in other.terms.items():
            _add_term(out.terms, verts, c, self.group)
        return out

    def __neg__(self) -> Chain:
        return self._like((v, -c) for v, c in self.terms.items())

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def scale(self, n: int) -> Chain:
        return self._like((v, n * c) for v, c in self.terms.items())

    def __rmul__(self, n: int) -> Chain:
        return self.scale(n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.group, self.ambient_dim, self.dim, self.terms) == (
            other.group, other.ambient_dim, other.dim, other.terms)

    def __hash__(self) -> int:
        return hash((self.group, self.ambient_dim, self.dim, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[SimplexCell, CoefficientValue]]:
        for verts, c in self.terms.items():
            yield SimplexCell(verts), CoefficientValue(self.group, c)

    def items(self) -> Iterable[tuple[Verts, Fraction]]:
        return self.terms.items()

    def __repr__(self) -> str:
        return f"Chain(n={self.ambient_dim}, k={self.dim}, {self.group}, {len(self.terms)} cells)"

    # -- boundary and mass -------------------------------------------------

    def boundary(self) -> Chain:
        if self.dim == 0:
            return self._like(dim=-1)
        out = self._like(dim=self.dim - 1)
        for verts, c in self.terms.items():
            for j in range(len(verts)):
                _add_term(out.terms, verts[:j] + verts[j + 1:], c if j % 2 == 0 else -c, self.group)
        return out

    def stored_mass(self) -> RadicalSum:
        return RadicalSum.sum(
            RadicalSum.sqrt(squared_volume(v)) * self.group.norm(c) for v, c in self.terms.items())

    def mass(self, certify_overlap: bool = False) -> MassReport:
        """Mass of the stored representation; certified when no two cells overlap."""
        terms = [(self.group.norm(c), squared_volume(v)) for v, c in self.terms.items()]
        total = RadicalSum.sum(RadicalSum.sqrt(sq) * nm for nm, sq in terms)
        report = MassReport(terms, total)
        if certify_overlap:
            report.overlaps = self.overlapping_pairs()
            report.certified = not report.overlaps
        return report

    def true_mass(self) -> RadicalSum:
        """M(P): the stored mass of the refined (non-overlapping) representative."""
        return self.refine().stored_mass()

    def overlapping_pairs(self) -> list[tuple[int, int]]:
        """Index pairs (in iteration order) of cells sharing a k-dimensional piece."""
        keys = list(self.terms)
        out = []
        for group in _plane_groups(keys).values():
            if len(group) < 2:
                continue
            gamma, _ = orientation_minor(keys[group[0]])
            boxes = {i: _bbox(keys[i]) for i in group}
            for i, j in itertools.combinations(group, 2):
                if _boxes_meet(boxes[i], boxes[j]) and _simplices_overlap(keys[i], keys[j], gamma):
                    out.append((i, j))
        return out

    def is_certified(self) -> bool:
        return not self.overlapping_pairs()

    def refine(self) -> Chain:
        """Equivalent chain (modulo subdivision) whose cells pairwise do not overlap."""
        if self.dim == 0:
            return self
        keys = list(self.terms)
        out = self._like()
        for group in _plane_groups(keys).values():
            cells = [(keys[i], self.terms[keys[i]]) for i in group]
            for verts, c in _refine_plane(cells, self.group):
                _add_term(out.terms, verts, c, self.group)
        return out

    def is_zero(self) -> bool:
        """Zero modulo subdivision (exact).

        A compactly supported chain inside one affine k-plane is zero iff its
        boundary is, so each plane group is tested recursively on its boundary.
        """
        if self.dim == 0:
            return not self
        keys = list(self.terms)
        for group in _plane_groups(keys).values():
            sub = self._like((keys[i], self.terms[keys[i]]) for i in group)
            if not sub.boundary().is_zero():
                return False
        return True

    def equivalent(self, other: Chain) -> bool:
        return (self - other).is_zero()

    # -- restriction, slicing, pushforward ---------------------------------

    def restrict_halfspace(self, axis: int, level: RationalLike, side: str) -> Chain:
        level = to_rational(level)
        out = self._like()
        for verts, c in self.terms.items():
            h = axis_values(verts, axis, level)
            if self.dim == 0 and h[0] == 0:
                raise NonGenericBox(f"point on the face x_{axis} = {level}")
            if self.dim > 0 and all(x == 0 for x in h):
                raise NonGenericBox(f"cell lies in the face x_{axis} = {level}")
            if side == "<":
                h = [-x for x in h]
            elif side != ">":
                raise ValueError("side must be '>' or '<'")
            for piece, _ in clip_values(verts, h):
                _add_term(out.terms, piece, c, self.group)
        return out

    def restrict_box(self, box: Sequence[Interval1D]) -> Chain:
        """Restriction to an open box; ``None`` bounds are infinite."""
        if len(box) != self.ambient_dim:
            raise DimensionMismatch("box has the wrong number of axes")
        out = self
        for axis, (lo, hi) in enumerate(box):
            if lo is not None:
                out = out.restrict_halfspace(axis, lo, ">")
            if hi is not None:
                out = out.restrict_halfspace(axis, hi, "<")
        return out

    def section(self, axis: int, level: RationalLike) -> Chain:
        """A ∩ {x_axis = level} in place, oriented so that ξ_q ∧ e_axis is positive on ξ_p."""
        level = to_rational(level)
        out = self._like(dim=self.dim - 1)
        if self.dim == 0:
            return out
        for verts, c in self.terms.items():
            for piece, sg in section_values(verts, axis_values(verts, axis, level)):
                _add_term(out.terms, piece, c if sg > 0 else -c, self.group)
        return out

    def zero_coordinates(self, axes: Iterable[int]) -> Chain:
        """Orthogonal projection onto the coordinate subspace {x_i = 0, i in axes}."""
        axes = set(axes)
        out = self._like()
        for verts, c in self.terms.items():
            image = [tuple(ZERO if i in axes else x for i, x in enumerate(v)) for v in verts]
            if len(set(image)) == len(image) and affine_rank(image) == self.dim:
                _add_term(out.terms, image, c, self.group)
        return out

    def push_forward_projection(self, target_axes: Sequence[int]) -> Chain:
        """Pushforward by x -> (x_i)_{i in target_axes}; degenerate images are dropped."""
        target_axes = list(target_axes)
        out = self._like(ambient_dim=len(target_axes))
        for verts, c in self.terms.items():
            image = [tuple(v[i] for i in target_axes) for v in verts]
            if len(set(image)) == len(image) and affine_rank(image) == self.dim:
                _add_term(out.terms, image, c, self.group)
        return out

    def translate(self, offset: Sequence[RationalLike]) -> Chain:
        off = point(offset)
        return self._like(
            (tuple(tuple(a + b for a, b in zip(v, off)) for v in verts), c)
            for verts, c in self.terms.items())

    def vertex_coordinates(self, axis: int) -> set[Fraction]:
        return {v[axis] for verts in self.terms for v in verts}

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "version": 1,
            "ambient": self.ambient_dim,
            "dim": self.dim,
            "group": self.group.to_json(),
            "cells": [
                {"vertices": [[fmt_rational(x) for x in v] for v in verts], "coeff": fmt_rational(c)}
                for verts, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> Chain:
        if data.get("version", 1) != 1:
            raise ValueError("unsupported chain version")
        group = CoefficientGroup.from_json(data["group"])
        n, k = int(data["ambient"]), int(data["dim"])
        terms = []
        for cell in data["cells"]:
            sc = SimplexCell.from_json(cell["vertices"])
            if (sc.ambient_dim, sc.dim) != (n, k):
                raise DimensionMismatch("cell does not match declared dimensions")
            coeff = cell["coeff"]
            if isinstance(coeff, dict):
                cv = CoefficientValue.from_json(coeff)
                if cv.group != group:
                    raise GroupMismatch("cell coefficient group differs from chain group")
                coeff = cv.value
            terms.append((sc.vertices, to_rational(coeff)))
        return cls(n, k, group, terms)


def boundary(c: Chain) -> Chain:
    return c.boundary()


def mass(c: Chain, certify_overlap: bool = False) -> MassReport:
    return c.mass(certify_overlap)


def restrict_box(c: Chain, box: Sequence[Interval1D]) -> Chain:
    return c.restrict_box(box)


def push_forward_projection(c: Chain, target_axes: Sequence[int]) -> Chain:
    return c.push_forward_projection(target_axes)


def cartesian_product(a: Chain, b: Chain) -> Chain:
    """a × b with a over Z; coefficients via the Z-action on b's group."""
    if a.group != CoefficientGroup.integers():
        raise GroupMismatch("the first factor must carry integer coefficients")
    out = Chain(a.ambient_dim + b.ambient_dim, a.dim + b.dim, b.group)
    for va, ca in a.terms.items():
        for vb, cb in b.terms.items():
            coeff = b.group.scale(int(ca), cb)
            if not coeff:
                continue
            for verts in product_simplices(va, vb):
                _add_term(out.terms, verts, coeff, b.group)
    return out


# ---------------------------------------------------------------------------
# overlap and refinement inside one affine plane


def _plane_groups(keys: Sequence[Verts]) -> dict[tuple, list[int]]:
    groups: dict[tuple, list[int]] = defaultdict(list)
    for i, verts in enumerate(keys):
        groups[plane_key(verts)].append(i)
    return groups


def _bbox(verts: Verts) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    return tuple(map(min, zip(*verts))), tuple(map(max, zip(*verts)))


def _boxes_meet(a, b) -> bool:
    # closed test: cells in a lower-dimensional plane have flat boxes
    return all(alo <= bhi and blo <= ahi for alo, ahi, blo, bhi in zip(a[0], a[1], b[0], b[1]))


def _bary_functionals(verts: Verts, gamma: Sequence[int]) -> list[tuple[Fraction, ...]]:
    """Rows f_j with λ_j(y) = f_j[0] + Σ f_j[t+1] y_t, for y the gamma-projection."""
    size = len(verts)
    m = [[ONE] * size] + [[v[g] for v in verts] for g in gamma]
    aug = [row + [ONE if i == r else ZERO for i in range(size)] for r, row in enumerate(m)]
    red, _ = rref(aug)
    inv = [row[size:] for row in red]
    # inv[j] maps (1, y) to λ_j
    return [tuple(inv[j]) for j in range(size)]


def _eval(f: Sequence[Fraction], p: Point, gamma: Sequence[int]) -> Fraction:
    return f[0] + sum((a * p[g] for a, g in zip(f[1:], gamma)), ZERO)


def _simplices_overlap(a: Verts, b: Verts, gamma: Sequence[int]) -> bool:
    pieces = [a]
    for f in _bary_functionals(b, gamma):
        nxt = []
        for piece in pieces:
            nxt.extend(v for v, _ in clip_values(piece, [_eval(f, p, gamma) for p in piece]))
        pieces = nxt
        if not pieces:
            return False
    return True


def _normalize(f: tuple[Fraction, ...]) -> tuple[tuple[Fraction, ...], int]:
    lead = next(x for x in f[1:] if x)
    scale = abs(lead)
    sign = 1 if lead > 0 else -1
    return tuple(x / (sign * scale) for x in f), sign


def _components(boxes: list) -> list[list[int]]:
    parent = list(range(len(boxes)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(boxes)), 2):
        if _boxes_meet(boxes[i], boxes[j]):
            parent[find(i)] = find(j)
    comps: dict[int, list[int]] = defaultdict(list)
    for i in range(len(boxes)):
        comps[find(i)].append(i)
    return list(comps.values())


def _refine_plane(cells: list[tuple[Verts, Fraction]], group: CoefficientGroup) -> list[tuple[Verts, Fraction]]:
    if len(cells) == 1:
        return cells
    gamma, _ = orientation_minor(cells[0][0])
    boxes = [_bbox(v) for v, _ in cells]
    out: list[tuple[Verts, Fraction]] = []
    for comp in _components(boxes):
        if len(comp) == 1:
            out.append(cells[comp[0]])
            continue
        out.extend(_refine_component([cells[i] for i in comp], gamma, group))
    return out


def _refine_component(cells: list[tuple[Verts, Fraction]], gamma: Sequence[int],
                      group: CoefficientGroup) -> list[tuple[Verts, Fraction]]:
    """Cut each cell by the facets of every other cell whose box its pieces meet.

    Every resulting piece lies inside or outside each neighbouring cell, so its
    net coefficient is the sum over the neighbours containing its centroid, and
    the piece is emitted only by the lowest-index cell covering it.
    """
    funcs = [_bary_functionals(v, gamma) for v, _ in cells]
    orient = [1 if minor(v, gamma) > 0 else -1 for v, _ in cells]
    boxes = [_bbox(v) for v, _ in cells]
    out = []
    for idx, (verts, _) in enumerate(cells):
        near = [j for j in range(len(cells)) if j == idx or _boxes_meet(boxes[idx], boxes[j])]
        pieces = [verts]
        for j in near:
            if j == idx:
                continue
            for f in funcs[j]:
                nxt = []
                for piece in pieces:
                    pv = [_eval(f, p, gamma) for p in piece]
                    if (any(v > 0 for v in pv) and any(v < 0 for v in pv)
                            and _boxes_meet(_bbox(piece), boxes[j])):
                        nxt.extend(v for v, _ in clip_values(piece, pv))
                        nxt.extend(v for v, _ in clip_values(piece, [-v for v in pv]))
                    else:
                        nxt.append(piece)
                pieces = nxt
        for piece in pieces:
            ctr = centroid(piece)
            inside = [j for j in near if all(_eval(f, ctr, gamma) > 0 for f in funcs[j])]
            if inside[0] != idx:
                continue
            total = group.reduce(sum((cells[j][1] * orient[j] for j in inside), ZERO))
            if total:
                out.append((piece, total * orient[idx]))
    return out
