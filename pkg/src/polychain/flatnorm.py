"""Cubical complexes, grid chains, and the flat / tensor flat norm programs.

A k-cell of the grid is ``(gamma, idx)``: ``gamma`` is the sorted tuple of axes
it extends along and ``idx`` the integer lower corner. It is oriented by
``e_gamma``. Removing the axis at position j of gamma gives the upper face with
sign ``(-1)^j`` and the lower face with sign ``-(-1)^j``. Splitting these terms
by whether the removed axis is among the first ``n1`` coordinates gives the
partial boundaries B1 and B2; the ``(-1)^{k1}`` of the second partial boundary
is already contained in the position sign.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chains import Chain, _add_term
from .coeff import CoefficientGroup
from .errors import DimensionMismatch, NotGridAligned, TypeMismatch
from .exact import RadicalSum, RationalLike, fmt_rational, to_rational
from .geometry import ONE, ZERO, Point, orientation_minor, pluecker, point, product_simplices
from .lp import L1Problem, LPSolution, solve_l1, vertex_enumeration_l1
from .slicing import TypeIndex, types_of_dim

Cell = tuple[tuple[int, ...], tuple[int, ...]]


class CubicalComplex:
    def __init__(self, origin: Sequence[RationalLike], spacing: RationalLike | Sequence[RationalLike],
                 extents: Sequence[int], n1: int | None = None):
        self.origin: Point = point(origin)
        self.n = len(self.origin)
        if isinstance(spacing, (list, tuple)):
            self.spacing = tuple(to_rational(h) for h in spacing)
        else:
            self.spacing = (to_rational(spacing),) * self.n
        self.extents = tuple(int(e) for e in extents)
        if len(self.spacing) != self.n or len(self.extents) != self.n:
            raise DimensionMismatch("origin, spacing and extents disagree on dimension")
        if any(h <= 0 for h in self.spacing) or any(e < 0 for e in self.extents):
            raise ValueError("spacing must be positive and extents nonnegative")
        self.n1 = n1
        self._cells: dict[int, list[Cell]] = {}
        self._index: dict[int, dict[Cell, int]] = {}

    def __repr__(self) -> str:
        return f"CubicalComplex(origin={self.origin}, spacing={self.spacing}, extents={self.extents})"

    def cells(self, k: int) -> list[Cell]:
        if k not in self._cells:
            out: list[Cell] = []
            if 0 <= k <= self.n:
                for gamma in itertools.combinations(range(self.n), k):
                    ranges = [range(self.extents[a] if a in gamma else self.extents[a] + 1)
                              for a in range(self.n)]
                    out.extend((gamma, idx) for idx in itertools.product(*ranges))
            self._cells[k] = out
            self._index[k] = {c: i for i, c in enumerate(out)}
        return self._cells[k]

    def index(self, k: int) -> dict[Cell, int]:
        self.cells(k)
        return self._index[k]

    def count(self) -> int:
        return sum(len(self.cells(k)) for k in range(self.n + 1))

    def volume(self, cell: Cell) -> Fraction:
        v = ONE
        for a in cell[0]:
            v *= self.spacing[a]
        return v

    def cell_type(self, cell: Cell) -> TypeIndex:
        if self.n1 is None:
            raise TypeMismatch("complex has no split")
        r1 = sum(1 for a in cell[0] if a < self.n1)
        return TypeIndex(r1, len(cell[0]) - r1)

    def faces(self, cell: Cell, part: int | None = None) -> list[tuple[Cell, int]]:
        gamma, idx = cell
        out = []
        for j, a in enumerate(gamma):
            if part == 1 and not a < self.n1:
                continue
            if part == 2 and a < self.n1:
                continue
            rest = gamma[:j] + gamma[j + 1:]
            up = idx[:a] + (idx[a] + 1,) + idx[a + 1:]
            s = 1 if j % 2 == 0 else -1
            out.append(((rest, up), s))
            out.append(((rest, idx), -s))
        return out

    def boundary_columns(self, k: int, part: int | None = None) -> list[dict[int, Fraction]]:
        """Columns of B_k (or B1_k / B2_k) indexed by k-cells, rows by (k-1)-cells."""
        rows = self.index(k - 1)
        cols = []
        for cell in self.cells(k):
            col: dict[int, Fraction] = {}
            for face, s in self.faces(cell, part):
                r = rows[face]
                col[r] = col.get(r, ZERO) + s
            cols.append({r: v for r, v in col.items() if v})
        return cols

    def corner(self, idx: Sequence[int]) -> Point:
        return tuple(o + h * i for o, h, i in zip(self.origin, self.spacing, idx))

    def cell_simplices(self, cell: Cell) -> list[tuple[Point, ...]]:
        """Triangulation of the cell oriented by e_gamma."""
        gamma, idx = cell
        base = self.corner(idx)
        local: list[tuple[Point, ...]] = [((),)]
        for _ in gamma:
            local = [tuple(s) for piece in local for s in product_simplices(piece, ((ZERO,), (ONE,)))]
        out = []
        for verts in local:
            pts = []
            for v in verts:
                p = list(base)
                for a, t in zip(gamma, v):
                    p[a] += t * self.spacing[a]
                pts.append(tuple(p))
            out.append(tuple(pts))
        return out

    def padded(self, pad: int) -> CubicalComplex:
        origin = tuple(o - pad * h for o, h in zip(self.origin, self.spacing))
        return CubicalComplex(origin, self.spacing, tuple(e + 2 * pad for e in self.extents), self.n1)

    def shift_cell(self, cell: Cell, pad: int) -> Cell:
        return cell[0], tuple(i + pad for i in cell[1])

    def on_boundary(self, cell: Cell) -> bool:
        gamma, idx = cell
        for a in range(self.n):
            top = self.extents[a] - 1 if a in gamma else self.extents[a]
            if idx[a] == 0 or idx[a] == top:
                return True
        return False

    def to_json(self) -> dict:
        return {"origin": [fmt_rational(x) for x in self.origin],
                "spacing": [fmt_rational(h) for h in self.spacing],
                "extents": list(self.extents), "n1": self.n1}

    @classmethod
    def parse(cls, text: str, n1: int | None = None) -> CubicalComplex:
        """'origin;h;extents' with comma-separated components, e.g. '-1,-1;1;3,3'."""
        parts = text.split(";")
        if len(parts) != 3:
            raise ValueError("complex must look like 'o1,o2,...;h;e1,e2,...'")
        origin = [to_rational(x) for x in parts[0].split(",")]
        hs = [to_rational(x) for x in parts[1].split(",")]
        extents = [int(x) for x in parts[2].split(",")]
        spacing = hs[0] if len(hs) == 1 else hs
        return cls(origin, spacing, extents, n1)


@dataclass
class GridChain:
    complex: CubicalComplex
    dim: int
    coeffs: dict[Cell, Fraction] = field(default_factory=dict)
    group: CoefficientGroup = field(default_factory=CoefficientGroup.integers)

    def __post_init__(self) -> None:
        index = self.complex.index(self.dim)
        clean = {}
        for c, v in self.coeffs.items():
            if c not in index:
                raise NotGridAligned(f"cell {c} is outside the complex")
            v = to_rational(v)
            if v:
                clean[c] = v
        self.coeffs = clean

    def vector(self) -> list[Fraction]:
        return [self.coeffs.get(c, ZERO) for c in self.complex.cells(self.dim)]

    @classmethod
    def from_vector(cls, cx: CubicalComplex, k: int, vec: Sequence[Fraction],
                    group: CoefficientGroup | None = None) -> GridChain:
        cells = cx.cells(k)
        return cls(cx, k, {cells[i]: v for i, v in enumerate(vec) if v},
                   group or CoefficientGroup.integers())

    def mass(self) -> Fraction:
        return sum((abs(v) * self.complex.volume(c) for c, v in self.coeffs.items()), ZERO)

    def boundary(self, part: int | None = None) -> GridChain:
        out: dict[Cell, Fraction] = {}
        for c, v in self.coeffs.items():
            for face, s in self.complex.faces(c, part):
                out[face] = out.get(face, ZERO) + s * v
        return GridChain(self.complex, self.dim - 1, out, self.group)

    def to_chain(self) -> Chain:
        group = self.group if self.group.kind != "Z" or all(
            v.denominator == 1 for v in self.coeffs.values()) else CoefficientGroup.rationals()
        out = Chain(self.complex.n, self.dim, group)
        for c, v in self.coeffs.items():
            for verts in self.complex.cell_simplices(c):
                _add_term(out.terms, verts, v, group)
        return out

    def types(self) -> set[TypeIndex]:
        return {self.complex.cell_type(c) for c in self.coeffs}

    def on(self, cx: CubicalComplex, pad: int) -> GridChain:
        """The same chain in a complex padded by ``pad`` cells on every side."""
        return GridChain(cx, self.dim, {self.complex.shift_cell(c, pad): v for c, v in self.coeffs.items()},
                         self.group)

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "cells": [{"gamma": [a + 1 for a in g], "index": list(i), "coeff": fmt_rational(v)}
                          for (g, i), v in sorted(self.coeffs.items())]}


# ---------------------------------------------------------------------------
# rasterization


def _grid_coordinate(cx: CubicalComplex, axis: int, x: Fraction) -> Fraction:
    return (x - cx.origin[axis]) / cx.spacing[axis]


_PROBE_OFFSETS = [
    (Fraction(1, 3), Fraction(2, 7), Fraction(3, 11), Fraction(5, 13)),
    (Fraction(3, 5), Fraction(4, 9), Fraction(6, 17), Fraction(7, 19)),
    (Fraction(5, 8), Fraction(1, 6), Fraction(8, 11), Fraction(2, 9)),
]


def rasterize(c: Chain, cx: CubicalComplex, group: CoefficientGroup | None = None) -> GridChain:
    """Grid chain with the same embedding as c; NotGridAligned if there is none."""
    if c.ambient_dim != cx.n:
        raise DimensionMismatch("chain and complex live in different dimensions")
    group = group or c.group
    k = c.dim
    index = cx.index(k)
    if k == 0:
        coeffs: dict[Cell, Fraction] = {}
        for (v,), g in c.items():
            idx = []
            for a in range(cx.n):
                t = _grid_coordinate(cx, a, v[a])
                if t.denominator != 1:
                    raise NotGridAligned(f"point {v} is not a grid vertex")
                idx.append(int(t))
            cell = ((), tuple(idx))
            if cell not in index:
                raise NotGridAligned(f"point {v} is outside the complex")
            coeffs[cell] = coeffs.get(cell, ZERO) + g
        return GridChain(cx, 0, coeffs, group)
    from .chains import _bary_functionals, _eval

    cells = []
    for verts, g in c.items():
        pl = pluecker(verts)
        if len(pl) != 1:
            raise NotGridAligned(f"cell {verts} is not axis-parallel")
        (gamma, m), = pl.items()
        for a in range(cx.n):
            if a in gamma:
                continue
            t = _grid_coordinate(cx, a, verts[0][a])
            if t.denominator != 1:
                raise NotGridAligned(f"cell {verts} is off the grid lines")
        cells.append((verts, g, gamma, 1 if m > 0 else -1, _bary_functionals(verts, gamma)))
    for offsets in _PROBE_OFFSETS:
        coeffs = {}
        for verts, g, gamma, sign, funcs in cells:
            lo = {a: math.floor(_grid_coordinate(cx, a, min(v[a] for v in verts))) for a in gamma}
            hi = {a: math.ceil(_grid_coordinate(cx, a, max(v[a] for v in verts))) for a in gamma}
            fixed = {a: int(_grid_coordinate(cx, a, verts[0][a])) for a in range(cx.n) if a not in gamma}
            for cube in itertools.product(*(range(lo[a], hi[a]) for a in gamma)):
                idx = [0] * cx.n
                probe = [ZERO] * cx.n
                for a, i in fixed.items():
                    idx[a] = i
                    probe[a] = verts[0][a]
                for t, (a, i) in enumerate(zip(gamma, cube)):
                    idx[a] = i
                    probe[a] = cx.origin[a] + cx.spacing[a] * (i + offsets[t % len(offsets)])
                if all(_eval(f, probe, gamma) > 0 for f in funcs):
                    key = (gamma, tuple(idx))
                    coeffs[key] = coeffs.get(key, ZERO) + sign * g
        coeffs = {key: v for key, v in coeffs.items() if group.reduce(v)}
        if any(key not in index for key in coeffs):
            raise NotGridAligned("chain leaves the complex")
        grid = GridChain(cx, k, coeffs, group)
        if grid.to_chain().equivalent(Chain(c.ambient_dim, k, grid.to_chain().group, c.items())):
            return grid
    raise NotGridAligned("chain is not a sum of grid cells")


# ---------------------------------------------------------------------------
# the two norms


@dataclass
class LPResult:
    value: Fraction
    witnesses: dict[str, GridChain]
    dual: list[Fraction]
    method: str
    touches_boundary: bool
    status: str = "optimal"
    pad_value: Fraction | None = None

    @property
    def complex_too_small(self) -> bool:
        return self.touches_boundary or (self.pad_value is not None and self.pad_value != self.value)

    def to_json(self) -> dict:
        sol = LPSolution(self.value, [], self.dual, self.method)
        out = {
            "value": fmt_rational(self.value),
            "status": self.status,
            "method": self.method,
            "witnesses": {k: w.to_json() for k, w in self.witnesses.items()},
            "dual_certificate_hash": sol.certificate_hash(),
            "touches_boundary": self.touches_boundary,
        }
        if self.pad_value is not None:
            out["pad_value"] = fmt_rational(self.pad_value)
            out["pad_stable"] = self.pad_value == self.value
        return out


def _flat_problem(g: GridChain) -> tuple[L1Problem, list[tuple[str, int, list[Cell]]]]:
    cx, k = g.complex, g.dim
    rows = cx.cells(k)
    m = len(rows)
    cols = [{i: ONE} for i in range(m)]
    weights = [cx.volume(c) for c in rows]
    upper = cx.cells(k + 1)
    if upper:
        cols += cx.boundary_columns(k + 1)
        weights += [cx.volume(c) for c in upper]
    layout = [("Q", k, rows), ("R", k + 1, upper)]
    return L1Problem(m, cols, weights, g.vector(), list(range(m))), layout


def _tensor_problem(g: GridChain, k1: int, k2: int) -> tuple[L1Problem, list[tuple[str, int, list[Cell]]]]:
    cx = g.complex
    if cx.n1 is None:
        raise TypeMismatch("tensor flat norm needs a split complex")
    bad = [t for t in g.types() if t != TypeIndex(k1, k2)]
    if bad:
        raise TypeMismatch(f"support has types {sorted(map(tuple, bad))}, expected {(k1, k2)}")
    k = k1 + k2

    def typed(dim: int, t: TypeIndex) -> list[Cell]:
        return [c for c in cx.cells(dim) if cx.cell_type(c) == t]

    rows = typed(k, TypeIndex(k1, k2))
    row_index = {c: i for i, c in enumerate(rows)}
    m = len(rows)
    cols: list[dict[int, Fraction]] = [{i: ONE} for i in range(m)]
    weights = [cx.volume(c) for c in rows]
    layout = [("Q00", k, rows)]

    def image(cell: Cell, parts: Sequence[int]) -> dict[int, Fraction]:
        cur = {cell: ONE}
        for part in reversed(parts):
            nxt: dict[Cell, Fraction] = {}
            for c, v in cur.items():
                for face, s in cx.faces(c, part):
                    nxt[face] = nxt.get(face, ZERO) + s * v
            cur = nxt
        return {row_index[c]: v for c, v in cur.items() if v}

    for name, dim, t, parts in (("Q10", k + 1, TypeIndex(k1 + 1, k2), (1,)),
                                ("Q01", k + 1, TypeIndex(k1, k2 + 1), (2,)),
                                ("Q11", k + 2, TypeIndex(k1 + 1, k2 + 1), (1, 2))):
        cells = typed(dim, t)
        for c in cells:
            cols.append(image(c, parts))
            weights.append(cx.volume(c))
        layout.append((name, dim, cells))
    b = [g.coeffs.get(c, ZERO) for c in rows]
    return L1Problem(m, cols, weights, b, list(range(m))), layout


def _unpack(g: GridChain, sol: LPSolution, layout) -> tuple[dict[str, GridChain], bool]:
    witnesses = {}
    touches = False
    pos = 0
    for name, dim, cells in layout:
        coeffs = {}
        for c in cells:
            v = sol.z[pos]
            pos += 1
            if v:
                coeffs[c] = v
                touches = touches or g.complex.on_boundary(c)
        witnesses[name] = GridChain(g.complex, dim, coeffs, CoefficientGroup.rationals())
    return witnesses, touches


def _support_diameter(g: GridChain) -> int:
    if not g.coeffs:
        return 0
    span = 0
    for a in range(g.complex.n):
        vals = [c[1][a] for c in g.coeffs]
        span = max(span, max(vals) - min(vals) + 1)
    return span


def flat_norm(g: GridChain, method: str = "auto", pad_check: bool = False) -> LPResult:
    """min M(Q) + M(R) over p = Q + ∂R inside the complex."""
    problem, layout = _flat_problem(g)
    sol = solve_l1(problem, method)
    witnesses, touches = _unpack(g, sol, layout)
    res = LPResult(sol.value, witnesses, sol.y, sol.method, touches)
    if pad_check:
        pad = max(1, _support_diameter(g))
        res.pad_value = flat_norm(g.on(g.complex.padded(pad), pad), method).value
    return res


def tensor_flat_norm(g: GridChain, k1: int, k2: int, method: str = "auto",
                     pad_check: bool = False) -> LPResult:
    """min of the four masses over p = Q00 + ∂1 Q10 + ∂2 Q01 + ∂1∂2 Q11."""
    if k1 + k2 != g.dim:
        raise TypeMismatch("type does not add up to the chain dimension")
    problem, layout = _tensor_problem(g, k1, k2)
    sol = solve_l1(problem, method)
    witnesses, touches = _unpack(g, sol, layout)
    res = LPResult(sol.value, witnesses, sol.y, sol.method, touches)
    if pad_check:
        pad = max(1, _support_diameter(g))
        res.pad_value = tensor_flat_norm(g.on(g.complex.padded(pad), pad), k1, k2, method).value
    return res


def flat_norm_bruteforce(g: GridChain) -> Fraction:
    return vertex_enumeration_l1(_flat_problem(g)[0])


def tensor_flat_norm_bruteforce(g: GridChain, k1: int, k2: int) -> Fraction:
    return vertex_enumeration_l1(_tensor_problem(g, k1, k2)[0])


def integer_l1_oracle(problem: L1Problem, bound: int) -> Fraction:
    """Exhaustive integer optimum with |z_j| ≤ bound for the non-identity columns."""
    m = problem.m
    extra = problem.columns[m:]
    best = None
    for zs in itertools.product(range(-bound, bound + 1), repeat=len(extra)):
        resid = list(problem.b)
        cost = ZERO
        for col, w, v in zip(extra, problem.weights[m:], zs):
            if v:
                cost += w * abs(v)
                for i, a in col.items():
                    resid[i] -= a * v
        cost += sum((w * abs(r) for w, r in zip(problem.weights[:m], resid)), ZERO)
        if best is None or cost < best:
            best = cost
    return best


def integer_flat_norm(g: GridChain, bound: int) -> Fraction:
    return integer_l1_oracle(_flat_problem(g)[0], bound)


def integer_tensor_flat_norm(g: GridChain, k1: int, k2: int, bound: int) -> Fraction:
    return integer_l1_oracle(_tensor_problem(g, k1, k2)[0], bound)


# ---------------------------------------------------------------------------
# cross mass


def cross_mass_m(k: int, n1: int, n2: int) -> int:
    """|D_k| by the closed form 1 + min(k, n1, n2) or 1 + n - k."""
    if k > n1 + n2 or k < 0:
        return 0
    if k <= max(n1, n2):
        return 1 + min(k, n1, n2)
    return 1 + n1 + n2 - k


@dataclass
class CrossMassBounds:
    lower: RadicalSum
    upper: RadicalSum
    m: int

    @property
    def constant(self) -> RadicalSum:
        return RadicalSum.sqrt(self.m)

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json(), "m": self.m,
                "constant": f"sqrt({self.m})"}


def cross_mass_bounds(c: Chain, n1: int, k: int | None = None) -> CrossMassBounds:
    """M(c) ≤ M^×(c) ≤ √m · M(c)."""
    k = c.dim if k is None else k
    m = cross_mass_m(k, n1, c.ambient_dim - n1)
    lower = c.true_mass()
    return CrossMassBounds(lower, lower * RadicalSum.sqrt(m), m)


def grid_chain_from_cells(cx: CubicalComplex, k: int, cells: Iterable[tuple[Sequence[int], Sequence[int], RationalLike]],
                          group: CoefficientGroup | None = None) -> GridChain:
    """Cells given as (gamma 0-based axes, lower corner index, coefficient)."""
    return GridChain(cx, k, {(tuple(g), tuple(i)): to_rational(v) for g, i, v in cells},
                     group or CoefficientGroup.integers())
