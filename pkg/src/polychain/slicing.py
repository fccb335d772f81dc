"""Slicing by coordinate planes, a.e.-vanishing of 0-slices, and the splitting test.

Slices are oriented so that ``ξ_q ∧ e_γ`` is positive on ``ξ_p``. For 0-slices
(``|γ| = k``) this is the same as ``e_γ ∧ ξ_q``; for intermediate slices it is the
choice under which ``∂ Sl = Sl ∂`` holds on the nose. Iterated slicing therefore
cuts the largest axis of γ first.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chains import Chain
from .errors import NonGenericLevel, NonGenericPoint
from .exact import RadicalSum, RationalLike, fmt_rational, to_rational
from .geometry import SimplexCell, centroid, pluecker, plane_key, point


@dataclass(frozen=True)
class TypeIndex:
    k1: int
    k2: int

    def __iter__(self):
        return iter((self.k1, self.k2))


@dataclass(frozen=True)
class SliceSpec:
    gamma: tuple[int, ...]
    base_point: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "base_point", point(self.base_point))
        if len(self.gamma) != len(self.base_point):
            raise ValueError("one level per sliced axis")
        if len(set(self.gamma)) != len(self.gamma):
            raise ValueError("repeated axis in gamma")


def gamma_type(gamma: Sequence[int], n1: int) -> TypeIndex:
    r1 = sum(1 for g in gamma if g < n1)
    return TypeIndex(r1, len(gamma) - r1)


def types_of_dim(k: int, n1: int, n2: int) -> list[TypeIndex]:
    """D_k: admissible types of total dimension k."""
    return [TypeIndex(a, k - a) for a in range(0, k + 1) if a <= n1 and k - a <= n2]


def section_at(c: Chain, gamma: Sequence[int], x: Sequence[RationalLike]) -> Chain:
    """c ∩ X_{β∖γ}(x), not projected."""
    levels = dict(zip(gamma, (to_rational(v) for v in x)))
    out = c
    for axis in sorted(levels, reverse=True):
        if out.dim == 0:
            return Chain(c.ambient_dim, c.dim - len(levels), c.group)
        try:
            out = out.section(axis, levels[axis])
        except NonGenericLevel as exc:
            raise NonGenericPoint(f"level {levels[axis]} on axis {axis} hits a vertex") from exc
    return out


def slice_chain(c: Chain, spec: SliceSpec) -> Chain:
    """Sl_γ^x c, projected onto X_{β∖γ} (sliced coordinates set to zero)."""
    return section_at(c, spec.gamma, spec.base_point).zero_coordinates(spec.gamma)


def slice_at(c: Chain, gamma: Sequence[int], x: Sequence[RationalLike]) -> Chain:
    return slice_chain(c, SliceSpec(tuple(gamma), tuple(x)))


def coarea_bound(c: Chain, gamma: Sequence[int]) -> RadicalSum:
    """Σ |g| · |e_γ ⌟ ξ| · H^k over stored cells (= ∫ M(Sl_γ^x c) dx without cancellation)."""
    gamma = tuple(sorted(gamma))
    k = c.dim
    if len(gamma) > k:
        return RadicalSum()
    fact = Fraction(1, math.factorial(k))
    total = []
    for verts, g in c.items():
        pl = pluecker(verts)
        if len(gamma) == k:
            total.append(RadicalSum.rational(abs(pl.get(gamma, 0)) * fact * c.group.norm(g)))
        else:
            sq = sum((m * m for s, m in pl.items() if set(gamma) <= set(s)), Fraction(0))
            total.append(RadicalSum.sqrt(sq) * (fact * c.group.norm(g)))
    return RadicalSum.sum(total)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Vanishes:
    def to_json(self) -> dict:
        return {"verdict": "Vanishes"}


@dataclass(frozen=True)
class NonzeroAt:
    gamma: tuple[int, ...]
    witness: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"verdict": "NonzeroAt", "gamma": [g + 1 for g in self.gamma],
                "witness": [fmt_rational(x) for x in self.witness]}


@dataclass(frozen=True)
class Unknown:
    samples: int

    def to_json(self) -> dict:
        return {"verdict": "Unknown", "samples": self.samples}


@dataclass(frozen=True)
class Split:
    def to_json(self) -> dict:
        return {"verdict": "Split"}


@dataclass(frozen=True)
class NotSplit:
    cell: SimplexCell
    gamma: tuple[int, ...]

    def to_json(self) -> dict:
        return {"verdict": "NotSplit", "cell": self.cell.to_json(), "gamma": [g + 1 for g in self.gamma]}


@dataclass(frozen=True)
class NeedsCertifiedRep:
    overlaps: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"verdict": "NeedsCertifiedRep", "overlaps": [list(p) for p in self.overlaps]}


def _interior_points(verts):
    """Deterministic interior points of a simplex, centroid first."""
    yield centroid(verts)
    m = len(verts)
    for t in range(1, 40):
        w = [Fraction(1 + ((t * (i + 3)) % 7) + i, 1) for i in range(m)]
        s = sum(w)
        yield tuple(sum(wi * v[c] for wi, v in zip(w, verts)) / s for c in range(len(verts[0])))


def slices_vanish_ae(c: Chain, gamma: Sequence[int]) -> Vanishes | NonzeroAt | Unknown:
    """Exact decision whether Sl_γ^x c = 0 for almost every x, with |γ| = k.

    For a.e. x the slice is a sum over affine k-planes P of one point per plane;
    points of distinct planes are distinct for a.e. x, so the slice vanishes
    a.e. iff for every plane the projection of its cells to X_γ is the zero
    top-dimensional chain, which the refinement in ``Chain.is_zero`` decides.
    """
    gamma = tuple(sorted(gamma))
    if len(gamma) != c.dim:
        raise ValueError("0-slices need |gamma| = dim")
    if c.dim == 0:
        return Vanishes() if not c else NonzeroAt((), ())
    by_plane: dict[tuple, list] = defaultdict(list)
    for verts, g in c.items():
        by_plane[plane_key(verts)].append((verts, g))
    for cells in by_plane.values():
        sub = Chain(c.ambient_dim, c.dim, c.group, cells)
        proj = sub.push_forward_projection(gamma).refine()
        if not proj:
            continue
        for verts in proj.terms:
            for x in _interior_points(verts):
                try:
                    if slice_at(c, gamma, x):
                        return NonzeroAt(gamma, x)
                except NonGenericPoint:
                    continue
        return Unknown(samples=40 * len(proj.terms))
    return Vanishes()


def splitting_test(c: Chain, k1: int, k2: int, n1: int) -> Split | NotSplit | NeedsCertifiedRep:
    """Per-cell span test: every stored cell spans some L¹ × L² of type (k1, k2)."""
    overlaps = c.overlapping_pairs()
    if overlaps:
        return NeedsCertifiedRep(tuple(overlaps))
    target = TypeIndex(k1, k2)
    for verts, _ in sorted(c.items()):
        for gamma in sorted(pluecker(verts)):
            if gamma_type(gamma, n1) != target:
                return NotSplit(SimplexCell(verts), gamma)
    return Split()


def j_vanishing_test(c: Chain, k1: int, k2: int, n1: int) -> Vanishes | NonzeroAt | Unknown:
    """Vanishing of j_{k1,k2} c via 0-slices over every γ of that type."""
    n = c.ambient_dim
    unknown = None
    for gamma in itertools.combinations(range(n), c.dim):
        if gamma_type(gamma, n1) != TypeIndex(k1, k2):
            continue
        verdict = slices_vanish_ae(c, gamma)
        if isinstance(verdict, NonzeroAt):
            return verdict
        if isinstance(verdict, Unknown):
            unknown = verdict
    return unknown or Vanishes()
