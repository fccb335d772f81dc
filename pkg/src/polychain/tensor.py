"""Tensor chains Σ g p¹ ∧ p² over a split ℝⁿ = ℝ^{n1} × ℝ^{n2}.

The first factor carries integer multiplicities (it is a Z-chain); the
coefficient g lives in the chain's group, so ``2 p¹ ∧ 1̄ p²`` in Z/2Z is zero.
Pair keys store both factors as sorted vertex tuples with the product of the
two sorting parities folded into the coefficient.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .chains import Chain, _add_term, cartesian_product
from .coeff import CoefficientGroup, CoefficientValue
from .errors import DimensionMismatch, GroupMismatch, NotTensorRepresentable, TypeMismatch
from .exact import RadicalSum, RationalLike, fmt_rational, to_rational
from .geometry import (
    ZERO,
    Point,
    SimplexCell,
    Verts,
    affine_rank,
    minor,
    orientation_minor,
    permutation_parity,
    point,
    product_simplices,
    squared_volume,
)
from .slicing import TypeIndex, slice_at

Pair = tuple[Verts, Verts]


def _add_pair(terms: dict[Pair, Fraction], v1: Sequence[Point], v2: Sequence[Point],
              coeff: Fraction, group: CoefficientGroup) -> None:
    key = (tuple(sorted(v1)), tuple(sorted(v2)))
    if permutation_parity(v1) * permutation_parity(v2) < 0:
        coeff = -coeff
    value = group.reduce(terms.get(key, ZERO) + coeff)
    if value:
        terms[key] = value
    else:
        terms.pop(key, None)


class TensorChain:
    __slots__ = ("split", "type", "group", "terms")

    def __init__(self, split: tuple[int, int], type: tuple[int, int], group: CoefficientGroup,
                 terms: Iterable[tuple[Sequence[Point], Sequence[Point], RationalLike]] = ()):
        self.split = tuple(split)
        self.type = TypeIndex(*type)
        self.group = group
        self.terms: dict[Pair, Fraction] = {}
        for v1, v2, c in terms:
            _add_pair(self.terms, v1, v2, to_rational(c), group)

    @classmethod
    def from_terms(cls, split: tuple[int, int],
                   terms: Iterable[tuple[SimplexCell | Sequence, SimplexCell | Sequence, RationalLike]],
                   group: CoefficientGroup | None = None) -> TensorChain:
        """Validated constructor; infers the type from the first term."""
        group = group or CoefficientGroup.integers()
        checked = []
        for c1, c2, g in terms:
            c1 = c1 if isinstance(c1, SimplexCell) else SimplexCell(tuple(point(v) for v in c1))
            c2 = c2 if isinstance(c2, SimplexCell) else SimplexCell(tuple(point(v) for v in c2))
            if (c1.ambient_dim, c2.ambient_dim) != tuple(split):
                raise DimensionMismatch("factor lives in the wrong subspace")
            checked.append((c1, c2, g))
        if not checked:
            raise ValueError("cannot infer the type of an empty tensor chain")
        k = (checked[0][0].dim, checked[0][1].dim)
        if any((c1.dim, c2.dim) != k for c1, c2, _ in checked):
            raise TypeMismatch("terms of mixed type")
        return cls(split, k, group, ((c1.vertices, c2.vertices, g) for c1, c2, g in checked))

    @classmethod
    def wedge(cls, a: Chain, b: Chain) -> TensorChain:
        """a ∧ b for a Z-chain a in ℝ^{n1} and a G-chain b in ℝ^{n2}."""
        if a.group != CoefficientGroup.integers():
            raise GroupMismatch("the first factor must carry integer coefficients")
        out = cls((a.ambient_dim, b.ambient_dim), (a.dim, b.dim), b.group)
        for v1, c1 in a.items():
            for v2, c2 in b.items():
                _add_pair(out.terms, v1, v2, b.group.scale(int(c1), c2), b.group)
        return out

    def _like(self, type: tuple[int, int] | None = None) -> TensorChain:
        return TensorChain(self.split, tuple(self.type) if type is None else type, self.group)

    def _check(self, other: TensorChain) -> None:
        if self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")
        if (self.split, self.type) != (other.split, other.type):
            raise TypeMismatch("split or type differ")

    def __add__(self, other: TensorChain) -> TensorChain:
        self._check(other)
        out = self._like()
        out.terms = dict(self.terms)
        for (v1, v2), c in other.terms.items():
            _add_pair(out.terms, v1, v2, c, self.group)
        return out

    def __neg__(self) -> TensorChain:
        out = self._like()
        out.terms = {k: self.group.reduce(-c) for k, c in self.terms.items()}
        return out

    def __sub__(self, other: TensorChain) -> TensorChain:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorChain):
            return NotImplemented
        return (self.split, self.type, self.group, self.terms) == (
            other.split, other.type, other.group, other.terms)

    def __hash__(self) -> int:
        return hash((self.split, self.type, self.group, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[SimplexCell, SimplexCell, CoefficientValue]]:
        for (v1, v2), c in self.terms.items():
            yield SimplexCell(v1), SimplexCell(v2), CoefficientValue(self.group, c)

    def __repr__(self) -> str:
        return f"TensorChain(split={self.split}, type={tuple(self.type)}, {self.group}, {len(self.terms)} terms)"

    @property
    def dim(self) -> int:
        return self.type.k1 + self.type.k2

    # -- partial boundaries -------------------------------------------------

    def d1(self) -> TensorChain:
        k1, k2 = self.type
        out = self._like((k1 - 1, k2))
        if k1 <= 0:
            return out
        for (v1, v2), c in self.terms.items():
            for j in range(len(v1)):
                _add_pair(out.terms, v1[:j] + v1[j + 1:], v2, c if j % 2 == 0 else -c, self.group)
        return out

    def d2(self) -> TensorChain:
        k1, k2 = self.type
        out = self._like((k1, k2 - 1))
        if k2 <= 0:
            return out
        sign = -1 if k1 % 2 else 1
        for (v1, v2), c in self.terms.items():
            for j in range(len(v2)):
                s = sign if j % 2 == 0 else -sign
                _add_pair(out.terms, v1, v2[:j] + v2[j + 1:], s * c, self.group)
        return out

    # -- embedding and views ---------------------------------------------------

    def embed(self) -> Chain:
        out = Chain(sum(self.split), self.dim, self.group)
        for (v1, v2), c in self.terms.items():
            for verts in product_simplices(v1, v2):
                _add_term(out.terms, verts, c, self.group)
        return out

    def mass(self) -> RadicalSum:
        """Σ |g| H^{k1}(p¹) H^{k2}(p²) over stored terms (the mass of the embedding
        when the stored products do not overlap)."""
        return RadicalSum.sum(
            RadicalSum.sqrt(squared_volume(v1) * squared_volume(v2)) * self.group.norm(c)
            for (v1, v2), c in self.terms.items())

    def i_map(self) -> IChainView:
        groups: dict[Verts, Chain] = {}
        n2, k2 = self.split[1], self.type.k2
        for (v1, v2), c in self.terms.items():
            ch = groups.setdefault(v1, Chain(n2, k2, self.group))
            _add_term(ch.terms, v2, c, self.group)
        return IChainView(self.split, tuple(self.type), self.group,
                          {v: ch for v, ch in groups.items() if ch})

    def slice(self, gamma: Sequence[int], x: Sequence[RationalLike]) -> TensorChain:
        """Σ g (Sl_{γ¹} p¹) ∧ (Sl_{γ²} p²), the factorwise slice."""
        n1, n2 = self.split
        levels = dict(zip(gamma, (to_rational(v) for v in x)))
        g1 = sorted(a for a in levels if a < n1)
        g2 = sorted(a for a in levels if a >= n1)
        x1 = [levels[a] for a in g1]
        x2 = [levels[a] for a in g2]
        g2_local = [a - n1 for a in g2]
        k1, k2 = self.type
        out = self._like((k1 - len(g1), k2 - len(g2)))
        if out.type.k1 < 0 or out.type.k2 < 0:
            return out
        z = CoefficientGroup.integers()
        for (v1, v2), c in self.terms.items():
            s1 = slice_at(Chain(n1, k1, z, [(v1, 1)]), g1, x1)
            if not s1:
                continue
            s2 = slice_at(Chain(n2, k2, self.group, [(v2, c)]), g2_local, x2)
            for w1, c1 in s1.items():
                for w2, c2 in s2.items():
                    _add_pair(out.terms, w1, w2, self.group.scale(int(c1), c2), self.group)
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "split": list(self.split),
            "type": list(self.type),
            "group": self.group.to_json(),
            "terms": [
                {"cell1": [[fmt_rational(x) for x in v] for v in v1],
                 "cell2": [[fmt_rational(x) for x in v] for v in v2],
                 "coeff": fmt_rational(c)}
                for (v1, v2), c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> TensorChain:
        group = CoefficientGroup.from_json(data.get("group", "Z"))
        split = tuple(int(x) for x in data["split"])
        type_ = tuple(int(x) for x in data["type"])
        terms = []
        for t in data["terms"]:
            c1 = SimplexCell.from_json(t["cell1"])
            c2 = SimplexCell.from_json(t["cell2"])
            if (c1.ambient_dim, c2.ambient_dim) != split or (c1.dim, c2.dim) != type_:
                raise DimensionMismatch("term does not match split/type")
            coeff = t["coeff"]
            if isinstance(coeff, dict):
                coeff = CoefficientValue.from_json(coeff).value
            terms.append((c1.vertices, c2.vertices, to_rational(coeff)))
        return cls(split, type_, group, terms)


@dataclass
class IChainView:
    """i P: first-factor cells carrying coefficient chains in the second factor."""

    split: tuple[int, int]
    type: tuple[int, int]
    group: CoefficientGroup
    groups: dict[Verts, Chain]

    def i_inverse(self) -> TensorChain:
        out = TensorChain(self.split, self.type, self.group)
        for v1, ch in self.groups.items():
            for v2, c in ch.items():
                _add_pair(out.terms, v1, v2, c, self.group)
        return out

    def boundary(self) -> IChainView:
        """∂ on the first-factor cells (coefficients are carried along)."""
        k1, k2 = self.type
        n2 = self.split[1]
        acc: dict[Verts, Chain] = {}
        for v1, ch in self.groups.items():
            if k1 == 0:
                break
            for j in range(len(v1)):
                face = v1[:j] + v1[j + 1:]
                key = tuple(sorted(face))
                sign = permutation_parity(face) * (1 if j % 2 == 0 else -1)
                prev = acc.get(key, Chain(n2, k2, self.group))
                acc[key] = prev + ch.scale(sign)
        return IChainView(self.split, (k1 - 1, k2), self.group, {v: c for v, c in acc.items() if c})

    def mass(self) -> RadicalSum:
        """Σ H^{k1}(p¹) · M(coefficient chain), with the coefficient norm taken as mass."""
        return RadicalSum.sum(
            RadicalSum.sqrt(squared_volume(v1)) * ch.true_mass() for v1, ch in self.groups.items())


def i_map(t: TensorChain) -> IChainView:
    return t.i_map()


def i_inverse(v: IChainView) -> TensorChain:
    return v.i_inverse()


def d1(t: TensorChain) -> TensorChain:
    return t.d1()


def d2(t: TensorChain) -> TensorChain:
    return t.d2()


def embed(t: TensorChain) -> Chain:
    return t.embed()


# ---------------------------------------------------------------------------
# j decomposition


def j_decompose(c: Chain, n1: int) -> dict[TypeIndex, TensorChain]:
    """Type components of a chain assembled from triangulated product cells.

    Each simplex of a triangulated p¹ × p² projects onto all vertices of p¹ and of
    p² (its vertex graph is a spanning tree of the product's vertex grid), so
    grouping simplices by their two vertex projections recovers the products.
    Each group is then checked to be exactly g · (p¹ × p²) modulo subdivision.
    """
    n2 = c.ambient_dim - n1
    groups: dict[Pair, list[tuple[Verts, Fraction]]] = defaultdict(list)
    for verts, g in c.items():
        first = sorted({v[:n1] for v in verts})
        second = sorted({v[n1:] for v in verts})
        a, b = len(first) - 1, len(second) - 1
        if a + b != c.dim or affine_rank(first) != a or affine_rank(second) != b:
            raise NotTensorRepresentable(f"cell {verts} is not part of a product cell")
        groups[(tuple(first), tuple(second))].append((verts, g))
    out: dict[TypeIndex, TensorChain] = {}
    for (p1, p2), cells in sorted(groups.items()):
        prod = [tuple(v) for v in product_simplices(p1, p2)]
        gamma, ref = orientation_minor(prod[0])
        verts0, g0 = cells[0]
        coeff = g0 if (minor(verts0, gamma) > 0) == (ref > 0) else c.group.reduce(-g0)
        piece = Chain(c.ambient_dim, c.dim, c.group, cells)
        model = Chain(c.ambient_dim, c.dim, c.group, ((v, coeff) for v in prod))
        if not piece.equivalent(model):
            raise NotTensorRepresentable(f"cells over {p1} x {p2} do not form one weighted product")
        key = TypeIndex(len(p1) - 1, len(p2) - 1)
        tc = out.setdefault(key, TensorChain((n1, n2), tuple(key), c.group))
        _add_pair(tc.terms, p1, p2, coeff, c.group)
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# augmentations and dyadic collapse


def chi(c: Chain) -> CoefficientValue:
    if c.dim != 0:
        raise DimensionMismatch("χ is defined on 0-chains")
    return CoefficientValue(c.group, sum(c.terms.values(), ZERO))


def chi_wedge(t: TensorChain) -> CoefficientValue:
    """χ^∧(t) = χ(χ(i t)): augment each coefficient chain, then the result."""
    if tuple(t.type) != (0, 0):
        raise TypeMismatch("χ^∧ is defined on (0,0) tensor chains")
    view = t.i_map()
    inner = Chain(t.split[0], 0, t.group,
                  ((v1, chi(ch).value) for v1, ch in view.groups.items()))
    return chi(inner)


def dyadic_corner(x: Sequence[Fraction], j: int) -> Point:
    scale = 1 << j
    return tuple(Fraction(math.floor(c * scale), scale) for c in x)


def dyadic_collapse(t: TensorChain, j: int) -> TensorChain:
    """Λ_j: move every first-factor point to the corner of its half-open dyadic cube."""
    if t.type.k1 != 0:
        raise TypeMismatch("dyadic collapse needs type (0, k)")
    if j < 0:
        raise ValueError("level must be nonnegative")
    out = t._like()
    for (v1, v2), c in t.terms.items():
        _add_pair(out.terms, (dyadic_corner(v1[0], j),), v2, c, t.group)
    return out


def tensor_product_chain(a: Chain, b: Chain) -> Chain:
    """Embedding of a ∧ b; same as the cartesian product of chains."""
    return cartesian_product(a, b)
