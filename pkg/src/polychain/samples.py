"""Seeded random instances: simplices, chains, product chains and tensor chains.

All coordinates are small-denominator rationals so that exact arithmetic stays
cheap. Every generator takes a ``random.Random`` and is deterministic given it.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .chains import Chain
from .coeff import CoefficientGroup
from .geometry import Point, affine_rank
from .tensor import TensorChain

_DENOMS = (1, 2, 3, 4)


def rational(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    d = rng.choice(_DENOMS)
    return Fraction(rng.randint(lo * d, hi * d), d)


def random_point(rng: random.Random, n: int, offset: Point | None = None) -> Point:
    p = tuple(rational(rng) for _ in range(n))
    if offset is not None:
        p = tuple(a + b for a, b in zip(p, offset))
    return p


def random_simplex(rng: random.Random, n: int, k: int, offset: Point | None = None) -> tuple[Point, ...]:
    """Vertices of a nondegenerate k-simplex in ℝⁿ."""
    while True:
        verts = tuple(random_point(rng, n, offset) for _ in range(k + 1))
        if len(set(verts)) == k + 1 and affine_rank(verts) == k:
            return verts


def random_coeff(rng: random.Random, group: CoefficientGroup) -> Fraction:
    if group.kind == "Q":
        return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
    return Fraction(rng.choice([-2, -1, 1, 2]))


def random_chain(rng: random.Random, n: int, k: int, cells: int = 3,
                 group: CoefficientGroup | None = None) -> Chain:
    """Arbitrary (possibly overlapping) chain of random simplices."""
    group = group or CoefficientGroup.integers()
    return Chain(n, k, group, ((random_simplex(rng, n, k), random_coeff(rng, group))
                               for _ in range(cells)))


def random_group(rng: random.Random) -> CoefficientGroup:
    return rng.choice([CoefficientGroup.integers(), CoefficientGroup.rationals(),
                       CoefficientGroup.mod(2), CoefficientGroup.mod(5)])


def random_tensor_chain(rng: random.Random, split: tuple[int, int], type_: tuple[int, int],
                        terms: int = 2, group: CoefficientGroup | None = None) -> TensorChain:
    group = group or CoefficientGroup.integers()
    n1, n2 = split
    k1, k2 = type_
    return TensorChain(split, type_, group,
                       ((random_simplex(rng, n1, k1), random_simplex(rng, n2, k2),
                         random_coeff(rng, group)) for _ in range(terms)))


def separated_chain(rng: random.Random, n: int, n1: int, k: int, cells: int,
                    oblique_prob: float = 0.4) -> tuple[Chain, list[str]]:
    """A certified (non-overlapping) k-chain mixing product cells and oblique cells.

    Pieces are translated far apart along the first axis so no two overlap.
    Returns the chain and a per-piece label: ``"k1,k2"`` for product pieces
    and ``"oblique"`` otherwise.
    """
    zz = CoefficientGroup.integers()
    n2 = n - n1
    out = Chain(n, k, zz)
    labels = []
    for i in range(cells):
        shift = (Fraction(20 * i),) + (Fraction(0),) * (n - 1)
        admissible = [a for a in range(k + 1) if a <= n1 and k - a <= n2]
        if rng.random() < oblique_prob or not admissible:
            verts = random_simplex(rng, n, k, shift)
            piece = Chain(n, k, zz, [(verts, random_coeff(rng, zz))])
            labels.append("oblique")
        else:
            a = rng.choice(admissible)
            p1 = random_simplex(rng, n1, a, shift[:n1])
            p2 = random_simplex(rng, n2, k - a)
            piece = TensorChain((n1, n2), (a, k - a), zz, [(p1, p2, random_coeff(rng, zz))]).embed()
            labels.append(f"{a},{k - a}")
        out = out + piece
    return out, labels


def random_grid_chain(rng: random.Random, n: int, k: int, size: int = 3, cells: int = 3) -> Chain:
    """Axis-aligned chain made of unit cubes (triangulated) with integer corners."""
    from .flatnorm import CubicalComplex, GridChain

    cx = CubicalComplex((0,) * n, 1, (size,) * n)
    pool = cx.cells(k)
    chosen = rng.sample(pool, min(cells, len(pool)))
    g = GridChain(cx, k, {c: Fraction(rng.choice([-2, -1, 1, 2])) for c in chosen})
    return g.to_chain()
