"""Exact rational helpers: parsing, small dense linear algebra, and sums of square roots.

Masses of simplicial chains are sums ``sum c_r * sqrt(r)`` with rational ``c_r``.
Writing every radicand as a squarefree integer makes the representation
canonical, so equality with zero is decided exactly by linear independence of
square roots of distinct squarefree integers. Signs and enclosures come from
integer square roots, never from floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy import factorint

Rational = Fraction
RationalLike = int | Fraction | str


def to_rational(x: RationalLike) -> Fraction:
    """Exact conversion; floats are refused so that nothing inexact leaks in."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} exactly to a rational")


def fmt_rational(x: Fraction) -> str:
    return str(Fraction(x))


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(map(Fraction, r)) for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        piv = a[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f /= piv
                row_c = a[c]
                row_r = a[r]
                for j in range(c + 1, n):
                    if row_c[j]:
                        row_r[j] -= f * row_c[j]
    return result


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    a = [list(map(Fraction, r)) for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, m):
            f = a[i][c]
            if f:
                f /= piv
                for j in range(c, n):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == m:
            break
    return r


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form, dropping zero rows; returns (rows, pivot columns)."""
    a = [list(map(Fraction, r)) for r in rows]
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [v / piv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve a square nonsingular system exactly; None when singular."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    red, piv = rref(aug)
    if len(piv) != n or (piv and piv[-1] == n):
        return None
    return [red[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# square roots


def sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(q) <= hi with hi - lo <= 2**-bits / den(q)."""
    if q < 0:
        raise ValueError("negative radicand")
    num = q.numerator * q.denominator
    scale = 1 << bits
    s = math.isqrt(num * scale * scale)
    den = scale * q.denominator
    lo = Fraction(s, den)
    hi = lo if s * s == num * scale * scale else Fraction(s + 1, den)
    return lo, hi


@lru_cache(maxsize=65536)
def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s*s*r with r squarefree; returns (s, r)."""
    if n == 0:
        return 0, 1
    r0 = math.isqrt(n)
    if r0 * r0 == n:
        return r0, 1
    s, r = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    return s, r


def sqrt_split(q: Fraction) -> tuple[Fraction, int]:
    """sqrt(q) = c * sqrt(r) with rational c >= 0 and squarefree integer r."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0), 1
    s, r = _squarefree_split(q.numerator * q.denominator)
    return Fraction(s, q.denominator), r


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def floats(self) -> tuple[float, float]:
        """Outward-rounded float endpoints, still an enclosure."""
        lo = float(self.lo)
        if Fraction(lo) > self.lo:
            lo = math.nextafter(lo, -math.inf)
        hi = float(self.hi)
        if Fraction(hi) < self.hi:
            hi = math.nextafter(hi, math.inf)
        return lo, hi

    def to_json(self) -> dict:
        lo, hi = self.floats()
        return {"lo": repr(lo), "hi": repr(hi)}


class RadicalSum:
    """An exact real number sum_r c_r sqrt(r) over distinct squarefree r."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        for r, c in (terms or {}).items():
            if c:
                clean[r] = Fraction(c)
        self.terms: dict[int, Fraction] = dict(sorted(clean.items()))

    @classmethod
    def rational(cls, q: RationalLike) -> RadicalSum:
        return cls({1: to_rational(q)})

    @classmethod
    def sqrt(cls, q: RationalLike) -> RadicalSum:
        c, r = sqrt_split(to_rational(q))
        return cls({r: c})

    @classmethod
    def sum(cls, items: Iterable[RadicalSum]) -> RadicalSum:
        acc: dict[int, Fraction] = {}
        for it in items:
            for r, c in it.terms.items():
                acc[r] = acc.get(r, Fraction(0)) + c
        return cls(acc)

    def __add__(self, other: RadicalSum | RationalLike) -> RadicalSum:
        other = _lift(other)
        acc = dict(self.terms)
        for r, c in other.terms.items():
            acc[r] = acc.get(r, Fraction(0)) + c
        return RadicalSum(acc)

    __radd__ = __add__

    def __neg__(self) -> RadicalSum:
        return RadicalSum({r: -c for r, c in self.terms.items()})

    def __sub__(self, other: RadicalSum | RationalLike) -> RadicalSum:
        return self + (-_lift(other))

    def __rsub__(self, other: RadicalSum | RationalLike) -> RadicalSum:
        return _lift(other) - self

    def __mul__(self, other: RadicalSum | RationalLike) -> RadicalSum:
        other = _lift(other)
        acc: dict[int, Fraction] = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                g = math.gcd(r1, r2)
                r = (r1 // g) * (r2 // g)
                acc[r] = acc.get(r, Fraction(0)) + c1 * c2 * g
        return RadicalSum(acc)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.terms.get(1, Fraction(0))

    def enclosure(self, bits: int) -> Interval:
        lo = hi = Fraction(0)
        for r, c in self.terms.items():
            a, b = sqrt_bounds(Fraction(r), bits)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return Interval(lo, hi)

    def interval(self, width: RationalLike = Fraction(1, 10**12)) -> Interval:
        width = to_rational(width)
        bits = 40
        while True:
            iv = self.enclosure(bits)
            if iv.width < width:
                return iv
            bits *= 2

    def sign(self) -> int:
        if self.is_zero():
            return 0
        bits = 32
        while True:
            iv = self.enclosure(bits)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            bits *= 2

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, RadicalSum)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __lt__(self, other: RadicalSum | RationalLike) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: RadicalSum | RationalLike) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: RadicalSum | RationalLike) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: RadicalSum | RationalLike) -> bool:
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        iv = self.interval(Fraction(1, 10**18))
        return float((iv.lo + iv.hi) / 2)

    def __repr__(self) -> str:
        return f"RadicalSum({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for r, c in self.terms.items():
            parts.append(str(c) if r == 1 else f"{c}*sqrt({r})")
        return " + ".join(parts)

    def to_json(self, width: RationalLike = Fraction(1, 10**12)) -> dict:
        return {
            "exact": {str(r): fmt_rational(c) for r, c in self.terms.items()},
            "interval": self.interval(width).to_json(),
        }


def _lift(x: RadicalSum | RationalLike) -> RadicalSum:
    return x if isinstance(x, RadicalSum) else RadicalSum.rational(x)
