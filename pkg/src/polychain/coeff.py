"""Coefficient groups Z, Z/mZ and Q with their norms.

Chains store raw ``Fraction`` values next to a :class:`CoefficientGroup`; the
group reduces them canonically (residues in ``[0, m)``). :class:`CoefficientValue`
is the boxed form used at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GroupMismatch
from .exact import RationalLike, fmt_rational, to_rational


@dataclass(frozen=True)
class CoefficientGroup:
    kind: str  # "Z", "ZmodM" or "Q"
    m: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("Z", "ZmodM", "Q"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == "ZmodM":
            if not isinstance(self.m, int) or self.m < 1:
                raise ValueError("Z/mZ needs a positive integer m")
        elif self.m is not None:
            raise ValueError(f"{self.kind} takes no modulus")

    @classmethod
    def integers(cls) -> CoefficientGroup:
        return cls("Z")

    @classmethod
    def rationals(cls) -> CoefficientGroup:
        return cls("Q")

    @classmethod
    def mod(cls, m: int) -> CoefficientGroup:
        return cls("ZmodM", m)

    def reduce(self, x: RationalLike) -> Fraction:
        x = to_rational(x)
        if self.kind == "Q":
            return x
        if x.denominator != 1:
            raise ValueError(f"{x} is not an integer, cannot live in {self}")
        if self.kind == "ZmodM":
            return Fraction(x.numerator % self.m)
        return x

    def norm(self, x: Fraction) -> Fraction:
        if self.kind == "ZmodM":
            r = int(x) % self.m
            return Fraction(min(r, self.m - r))
        return abs(x)

    def scale(self, n: int, x: Fraction) -> Fraction:
        """The Z-action n*x (the only product the groups carry)."""
        return self.reduce(n * x)

    def __call__(self, x: RationalLike) -> CoefficientValue:
        return CoefficientValue(self, self.reduce(x))

    @property
    def zero(self) -> CoefficientValue:
        return self(0)

    @property
    def one(self) -> CoefficientValue:
        return self(1)

    def check_same(self, other: CoefficientGroup) -> None:
        if self != other:
            raise GroupMismatch(f"{self} vs {other}")

    def to_json(self) -> dict:
        d: dict = {"group": self.kind}
        if self.kind == "ZmodM":
            d["m"] = self.m
        return d

    @classmethod
    def from_json(cls, d: dict | str) -> CoefficientGroup:
        if isinstance(d, str):
            d = {"group": d}
        kind = d["group"]
        return cls(kind, int(d["m"])) if kind == "ZmodM" else cls(kind)

    def __str__(self) -> str:
        return f"Z/{self.m}Z" if self.kind == "ZmodM" else self.kind


@dataclass(frozen=True)
class CoefficientValue:
    group: CoefficientGroup
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.group.reduce(self.value))

    def __add__(self, other: CoefficientValue) -> CoefficientValue:
        self.group.check_same(other.group)
        return CoefficientValue(self.group, self.value + other.value)

    def __neg__(self) -> CoefficientValue:
        return CoefficientValue(self.group, -self.value)

    def __sub__(self, other: CoefficientValue) -> CoefficientValue:
        return self + (-other)

    def __rmul__(self, n: int) -> CoefficientValue:
        if not isinstance(n, int):
            return NotImplemented
        return CoefficientValue(self.group, n * self.value)

    def norm(self) -> Fraction:
        return self.group.norm(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def to_json(self) -> dict:
        d = self.group.to_json()
        d["value"] = fmt_rational(self.value)
        return d

    @classmethod
    def from_json(cls, d: dict) -> CoefficientValue:
        return CoefficientGroup.from_json(d)(d["value"])

    def __str__(self) -> str:
        return f"{self.value} in {self.group}"


def add(a: CoefficientValue, b: CoefficientValue) -> CoefficientValue:
    return a + b


def norm(a: CoefficientValue) -> Fraction:
    return a.norm()
