"""Reproduction suite: nine checks on exact finite instances, one result per check.

Each ``criterion_N`` returns a :class:`CriterionResult`; :func:`run_all` runs
the lot. The pytest acceptance file and the ``reproduce-all`` subcommand both
call into this module, so the two can never drift apart.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .chains import Chain
from .coeff import CoefficientGroup
from .errors import NonGenericBox, NonGenericLevel, NonGenericPoint
from .exact import RadicalSum, fmt_rational
from .flatnorm import (CubicalComplex, GridChain, flat_norm, flat_norm_bruteforce, rasterize,
                       tensor_flat_norm, tensor_flat_norm_bruteforce)
from .lab import (StaircaseSpec, build_counterexample, build_staircase, decomposition_lower_bound_search,
                  default_theta_spec, staircase_boundary_growth, staircase_endpoint)
from .slicing import Split, Unknown, Vanishes, j_vanishing_test, slice_at, splitting_test, types_of_dim
from .tensor import TensorChain, chi, dyadic_collapse, j_decompose
from . import samples


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    limit: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.limit is None or self.seconds < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.2f}s" + (f" (limit {self.limit:g}s)" if self.limit else "")
        return f"[{verdict}] criterion {self.number}: {self.title} [{timing}]"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "pass": self.ok,
                "checks_pass": self.passed, "within_time": self.within_time,
                "limit_s": self.limit, "details": self.details}


def _timed(number: int, title: str, limit: float | None, body: Callable[[], tuple[bool, dict]]) -> CriterionResult:
    start = time.perf_counter()
    passed, details = body()
    return CriterionResult(number, title, passed, time.perf_counter() - start, limit, details)


def four_corner(ell) -> Chain:
    """⟦0,0⟧ − ⟦ℓ,0⟧ + ⟦ℓ,ℓ⟧ − ⟦0,ℓ⟧ with the signs arranged so that χ = 0."""
    return Chain(2, 0, CoefficientGroup.integers(),
                 [(((0, 0),), -1), (((ell, 0),), 1), (((ell, ell),), -1), (((0, ell),), 1)])


# ---------------------------------------------------------------------------
# 1. flat norm reference values


def criterion_1(seed: int = 0) -> CriterionResult:
    def body():
        cx = CubicalComplex((-1, -1), 1, (3, 3), n1=1)
        g = rasterize(four_corner(1), cx)
        f = flat_norm(g, pad_check=True)
        fw = tensor_flat_norm(g, 0, 0, pad_check=True)
        ok = f.value == 2 and fw.value == 1 and f.pad_value == 2 and fw.pad_value == 1
        return ok, {"flat_norm": fmt_rational(f.value), "tensor_flat_norm": fmt_rational(fw.value),
                    "pad_stable": f.pad_value == f.value and fw.pad_value == fw.value}
    return _timed(1, "four-corner flat norm 2 and tensor flat norm 1", 5, body)


# ---------------------------------------------------------------------------
# 2. counterexample mass


def criterion_2(seed: int = 0) -> CriterionResult:
    def body():
        details = {}
        ok = True
        for name in ("near-unit", "sqrt2"):
            spec = default_theta_spec(name)
            _, rep = build_counterexample(spec)
            ell = spec.common_length
            width = max(rep.mass.interval(Fraction(1, 10**10)).width,
                        ell.interval(Fraction(1, 10**10)).width)
            good = (rep.mass_certified and rep.mass == ell * ell * 6 and rep.boundary_zero
                    and rep.slice_mass == 6 and width < Fraction(1, 10**9))
            ok = ok and good
            details[name] = {"mass": str(rep.mass), "length": str(ell), "boundary_zero": rep.boundary_zero,
                             "slice_mass": fmt_rational(rep.slice_mass), "interval_width": float(width),
                             "ok": good}
        return ok, details
    return _timed(2, "counterexample mass 6ℓ², zero boundary, slice mass 6", 10, body)


# ---------------------------------------------------------------------------
# 3. decomposition lower bound


def criterion_3(seed: int = 0, epsilon: Fraction = Fraction(1, 10)) -> CriterionResult:
    def body():
        r3 = decomposition_lower_bound_search(3, 3, 2)
        again = decomposition_lower_bound_search(3, 3, 2)
        r5 = decomposition_lower_bound_search(5, 4, 2)
        spec = default_theta_spec("near-unit")
        ell2 = spec.common_length * spec.common_length
        mass = ell2 * 6
        # Σ M(A¹_j) M(A²_j) ≥ min_found ≥ (4/3 − ε) M(A) for the near-unit spec
        ratio_ok = RadicalSum.rational(r3.min_found) >= mass * (Fraction(4, 3) - epsilon)
        ok = (r3.min_found == 8 and r3.parity_ok and r3.to_json() == again.to_json()
              and r5.min_found is not None and r5.min_found >= 16 and r5.parity_ok and ratio_ok)
        return ok, {"N3": r3.to_json(), "N5_min": r5.min_found, "ratio_ok": ratio_ok,
                    "ell_squared": str(ell2)}
    return _timed(3, "integer decomposition minimum 8 (N=3), at least 16 (N=5)", 60, body)


# ---------------------------------------------------------------------------
# 4. splitting versus j-vanishing


def criterion_4(seed: int = 0, count: int = 200) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        agree = 0
        unknown = 0
        mismatches = []
        kinds = {"Split": 0, "NotSplit": 0}
        for trial in range(count):
            n = rng.choice([2, 3, 4])
            n1 = rng.randint(1, n - 1)
            k = rng.choice([1, 2]) if n > 2 else 1
            c, labels = samples.separated_chain(rng, n, n1, k, rng.randint(1, 3),
                                                oblique_prob=rng.choice([0.0, 0.3, 0.6]))
            types = types_of_dim(k, n1, n - n1)
            product_labels = [l for l in labels if l != "oblique"]
            if product_labels and rng.random() < 0.7:
                k1, k2 = map(int, product_labels[0].split(","))
            else:
                k1, k2 = tuple(rng.choice(types))
            split = isinstance(splitting_test(c, k1, k2, n1), Split)
            verdicts = [j_vanishing_test(c, t.k1, t.k2, n1) for t in types if (t.k1, t.k2) != (k1, k2)]
            unknown += sum(1 for v in verdicts if isinstance(v, Unknown))
            vanish = all(isinstance(v, Vanishes) for v in verdicts)
            kinds["Split" if split else "NotSplit"] += 1
            if split == vanish:
                agree += 1
            else:
                mismatches.append(trial)
        return agree == count, {"agree": agree, "total": count, "unknown_verdicts": unknown,
                                "verdicts": kinds, "mismatched_trials": mismatches[:10]}
    return _timed(4, "splitting test agrees with off-type j-vanishing", 60, body)


# ---------------------------------------------------------------------------
# 5. algebraic identities


def criterion_5(seed: int = 0, count: int = 500) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        failures: dict[str, int] = {}

        def check(name: str, cond: bool) -> None:
            failures.setdefault(name, 0)
            if not cond:
                failures[name] += 1

        for _ in range(count):
            group = samples.random_group(rng)
            n = rng.choice([2, 3, 4])
            k = rng.randint(1, min(3, n))
            c = samples.random_chain(rng, n, k, rng.randint(1, 3), group)
            check("boundary_squared", not c.boundary().boundary())

            n1, n2 = rng.choice([(1, 1), (1, 2), (2, 1), (2, 2)])
            k1, k2 = rng.randint(0, n1), rng.randint(0, n2)
            t = samples.random_tensor_chain(rng, (n1, n2), (k1, k2), rng.randint(1, 2), group)
            check("d1_squared", not t.d1().d1())
            check("d2_squared", not t.d2().d2())
            check("d1d2_anticommute", t.d1().d2() == -(t.d2().d1()))
            if k1 + k2 >= 1:
                lhs = t.embed().boundary()
                rhs = t.d1().embed() + t.d2().embed() if k1 and k2 else (
                    t.d1().embed() if k1 else t.d2().embed())
                check("boundary_of_embed", lhs == rhs or lhs.equivalent(rhs))
            check("i_round_trip", t.i_map().i_inverse() == t)

            # mass additivity of the type decomposition on separated pieces
            kk = rng.randint(1, 2)
            pieces = [TensorChain((n1, n2), (a, kk - a), CoefficientGroup.integers(),
                                  [(samples.random_simplex(rng, n1, a, (Fraction(20 * i),) + (Fraction(0),) * (n1 - 1)),
                                    samples.random_simplex(rng, n2, kk - a), rng.choice([-2, -1, 1, 2]))])
                      for i, a in enumerate(a for a in range(kk + 1) if a <= n1 and kk - a <= n2)]
            whole = Chain(n1 + n2, kk, CoefficientGroup.integers())
            for p in pieces:
                whole = whole + p.embed()
            parts = j_decompose(whole, n1)
            total = RadicalSum.sum(p.embed().true_mass() for p in parts.values())
            check("j_mass_additivity", total == whole.true_mass() and len(parts) == len(pieces))

            b = samples.random_chain(rng, n, 1, rng.randint(1, 3), group)
            check("chi_of_boundary", chi(b.boundary()).is_zero())

            # 2·p¹ ∧ 1̄·p² = 0 over Z/2
            z2 = CoefficientGroup.mod(2)
            p1 = Chain(n1, k1, CoefficientGroup.integers(), [(samples.random_simplex(rng, n1, k1), 2)])
            p2 = Chain(n2, k2, z2, [(samples.random_simplex(rng, n2, k2), 1)])
            check("z2_annihilation", bool(p1) and bool(p2) and not TensorChain.wedge(p1, p2))
        return sum(failures.values()) == 0, {"instances_per_identity": count, "failures": failures}
    return _timed(5, "algebraic identity suite", 120, body)


# ---------------------------------------------------------------------------
# 6. slice calculus


def _generic_level(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-300, 300), 97)


def criterion_6(seed: int = 0, points: int = 100, chains: int = 6, levels: int = 50) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        fails = {"chain_slice_boundary": 0, "tensor_d1": 0, "tensor_d2": 0,
                 "halfspace_formula": 0, "coarea_riemann": 0}
        checked = dict.fromkeys(fails, 0)
        # ∂ Sl = Sl ∂ on chains
        for _ in range(chains):
            n = rng.choice([3, 4])
            k = rng.choice([2, 3]) if n == 4 else 2
            c = samples.random_chain(rng, n, k, 3)
            db = c.boundary()
            done = 0
            while done < points:
                r = rng.randint(1, k - 1)
                gamma = tuple(sorted(rng.sample(range(n), r)))
                x = [_generic_level(rng) for _ in gamma]
                try:
                    lhs = slice_at(c, gamma, x).boundary()
                    rhs = slice_at(db, gamma, x)
                except NonGenericPoint:
                    continue
                done += 1
                checked["chain_slice_boundary"] += 1
                if not (lhs == rhs or lhs.equivalent(rhs)):
                    fails["chain_slice_boundary"] += 1
        # tensor slices: ∂1 Sl = Sl ∂1 and ∂2 Sl = (−1)^{|γ¹|} Sl ∂2
        for _ in range(chains):
            split = rng.choice([(2, 2), (2, 1), (1, 2)])
            k1, k2 = rng.randint(1, split[0]), rng.randint(1, split[1])
            t = samples.random_tensor_chain(rng, split, (k1, k2), 2)
            done = 0
            while done < points:
                g1 = rng.sample(range(split[0]), rng.randint(0, k1))
                g2 = [a + split[0] for a in rng.sample(range(split[1]), rng.randint(0, k2))]
                gamma = tuple(sorted(g1 + g2))
                if not gamma:
                    continue
                x = [_generic_level(rng) for _ in gamma]
                try:
                    s = t.slice(gamma, x)
                    if k1 - len(g1) >= 1:
                        checked["tensor_d1"] += 1
                        if s.d1() != t.d1().slice(gamma, x):
                            fails["tensor_d1"] += 1
                    if k2 - len(g2) >= 1:
                        checked["tensor_d2"] += 1
                        rhs = t.d2().slice(gamma, x)
                        if s.d2() != (rhs if len(g1) % 2 == 0 else -rhs):
                            fails["tensor_d2"] += 1
                except NonGenericPoint:
                    continue
                done += 1
        # half-space boundary formula: ∂(A⌞H) = (∂A)⌞H + (−1)^k A ∩ {x_i = s}
        done = 0
        while done < levels:
            n = rng.choice([2, 3])
            k = rng.randint(1, n)
            a = samples.random_chain(rng, n, k, 2)
            axis, s = rng.randrange(n), _generic_level(rng)
            try:
                section = a.section(axis, s)
                lhs = a.restrict_halfspace(axis, s, ">").boundary()
                rhs = a.boundary().restrict_halfspace(axis, s, ">")
            except (NonGenericLevel, NonGenericBox):
                continue
            done += 1
            checked["halfspace_formula"] += 1
            expected = rhs + (section if k % 2 == 0 else -section)
            if not (lhs == expected or lhs.equivalent(expected)):
                fails["halfspace_formula"] += 1
        # ∫ M(Sl_γ^x A) dx ≤ M(A) by Riemann sums on axis-aligned chains
        h = Fraction(1, 8)
        for n, k in ((2, 1), (2, 2), (3, 1), (3, 2)):
            a = samples.random_grid_chain(rng, n, k, size=3, cells=4)
            mass = float(a.true_mass())
            for r in range(1, k + 1):
                for gamma in itertools.combinations(range(n), r):
                    # tags sit at a different fraction of each cell per axis, which keeps
                    # iterated cuts off the cube diagonals
                    grid = [[-1 + h * (i + Fraction(r + 1, r + 3)) for i in range(int(5 / h))]
                            for r in range(len(gamma))]
                    total = 0.0
                    for x in itertools.product(*grid):
                        total += float(slice_at(a, gamma, x).true_mass())
                    total *= float(h) ** r
                    checked["coarea_riemann"] += 1
                    if total > mass + 1e-6:
                        fails["coarea_riemann"] += 1
        return sum(fails.values()) == 0, {"violations": fails, "checked": checked}
    return _timed(6, "slice calculus: boundary commutation, half-space formula, coarea", None, body)


# ---------------------------------------------------------------------------
# 7. staircase truncations


def criterion_7(seed: int = 0, j_max: int = 10) -> CriterionResult:
    def body():
        rows = staircase_boundary_growth(j_max)
        ok = True
        per_level = []
        for level in range(j_max + 1):
            a1, a2 = build_staircase(StaircaseSpec(level))
            bd = (a1 + a2).boundary()
            end = staircase_endpoint(level)
            atoms = dict(bd.items())
            two_atoms = atoms == {((Fraction(0), Fraction(0)),): -1, (end,): 1}
            good = (a1.true_mass() == 1 and isinstance(splitting_test(a1, 1, 0, 1), Split)
                    and isinstance(splitting_test(a2, 0, 1, 1), Split) and two_atoms)
            per_level.append(good)
            ok = ok and good
        values = [r.boundary_mass for r in rows]
        growth = all(b > a for a, b in zip(values, values[1:])) and all(
            v >= 2**r.level for v, r in zip(values, rows))
        return ok and growth, {"levels_ok": per_level, "boundary_mass": [fmt_rational(v) for v in values],
                               "growth_ok": growth}
    return _timed(7, "staircase truncations J=0..10", 30, body)


# ---------------------------------------------------------------------------
# 8. dyadic collapse


def _random_01_chain(rng: random.Random) -> TensorChain:
    """A (0,1) tensor chain in ℝ¹ × ℝ¹: weighted points times vertical grid segments."""
    terms = []
    for _ in range(rng.randint(2, 4)):
        x = Fraction(rng.randrange(0, 48), 48)
        y0 = rng.randint(0, 5)
        y1 = y0 + rng.randint(1, 2)
        terms.append((((x,),), ((Fraction(y0, 16),), (Fraction(y1, 16),)), rng.choice([-2, -1, 1, 2])))
    return TensorChain((1, 1), (0, 1), CoefficientGroup.integers(), terms)


def criterion_8(seed: int = 0, chains: int = 4, j_top: int = 4) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        h = Fraction(1, 2**j_top)
        cx = CubicalComplex((-h, -h), h, (2**j_top + 2, 10), n1=1)
        violations = 0
        rows = []
        for _ in range(chains):
            t = _random_01_chain(rng)
            n_mass = t.embed().true_mass() + t.d2().embed().true_mass()
            collapsed = [dyadic_collapse(t, j).embed() for j in range(j_top + 1)]
            for i in range(j_top + 1):
                for j in range(i, j_top + 1):
                    diff = collapsed[j] - collapsed[i]
                    value = Fraction(0) if diff.is_zero() else flat_norm(rasterize(diff, cx)).value
                    bound = n_mass * Fraction(1, 2**i)  # √n₁ = 1
                    if not RadicalSum.rational(value) <= bound:
                        violations += 1
                    rows.append((i, j, fmt_rational(value), str(bound)))
        return violations == 0, {"pairs": len(rows), "violations": violations, "sample": rows[:6]}
    return _timed(8, "dyadic collapse flat-norm bound", 60, body)


# ---------------------------------------------------------------------------
# 9. LP oracle


def small_complexes() -> list[CubicalComplex]:
    """Every listed complex has at most 12 cells in total."""
    out = [CubicalComplex((0,), 1, (e,), n1=1) for e in range(1, 6)]
    out.append(CubicalComplex((0, 0), 1, (1, 1), n1=1))
    out += [CubicalComplex((0, 0), 1, (e, 0), n1=1) for e in range(1, 6)]
    out += [CubicalComplex((0, 0), 1, (0, e), n1=1) for e in range(1, 6)]
    return out


def _chains_on(cx: CubicalComplex, k: int, rng: random.Random) -> list[GridChain]:
    cells = cx.cells(k)
    if not cells:
        return []
    if len(cells) <= 4:
        vecs = itertools.product((-1, 0, 1), repeat=len(cells))
    else:
        vecs = [tuple(rng.randint(-2, 2) for _ in cells) for _ in range(25)]
    return [GridChain.from_vector(cx, k, [Fraction(v) for v in vec]) for vec in vecs if any(vec)]


def criterion_9(seed: int = 0) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        checked = mismatches = 0
        for cx in small_complexes():
            assert sum(len(cx.cells(k)) for k in range(cx.n + 1)) <= 12
            for k in range(cx.n + 1):
                for g in _chains_on(cx, k, rng):
                    checked += 1
                    if flat_norm(g, method="exact").value != flat_norm_bruteforce(g):
                        mismatches += 1
                    for t in g.types():
                        if g.types() == {t}:
                            checked += 1
                            if (tensor_flat_norm(g, t.k1, t.k2, method="exact").value
                                    != tensor_flat_norm_bruteforce(g, t.k1, t.k2)):
                                mismatches += 1
        return mismatches == 0, {"programs": checked, "mismatches": mismatches}
    return _timed(9, "simplex optimum equals vertex enumeration on small complexes", None, body)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def run_all(seed: int = 0, only: list[int] | None = None) -> list[CriterionResult]:
    return [fn(seed) for i, fn in enumerate(CRITERIA, start=1) if only is None or i in only]


__all__ = ["CriterionResult", "CRITERIA", "run_all", "four_corner", "small_complexes",
           *[f"criterion_{i}" for i in range(1, 10)]]
