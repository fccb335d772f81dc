"""Exact weighted-l1 linear programs: min Σ w_j |z_j| subject to A z = b.

Both flat norms reduce to this form with A = [I | B ...]. Three solvers share
one certificate format:

* :func:`simplex_l1` runs a dense tableau simplex on exact rationals with
  Bland's rule, after splitting z = z⁺ − z⁻. The identity block gives a
  feasible starting basis, so no phase I is needed.
* :func:`float_certified_l1` asks HiGHS for a vertex, snaps primal and dual to
  rationals and accepts them only if the exact certificate holds.
* :func:`vertex_enumeration_l1` is the brute-force oracle: every nonsingular
  column subset is a candidate vertex.

A certificate (z, y) is valid when A z = b exactly, |Aᵀy|_j ≤ w_j for every j
(dual feasibility) and Σ w_j |z_j| = bᵀy (so complementary slackness holds).
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import Infeasible
from .exact import fmt_rational, solve

SparseColumn = dict[int, Fraction]

ZERO = Fraction(0)


@dataclass
class L1Problem:
    m: int
    columns: list[SparseColumn]
    weights: list[Fraction]
    b: list[Fraction]
    unit_columns: list[int]  # unit_columns[i] is a column equal to e_i

    @property
    def size(self) -> int:
        return self.m * 2 * len(self.columns)


@dataclass
class LPSolution:
    value: Fraction
    z: list[Fraction]
    y: list[Fraction]
    method: str
    pivots: int = 0

    def certificate_hash(self) -> str:
        text = ",".join(fmt_rational(v) for v in self.y)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def objective(p: L1Problem, z: Sequence[Fraction]) -> Fraction:
    return sum((w * abs(v) for w, v in zip(p.weights, z)), ZERO)


def check_certificate(p: L1Problem, z: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    resid = list(p.b)
    for col, v in zip(p.columns, z):
        if v:
            for i, a in col.items():
                resid[i] -= a * v
    if any(resid):
        return False
    for col, w in zip(p.columns, p.weights):
        if abs(sum((a * y[i] for i, a in col.items()), ZERO)) > w:
            return False
    return objective(p, z) == sum((bi * yi for bi, yi in zip(p.b, y)), ZERO)


def simplex_l1(p: L1Problem) -> LPSolution:
    m, ncol = p.m, len(p.columns)
    nvar = 2 * ncol  # j < ncol: +column j, j >= ncol: -column (j - ncol)
    cost = list(p.weights) * 2
    flip = [1 if bi >= 0 else -1 for bi in p.b]
    tab: list[list[Fraction]] = [[ZERO] * (nvar + 1) for _ in range(m)]
    for j, col in enumerate(p.columns):
        for i, a in col.items():
            tab[i][j] = a * flip[i]
            tab[i][j + ncol] = -a * flip[i]
    for i in range(m):
        tab[i][nvar] = p.b[i] * flip[i]
    basis = []
    for i in range(m):
        u = p.unit_columns[i]
        basis.append(u if flip[i] > 0 else u + ncol)
    initial = list(basis)
    red = list(cost) + [ZERO]
    for i, bv in enumerate(basis):
        cb = cost[bv]
        if cb:
            row = tab[i]
            for j in range(nvar + 1):
                if row[j]:
                    red[j] -= cb * row[j]
    pivots = 0
    while True:
        enter = next((j for j in range(nvar) if red[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][nvar] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise Infeasible("unbounded l1 program (weights must be positive)")
        r = best[1]
        prow = tab[r]
        piv = prow[enter]
        prow = [v / piv if v else v for v in prow]
        tab[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(m):
            if i != r:
                f = tab[i][enter]
                if f:
                    row = tab[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        f = red[enter]
        for j in nz:
            red[j] -= f * prow[j]
        basis[r] = enter
        pivots += 1
    x = [ZERO] * nvar
    for i, bv in enumerate(basis):
        x[bv] = tab[i][nvar]
    z = [x[j] - x[j + ncol] for j in range(ncol)]
    y = [flip[i] * (cost[initial[i]] - red[initial[i]]) for i in range(m)]
    sol = LPSolution(objective(p, z), z, y, "exact-simplex", pivots)
    if not check_certificate(p, z, y):
        raise AssertionError("exact simplex produced an invalid certificate")
    return sol


def _snap(values, denominators=(1 << 12, 1 << 20, 10**6, 10**9)) -> list[list[Fraction]]:
    out = []
    for d in denominators:
        out.append([Fraction(float(v)).limit_denominator(d) for v in values])
    return out


def float_certified_l1(p: L1Problem) -> LPSolution | None:
    """HiGHS dual simplex, accepted only with an exact certificate; None otherwise."""
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import csc_matrix

    ncol = len(p.columns)
    rows, cols, vals = [], [], []
    for j, col in enumerate(p.columns):
        for i, a in col.items():
            rows += [i, i]
            cols += [j, j + ncol]
            vals += [float(a), -float(a)]
    a_eq = csc_matrix((vals, (rows, cols)), shape=(p.m, 2 * ncol))
    c = np.array([float(w) for w in p.weights] * 2)
    b = np.array([float(v) for v in p.b])
    res = linprog(c, A_eq=a_eq, b_eq=b, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    zf = res.x[:ncol] - res.x[ncol:]
    for z in _snap(zf):
        for y in _snap(res.eqlin.marginals):
            if check_certificate(p, z, y):
                return LPSolution(objective(p, z), z, y, "float-certified")
    return None


def solve_l1(p: L1Problem, method: str = "auto", exact_limit: int = 40_000) -> LPSolution:
    if method == "exact" or (method == "auto" and p.size <= exact_limit):
        return simplex_l1(p)
    if method in ("auto", "float"):
        sol = float_certified_l1(p)
        if sol is not None:
            return sol
        return simplex_l1(p)
    raise ValueError(f"unknown method {method!r}")


def vertex_enumeration_l1(p: L1Problem) -> Fraction:
    """Brute-force optimum over all basic solutions (column subsets of size m)."""
    m = p.m
    best = None
    dense = [[col.get(i, ZERO) for col in p.columns] for i in range(m)]
    for subset in itertools.combinations(range(len(p.columns)), m):
        sub = [[dense[i][j] for j in subset] for i in range(m)]
        zs = solve(sub, p.b)
        if zs is None:
            continue
        val = sum((p.weights[j] * abs(v) for j, v in zip(subset, zs)), ZERO)
        if best is None or val < best:
            best = val
    if best is None:
        raise Infeasible("no basic solution")
    return best
