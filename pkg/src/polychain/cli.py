"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a verification that did not hold.
With ``--json`` every command prints one report object on stdout; rationals are
"p/q" strings and floats appear only as interval endpoints.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import lab, reproduce
from .chains import Chain, cartesian_product
from .errors import PolychainError
from .exact import fmt_rational, to_rational
from .flatnorm import CubicalComplex, cross_mass_bounds, flat_norm, rasterize, tensor_flat_norm
from .slicing import coarea_bound, j_vanishing_test, slice_at, splitting_test
from .tensor import TensorChain, chi, chi_wedge, dyadic_collapse, j_decompose

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


# ---------------------------------------------------------------------------
# parsing helpers


def _read_json(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _load_chain(path: str) -> Chain:
    return Chain.from_json(_read_json(path))


def _load_tensor(path: str) -> TensorChain:
    return TensorChain.from_json(_read_json(path))


def _axes(text: str) -> tuple[int, ...]:
    """'1,3' (1-based) -> (0, 2)."""
    axes = tuple(int(a) - 1 for a in text.split(",") if a.strip())
    if any(a < 0 for a in axes):
        raise ValueError("axes are 1-based")
    return axes


def _rationals(text: str) -> list[Fraction]:
    return [to_rational(Fraction(x.strip())) for x in text.split(",") if x.strip()]


def _box(text: str, n: int) -> list[tuple[Fraction | None, Fraction | None]]:
    """'lo:hi,lo:hi' with empty bounds meaning infinite, one pair per axis."""
    parts = text.split(",")
    if len(parts) != n:
        raise ValueError(f"box needs {n} 'lo:hi' pairs")
    out = []
    for part in parts:
        lo, _, hi = part.partition(":")
        out.append((Fraction(lo) if lo.strip() else None, Fraction(hi) if hi.strip() else None))
    return out


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(math.gcd(a.numerator * b.denominator, b.numerator * a.denominator),
                    a.denominator * b.denominator)


def auto_complex(c: Chain, pad: int, n1: int | None) -> CubicalComplex:
    """Coarsest grid with every vertex on it, padded by ``pad`` cells per side."""
    origin, spacing, extents = [], [], []
    for a in range(c.ambient_dim):
        xs = sorted(c.vertex_coordinates(a)) or [Fraction(0)]
        h = Fraction(0)
        for x in xs[1:]:
            h = _frac_gcd(h, x - xs[0]) if h else x - xs[0]
        h = h or Fraction(1)
        origin.append(xs[0] - pad * h)
        spacing.append(h)
        extents.append(int((xs[-1] - xs[0]) / h) + 2 * pad)
    return CubicalComplex(origin, spacing, extents, n1)


def _chain_for_norm(args) -> Chain:
    if args.example:
        name, _, ell = args.example.partition(":")
        if name != "four-corner":
            raise ValueError("the only built-in example is four-corner[:ell]")
        return reproduce.four_corner(Fraction(ell) if ell else Fraction(1))
    if not args.chain:
        raise ValueError("give a chain file or --example")
    return _load_chain(args.chain)


def _grid(args, c: Chain, n1: int | None):
    if args.complex:
        cx = CubicalComplex.parse(args.complex, n1)
    else:
        cx = auto_complex(c, args.pad, n1)
    return rasterize(c, cx)


def _verdict(v) -> dict:
    return v.to_json()


# ---------------------------------------------------------------------------
# commands: each returns (results, verdicts) and may raise VerificationFailed


def cmd_info(args):
    c = _load_chain(args.chain)
    report = c.mass(certify_overlap=True)
    return {"ambient": c.ambient_dim, "dim": c.dim, "group": c.group.to_json(), "cells": len(c),
            "certified": report.certified, "stored_mass": report.total.to_json(args.width)}, {}


def cmd_boundary(args):
    return {"chain": _load_chain(args.chain).boundary().to_json()}, {}


def cmd_mass(args):
    c = _load_chain(args.chain)
    if args.true:
        return {"mass": c.true_mass().to_json(args.width), "status": "exact"}, {}
    rep = c.mass(certify_overlap=True)
    out = {"mass": rep.total.to_json(args.width), "certified": rep.certified,
           "status": "exact" if rep.certified else "possible overestimate"}
    if not rep.certified:
        out["overlaps"] = [list(p) for p in rep.overlaps]
    return out, {}


def cmd_restrict(args):
    c = _load_chain(args.chain)
    return {"chain": c.restrict_box(_box(args.box, c.ambient_dim)).to_json()}, {}


def cmd_product(args):
    return {"chain": cartesian_product(_load_chain(args.first), _load_chain(args.second)).to_json()}, {}


def cmd_slice(args):
    c = _load_chain(args.chain)
    return {"chain": slice_at(c, _axes(args.gamma), _rationals(args.at)).to_json()}, {}


def cmd_coarea(args):
    c = _load_chain(args.chain)
    return {"coarea_bound": coarea_bound(c, _axes(args.gamma)).to_json(args.width)}, {}


def cmd_split_test(args):
    v = splitting_test(_load_chain(args.chain), args.k1, args.k2, args.n1)
    return {}, {"split": _verdict(v)}


def cmd_jtype_test(args):
    v = j_vanishing_test(_load_chain(args.chain), args.k1, args.k2, args.n1)
    return {}, {"j_vanishing": _verdict(v)}


def cmd_jdecompose(args):
    parts = j_decompose(_load_chain(args.chain), args.n1)
    return {"components": {f"{t.k1},{t.k2}": tc.to_json() for t, tc in sorted(
        parts.items(), key=lambda kv: tuple(kv[0]))}}, {}


def cmd_embed(args):
    return {"chain": _load_tensor(args.tensor).embed().to_json()}, {}


def cmd_chi(args):
    data = _read_json(args.chain)
    if "split" in data:
        value = chi_wedge(TensorChain.from_json(data))
    else:
        value = chi(Chain.from_json(data))
    return {"chi": value.to_json()}, {}


def cmd_collapse(args):
    return {"tensor": dyadic_collapse(_load_tensor(args.tensor), args.level).to_json()}, {}


def _expect(args, value: Fraction, results: dict) -> None:
    if args.expect is not None and value != Fraction(args.expect):
        raise VerificationFailed({**results, "expected": args.expect})


def cmd_flatnorm(args):
    c = _chain_for_norm(args)
    res = flat_norm(_grid(args, c, None), args.method, args.pad_check)
    out = res.to_json()
    _expect(args, res.value, out)
    return out, {}


def cmd_tflatnorm(args):
    c = _chain_for_norm(args)
    n1 = args.n1 if args.n1 is not None else c.ambient_dim // 2
    g = _grid(args, c, n1)
    types = g.types()
    if args.k1 is None:
        if len(types) != 1:
            raise ValueError("chain mixes types; pass --k1 and --k2")
        (t,) = types
        k1, k2 = t.k1, t.k2
    else:
        k1, k2 = args.k1, args.k2
    res = tensor_flat_norm(g, k1, k2, args.method, args.pad_check)
    out = res.to_json()
    _expect(args, res.value, out)
    return out, {}


def cmd_crossmass(args):
    c = _load_chain(args.chain)
    b = cross_mass_bounds(c, args.n1, args.k)
    out = b.to_json()
    out["lower"] = b.lower.to_json(args.width)
    out["upper"] = b.upper.to_json(args.width)
    return out, {}


def cmd_lab_staircase(args):
    a1, a2 = lab.build_staircase(lab.StaircaseSpec(args.level), jump_at_one=args.jump_at_one)
    end = lab.staircase_endpoint(args.level)
    out: dict[str, Any] = {"level": args.level, "A1": a1.to_json(), "A2": a2.to_json(),
                           "endpoint": [fmt_rational(x) for x in end],
                           "mass_A1": fmt_rational(a1.true_mass().as_rational())}
    if args.boundary_growth:
        out["boundary_growth"] = [r.to_json() for r in lab.staircase_boundary_growth(args.level)]
    return out, {}


def cmd_lab_counterexample(args):
    if args.spec:
        spec = lab.ThetaGraphSpec.from_json(_read_json(args.spec))
    else:
        spec = lab.default_theta_spec(args.default)
    tensor, report = lab.build_counterexample(spec, verify=args.verify)
    out = {"spec": spec.to_json(), "report": report.to_json()}
    if args.emit_chain:
        out["tensor"] = tensor.to_json()
    if args.verify and not report.ok:
        raise VerificationFailed(out)
    return out, {"ok": report.ok} if args.verify else {}


def cmd_lab_ip_search(args):
    res = lab.decomposition_lower_bound_search(args.n, args.terms, args.bound, args.node_limit)
    out = res.to_json()
    if args.verify and not (res.parity_ok and res.min_found is not None and res.min_found >= 4 * (args.n - 1)):
        raise VerificationFailed(out)
    return out, {}


def _run_criterion(args: tuple[int, int]) -> dict:
    number, seed = args
    return reproduce.CRITERIA[number - 1](seed).to_json()


def cmd_reproduce_all(args):
    only = [int(x) for x in args.only.split(",")] if args.only else list(range(1, len(reproduce.CRITERIA) + 1))
    jobs = [(n, args.seed) for n in only]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(_run_criterion, jobs))
    else:
        rows = [_run_criterion(j) for j in jobs]
    passed = all(r["pass"] for r in rows)
    out = {"criteria": rows, "all_pass": passed}
    if not args.json:
        for r in rows:
            print(f"[{'PASS' if r['pass'] else 'FAIL'}] criterion {r['criterion']}: {r['title']}")
    if not passed:
        raise VerificationFailed(out)
    return out, {}


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--json", action="store_true", help="print a JSON report on stdout")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized suites (default 0)")
    g.add_argument("--threads", type=int, default=1, help="worker processes for suite items")
    g.add_argument("--pad-check", action="store_true", help="re-solve norms on a padded complex")
    g.add_argument("--tolerance", default="1/1000000000000",
                   help="width of printed certified intervals (rational, default 1e-12)")
    g.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="polychain", description="Exact polyhedral chains, slices and flat norms.",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(fn=fn)
        return p

    add("info", cmd_info, "summarize a chain").add_argument("chain")
    add("boundary", cmd_boundary, "boundary of a chain").add_argument("chain")
    p = add("mass", cmd_mass, "mass of a chain")
    p.add_argument("chain")
    p.add_argument("--true", action="store_true", help="refine overlaps away first (always exact)")
    p = add("restrict", cmd_restrict, "restriction to an open box")
    p.add_argument("chain")
    p.add_argument("--box", required=True, help="'lo:hi,...' per axis, empty bound = infinite")
    p = add("product", cmd_product, "cartesian product of two chains")
    p.add_argument("first")
    p.add_argument("second")
    p = add("slice", cmd_slice, "slice by coordinate planes")
    p.add_argument("chain")
    p.add_argument("--gamma", required=True, help="1-based sliced axes, e.g. 1,3")
    p.add_argument("--at", required=True, help="levels, e.g. 1/3,2/7")
    p = add("coarea", cmd_coarea, "integral of slice masses over stored cells")
    p.add_argument("chain")
    p.add_argument("--gamma", required=True)
    for name, fn in (("split-test", cmd_split_test), ("jtype-test", cmd_jtype_test)):
        p = add(name, fn, "splitting test" if name == "split-test" else "vanishing of one type component")
        p.add_argument("chain")
        p.add_argument("--k1", type=int, required=True)
        p.add_argument("--k2", type=int, required=True)
        p.add_argument("--n1", type=int, required=True)
    p = add("jdecompose", cmd_jdecompose, "type components of a product-cell chain")
    p.add_argument("chain")
    p.add_argument("--n1", type=int, required=True)
    add("embed", cmd_embed, "embed a tensor chain as a chain").add_argument("tensor")
    add("chi", cmd_chi, "augmentation of a 0-chain or (0,0) tensor chain").add_argument("chain")
    p = add("collapse", cmd_collapse, "dyadic collapse of a (0,k) tensor chain")
    p.add_argument("tensor")
    p.add_argument("--level", type=int, required=True)
    for name, fn in (("flatnorm", cmd_flatnorm), ("tflatnorm", cmd_tflatnorm)):
        p = add(name, fn, "flat norm" if name == "flatnorm" else "tensor flat norm")
        p.add_argument("chain", nargs="?")
        p.add_argument("--example", help="built-in chain: four-corner[:ell]")
        p.add_argument("--complex", help="'o1,o2;h;e1,e2' (default: coarsest fitting grid)")
        p.add_argument("--pad", type=int, default=1, help="padding cells for the default grid")
        p.add_argument("--method", choices=["auto", "exact", "float"], default="auto")
        p.add_argument("--expect", help="exit 2 unless the value equals this rational")
        if name == "tflatnorm":
            p.add_argument("--n1", type=int)
            p.add_argument("--k1", type=int)
            p.add_argument("--k2", type=int)
    p = add("crossmass", cmd_crossmass, "bounds M <= cross mass <= sqrt(m) M")
    p.add_argument("chain")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--k", type=int)

    labp = sub.add_parser("lab", help="concrete constructions", parents=[common])
    labsub = labp.add_subparsers(dest="lab_command", required=True)
    p = labsub.add_parser("staircase", parents=[common], help="truncated dyadic staircase")
    p.set_defaults(fn=cmd_lab_staircase)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--boundary-growth", action="store_true")
    p.add_argument("--jump-at-one", action="store_true", help="also fill the jump at x = 1")
    p = labsub.add_parser("counterexample", parents=[common], help="theta-graph (1,1) cycle")
    p.set_defaults(fn=cmd_lab_counterexample)
    p.add_argument("--spec", help="ThetaGraphSpec JSON file")
    p.add_argument("--default", default="near-unit", choices=list(lab.DEFAULT_SPECS))
    p.add_argument("--verify", action="store_true")
    p.add_argument("--emit-chain", action="store_true")
    p = labsub.add_parser("ip-search", parents=[common], help="integer decomposition lower bound")
    p.set_defaults(fn=cmd_lab_ip_search)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--node-limit", type=int, default=2_000_000)
    p.add_argument("--verify", action="store_true", help="exit 2 unless the 4(N-1) bound and parity hold")

    p = add("reproduce-all", cmd_reproduce_all, "run the reproduction suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _inputs_hash(args, argv: Sequence[str]) -> str:
    h = hashlib.sha256("\0".join(argv).encode())
    for key in ("chain", "tensor", "first", "second", "spec"):
        path = getattr(args, key, None)
        if path and path != "-" and Path(path).exists():
            h.update(Path(path).read_bytes())
    return h.hexdigest()[:16]


def _print_human(results: dict, verdicts: dict) -> None:
    for key, value in {**results, **verdicts}.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        print(f"{key}: {value}")


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    start = time.perf_counter()
    code = EXIT_OK
    try:
        args.width = Fraction(args.tolerance)
        results, verdicts = args.fn(args)
    except VerificationFailed as exc:
        results, verdicts, code = exc.report, {"verification": "failed"}, EXIT_VERIFY
    except (PolychainError, ValueError, KeyError, OSError, json.JSONDecodeError, ZeroDivisionError) as exc:
        message = f"{type(exc).__name__}: {exc}"
        if args.json:
            print(json.dumps({"command": argv, "error": message}, sort_keys=True))
        else:
            print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        report = {"command": argv, "inputs_hash": _inputs_hash(args, argv), "results": results,
                  "verdicts": verdicts, "exit_code": code}
        if args.timing:
            report["timing_s"] = round(time.perf_counter() - start, 6)
        print(json.dumps(report, sort_keys=True))
    elif args.command != "reproduce-all":
        _print_human(results, verdicts)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()


__all__ = ["run", "main", "build_parser", "auto_complex", "EXIT_OK", "EXIT_INPUT", "EXIT_VERIFY"]
