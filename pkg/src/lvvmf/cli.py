"""Command line entry point.

Every subcommand prints (or writes with --out) one JSON envelope
{tool, version, config, results, pass}; numbers are serialised as strings.
Exit status is 0 when every check passes, 1 otherwise, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from . import growth as gh
from . import jordan as jb
from . import logexp as lx
from . import qseries as qs
from . import rep as rp
from .sl2z import (EichlerWord, GammaMatrix, eichler_decompose, eichler_length,
                   fibonacci_family, lame_sweep, reconstruct, verify_prop3)
from .sweeps import word_sweep

TOOL = "lvvmf"


def stringify(x):
    """Recursively turn numbers into strings; keep bools, None and structure."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, float, Fraction, np.integer, np.floating)):
        return str(x) if not isinstance(x, float) else repr(x)
    if isinstance(x, complex):
        return [repr(x.real), repr(x.imag)]
    if isinstance(x, dict):
        return {str(k): stringify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [stringify(v) for v in x]
    return str(x)


def envelope(args, results, ok: bool) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    return {"tool": TOOL, "version": __version__, "config": stringify(config),
            "results": stringify(results), "pass": bool(ok)}


def emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_decompose(args):
    try:
        g = GammaMatrix(args.a, args.b, args.c, args.d)
    except ValueError as exc:
        raise UsageError(str(exc))
    w = eichler_decompose(g)
    if not isinstance(w, EichlerWord):
        res = {"translation": True, "sign": w.sign, "shift": w.shift}
        return res, reconstruct(w) == g
    rep = verify_prop3(w, g)
    res = {"sign": w.sign, "exponents": list(w.exponents), "nu": w.nu,
           "length": eichler_length(w), "prop3": rep.as_dict()}
    return res, rep.ok and reconstruct(w) == g


def cmd_verify_prop3(args):
    sweep = word_sweep(args.cmax, args.dmax or args.cmax)
    summary = sweep.summary()
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["c", "d", "nu", "length", "max_ratio"])
        for r in sweep.rows:
            wr.writerow([r.c, r.d, r.nu, r.length, str(r.max_ratio)])
        wr.writerow(["# summary"] + [f"{k}={v}" for k, v in stringify(summary).items()])
        return buf.getvalue(), sweep.ok
    return summary, sweep.ok


def cmd_verify_lame(args):
    fam = fibonacci_family(args.fib_cmax)
    fib_sup = max(r for _, _, r in fam)
    sweep = lame_sweep(args.cmax)
    res = {"fibonacci_sup": fib_sup, "fibonacci_members": len(fam),
           "fibonacci_top": {"nu": fam[-1][0], "c": fam[-1][1]},
           "enumerated_sup": sweep.sup_ratio, "enumerated_argmax": {"a": sweep.argmax[0], "c": sweep.argmax[1]},
           "classes": sweep.classes}
    return res, sweep.sup_ratio <= fib_sup


def _load_rep(args) -> rp.Representation:
    if args.rep:
        rep = rp.load_representation(args.rep)
    else:
        rep = rp.sym_power_rep(args.sym)
    rep.validate()
    return rep


def cmd_verify_norms(args):
    rep = _load_rep(args)
    chain_bad = []
    count = 0
    from .sl2z import enumerate_gamma
    for g in enumerate_gamma(args.chain_cmax, args.chain_cmax):
        w = eichler_decompose(g)
        for inv in (False, True):
            count += 1
            b = rp.bound_chain(rep, w, inverse=inv)
            if not b.ok:
                chain_bad.append({"gamma": [g.a, g.b, g.c, g.d], **b.as_dict()})
    consts = rp.fit_polynomial_exponent(rep, args.cmax)
    res = {"rep": rep.name, "p": rep.p, "K3": consts.K3, "K4": consts.K4, "alpha": consts.alpha,
           "violations": consts.violations, "inverse_violations": consts.inverse_violations,
           "worst_ratio": consts.worst_ratio, "degenerate": consts.degenerate,
           "Kemp": consts.Kemp, "Cs": consts.Cs,
           "bound_chain": {"checked": count, "violations": len(chain_bad), "first": chain_bad[:5]}}
    return res, not chain_bad and consts.violations == 0


def cmd_verify_jordan(args):
    spec = rp.sym_power_rep(args.m).jordan
    ratios = jb.norm_ratios(spec, args.lmax)
    running, out = Fraction(0), {}
    checkpoints = {10**e for e in range(1, 8)} | {args.lmax}
    for l, r in ratios:
        running = max(running, r)
        if l in checkpoints:
            out[l] = float(running)
    rng = random.Random(args.seed)
    law_bad = 0
    for _ in range(args.pairs):
        l1, l2 = rng.randint(-50, 50), rng.randint(-50, 50)
        for b in spec.blocks:
            lhs = jb.block_power(b, l1 + l2)
            rhs = jb.exact_matmul(jb.block_power(b, l1), jb.block_power(b, l2))
            law_bad += not jb.exact_equal(lhs, rhs)
    lo = out.get(10**3)
    change = abs(out[args.lmax] - lo) if lo is not None and args.lmax >= 10**3 else None
    res = {"s": spec.s, "running_max": {str(k): v for k, v in sorted(out.items())},
           "Cs": float(running), "change_1e3_to_end": change, "group_law_failures": law_bad}
    ok = law_bad == 0 and (change is None or change < 1e-6)
    return res, ok


def cmd_verify_bmatrix(args):
    res, ok = {}, True
    for m in range(1, args.mmax + 1):
        ident = lx.is_identity(lx.polymatrix_mul(lx.b_matrix(m), lx.b_matrix_inverse(m)))
        res[str(m)] = ident
        ok &= ident
    van = {str(m): all(p == lx.Poly() for p in lx.vanishing_brackets(m)) for m in range(1, 7)}
    return {"identity": res, "vanishing_identity": van}, ok and all(van.values())


def cmd_jordan_power(args):
    b = jb.ModifiedJordanBlock(args.m, Fraction(args.mu))
    J = jb.block_power(b, args.l)
    return {"m": args.m, "mu": str(b.mu), "l": args.l,
            "entries": [[str(x) for x in row] for row in J.tolist()]}, True


def cmd_bmatrix(args):
    M = lx.b_matrix_inverse(args.m) if args.inverse else lx.b_matrix(args.m)
    return {"m": args.m, "inverse": args.inverse,
            "entries": [[str(p) for p in row] for row in M]}, True


def cmd_qexp_gen(args):
    if args.delta:
        s = qs.delta_series(args.order)
    else:
        s = qs.eisenstein(args.eisenstein, args.order)
    if args.series_out:
        qs.write_series(s, args.series_out)
    head = {str(n): s[n] for n in range(min(args.order, 10) + 1)}
    return {"mu": str(s.mu), "order": s.order, "kind": qs.classify_at_infinity(s),
            "coefficients": head, "file": args.series_out}, True


def _read_expansion(path: Path):
    data = json.loads(path.read_text())
    base = path.parent
    comps = [[(int(t), qs.read_series(base / f)) for t, f in comp] for comp in data["components"]]
    return data.get("basis", "binomial"), comps


def _write_expansion(path: Path, basis: str, comps) -> None:
    path = Path(path)
    entries = []
    for j, comp in enumerate(comps):
        row = []
        for t, s in comp:
            name = f"{path.stem}_c{j}_t{t}.txt"
            qs.write_series(s, path.parent / name)
            row.append([t, name])
        entries.append(row)
    path.write_text(json.dumps({"basis": basis, "components": entries}, indent=1))


def cmd_qexp_convert(args):
    basis, comps = _read_expansion(Path(args.input))
    if basis == args.to or (basis == "binomial" and args.to == "binomial"):
        out_basis, out = basis, comps
    elif basis == "binomial":
        h = [dict(comp)[0] for comp in comps]
        for j, comp in enumerate(comps):
            for t, s in comp:
                if not s.equals(h[j - t]):
                    raise UsageError(f"component {j}: term t={t} is not h_{j - t}")
        logexp = lx.binomial_to_logpower(lx.PolyQExpansion(h))
        out_basis, out = "logpower", [list(enumerate(row)) for row in logexp.terms]
    else:
        terms = []
        for comp in comps:
            d = dict(comp)
            zero = qs.QSeries.zero(comp[0][1].order, comp[0][1].mu)
            terms.append([d.get(u, zero) for u in range(max(d) + 1)])
        p = lx.logpower_to_binomial(lx.LogQExpansion(terms))
        out_basis = "binomial"
        out = [[(t, p.h[j - t]) for t in range(j + 1)] for j in range(p.m)]
    target = Path(args.output)
    _write_expansion(target, out_basis, out)
    return {"from": basis, "to": out_basis, "components": len(out), "file": str(target)}, True


def cmd_growth(args):
    F = gh.build_named(args.example, args.order)
    rep = gh.coefficient_growth(F, args.nmin, args.nmax, c_max=args.fit_cmax)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["block", "j", "n", "re", "im"])
            for bi, block in enumerate(F.blocks):
                for j, h in enumerate(block.h):
                    for n, a in h.items():
                        z = complex(a)
                        wr.writerow([bi, j, n, str(a) if z.imag == 0 else repr(z.real), repr(z.imag)])
    res = rep.as_dict()
    res["tau_head"] = [F.blocks[0].h[0][n] for n in range(1, min(6, F.order + 1))]
    return res, rep.ok


def cmd_slashcheck(args):
    F = gh.build_named(args.example, args.order)
    taus = gh.sample_taus(args.samples, args.seed, im_min=args.im_min)
    rep = gh.slash_check(F, gh.slash_gammas(args.cmax), taus, tol=args.tol, min_order=args.order)
    return rep.as_dict(), rep.ok


# ---------------------------------------------------------------------------
# parser


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog=TOOL, description="Eichler words, log q-expansions and growth checks")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", parents=[common], help="canonical word of a matrix")
    for name in "abcd":
        d.add_argument(name, type=int)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="exhaustive and sampled checks")
    vs = v.add_subparsers(dest="what", required=True)
    x = vs.add_parser("prop3", parents=[common])
    x.add_argument("--cmax", type=int, default=200)
    x.add_argument("--dmax", type=int)
    x.set_defaults(func=cmd_verify_prop3)
    x = vs.add_parser("lame", parents=[common])
    x.add_argument("--cmax", type=int, default=2000)
    x.add_argument("--fib-cmax", type=int, default=10**4)
    x.set_defaults(func=cmd_verify_lame)
    x = vs.add_parser("norms", parents=[common])
    g = x.add_mutually_exclusive_group()
    g.add_argument("--rep", help="representation JSON file")
    g.add_argument("--sym", type=int, default=2, help="use Sym^m (default 2)")
    x.add_argument("--cmax", type=int, default=100)
    x.add_argument("--chain-cmax", type=int, default=50)
    x.set_defaults(func=cmd_verify_norms)
    x = vs.add_parser("jordan", parents=[common])
    x.add_argument("--m", type=int, default=2, help="Sym^m")
    x.add_argument("--lmax", type=int, default=10**4)
    x.add_argument("--pairs", type=int, default=1000)
    x.set_defaults(func=cmd_verify_jordan)
    x = vs.add_parser("bmatrix", parents=[common])
    x.add_argument("--mmax", type=int, default=12)
    x.set_defaults(func=cmd_verify_bmatrix)

    j = sub.add_parser("jordan", help="modified Jordan block tools")
    js = j.add_subparsers(dest="what", required=True)
    x = js.add_parser("power", parents=[common])
    x.add_argument("--m", type=int, required=True)
    x.add_argument("--mu", default="0")
    x.add_argument("--l", type=int, required=True)
    x.set_defaults(func=cmd_jordan_power)

    b = sub.add_parser("bmatrix", parents=[common], help="B_m(x) or its inverse")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--inverse", action="store_true")
    b.set_defaults(func=cmd_bmatrix)

    q = sub.add_parser("qexp", help="q-series generation and conversion")
    qsub = q.add_subparsers(dest="what", required=True)
    x = qsub.add_parser("gen", parents=[common])
    src = x.add_mutually_exclusive_group(required=True)
    src.add_argument("--delta", action="store_true")
    src.add_argument("--eisenstein", type=int, metavar="K")
    x.add_argument("--order", type=int, default=100)
    x.add_argument("--series-out", help="also write the series file here")
    x.set_defaults(func=cmd_qexp_gen)
    x = qsub.add_parser("convert", parents=[common])
    x.add_argument("input")
    x.add_argument("output")
    x.add_argument("--to", choices=("log", "logpower", "binomial"), required=True)
    x.set_defaults(func=cmd_qexp_convert)

    gr = sub.add_parser("growth", parents=[common], help="coefficient growth report")
    gr.add_argument("--example", default="sym1-delta")
    gr.add_argument("--order", type=int, default=2000)
    gr.add_argument("--nmin", type=int, default=100)
    gr.add_argument("--nmax", type=int, default=2000)
    gr.add_argument("--fit-cmax", type=int, default=100)
    gr.add_argument("--csv", help="dump (n, a(n)) of the h-series")
    gr.set_defaults(func=cmd_growth)

    sc = sub.add_parser("slashcheck", parents=[common], help="slash covariance check")
    sc.add_argument("--example", default="sym1-delta")
    sc.add_argument("--cmax", type=int, default=5)
    sc.add_argument("--samples", type=int, default=10)
    sc.add_argument("--order", type=int, default=60)
    sc.add_argument("--im-min", type=float, default=0.3)
    sc.add_argument("--tol", type=float, default=1e-8)
    sc.set_defaults(func=cmd_slashcheck)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "to", None) == "log":
        args.to = "logpower"
    try:
        results, ok = args.func(args)
    except (UsageError, KeyError, ValueError) as exc:
        parser.error(str(exc))  # exits with status 2
    if isinstance(results, str):  # csv
        emit(args, results)
    else:
        emit(args, json.dumps(envelope(args, results, ok), indent=1) + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
