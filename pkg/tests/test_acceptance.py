"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from lvvmf import growth as gh
from lvvmf import jordan as jb
from lvvmf import logexp as lx
from lvvmf import qseries as qs
from lvvmf import rep as rp
from lvvmf.logexp import Poly, PolySeries
from lvvmf.sl2z import (EichlerWord, eichler_decompose, eichler_length, enumerate_gamma,
                        fibonacci_family, lame_sweep)
from lvvmf.sweeps import word_sweep
from lvvmf.wordsearch import search_words


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


@pytest.fixture(scope="module")
def sweep200():
    t0 = time.perf_counter()
    sw = word_sweep(200, 200, workers=1)
    return sw, time.perf_counter() - t0


def test_roundtrip_and_signs(sweep200, report):
    sw, secs = sweep200
    ok = not sw.roundtrip_failures and not sw.sign_failures and secs < 60
    report(1, ok, f"{sw.count} gammas, {len(sw.roundtrip_failures)} round-trip and "
                  f"{len(sw.sign_failures)} sign violations, {secs:.1f}s")


def test_first_column_dichotomy(sweep200, report):
    sw, _ = sweep200
    report(2, not sw.dichotomy_failures, f"{len(sw.dichotomy_failures)} dichotomy violations")


def test_product_inequalities(sweep200, report):
    sw, _ = sweep200
    worst = max(r.max_ratio for r in sw.rows)
    report(3, not sw.prop3_failures and worst <= 1,
           f"{len(sw.prop3_failures)} violations, worst lhs/rhs {worst}")


def test_uniqueness(report):
    t0 = time.perf_counter()
    c_max = 30
    # a competing word T^{l0}-shifts d by c l0, so |l0| <= 4 c_max + 2 covers |d| <= c_max
    table = search_words(c_max, 4 * c_max + 2)
    bad, count = [], 0
    for g in enumerate_gamma(c_max, c_max):
        w = eichler_decompose(g)
        limit = eichler_length(w) + 4
        hits = [e for e in table[(g.a, g.b, g.c, g.d)]
                if eichler_length(EichlerWord(1, e)) <= limit]
        count += 1
        if hits != [w.exponents]:
            bad.append((g, hits))
    secs = time.perf_counter() - t0
    report(4, not bad and secs < 300, f"{count} gammas, {len(bad)} without a unique word, {secs:.1f}s")


def test_lame_ratio(report):
    fam = fibonacci_family(10**4)
    fib_sup = max(r for *_, r in fam)
    sweep = lame_sweep(2000)
    ok = fib_sup < float("inf") and sweep.sup_ratio <= fib_sup
    report(5, ok, f"Fibonacci sup {fib_sup:.6f} (c <= 1e4), enumerated sup {sweep.sup_ratio:.6f} "
                  f"at (a, c) = {sweep.argmax} over {sweep.classes} classes (c <= 2000)")


def test_b_matrix_identity(report):
    ident = all(lx.is_identity(lx.polymatrix_mul(lx.b_matrix(m), lx.b_matrix_inverse(m)))
                for m in range(1, 13))
    vanish = all(p == Poly() for m in range(1, 7) for p in lx.vanishing_brackets(m))
    report(6, ident and vanish, f"B_m B_m^-1 = I for m <= 12: {ident}; vanishing for m <= 6: {vanish}")


def test_block_transform(report):
    D = qs.delta_series(200)
    g = [PolySeries.of(D), PolySeries.of(D).times_poly(Poly.x())]
    p = lx.h_from_components(g)
    rng = random.Random(0)
    taus = [complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2.0)) for _ in range(20)]
    rep = lx.verify_block_transform(g, 1, taus)
    err = max(rep.max_rel_error_g, rep.max_rel_error_h)
    ok = p.h[1].is_zero() and p.h[0].equals(D) and err < 1e-9
    report(7, ok, f"second h-series zero: {p.h[1].is_zero()}, max rel error {err:.2e}")


def test_jordan_norm_bound(report):
    rng = random.Random(1)
    changes, law_bad = [], 0
    for m in range(7):
        spec = rp.sym_power_rep(m).jordan
        running, at_1e3 = Fraction(0), None
        for l, r in jb.norm_ratios(spec, 10**4):
            running = max(running, r)
            if l == 10**3:
                at_1e3 = running
        changes.append(float(abs(running - at_1e3)))
        for _ in range(10**3):
            l1, l2 = rng.randint(-10**4, 10**4), rng.randint(-10**4, 10**4)
            for b in spec.blocks:
                lhs = jb.block_power(b, l1 + l2)
                law_bad += not jb.exact_equal(lhs, jb.exact_matmul(jb.block_power(b, l1),
                                                                   jb.block_power(b, l2)))
    ok = max(changes) < 1e-6 and law_bad == 0
    report(8, ok, f"max change 1e3 -> 1e4 over m <= 6: {max(changes):.1e}, group-law failures {law_bad}")


def test_norm_bound_chain(report):
    chain_bad, checked = 0, 0
    for m in range(5):
        rep = rp.sym_power_rep(m)
        for _, w in rp.enumerated_words(100, 100):
            if not isinstance(w, EichlerWord):
                continue
            for inv in (False, True):
                checked += 1
                chain_bad += not rp.bound_chain(rep, w, inverse=inv).ok
    fits = {m: rp.fit_polynomial_exponent(rp.sym_power_rep(m), 200) for m in range(5)}
    fit_bad = sum(k.violations for k in fits.values())
    inv_bad = sum(k.inverse_violations for k in fits.values())
    k4 = ", ".join(f"m={m}: {k.K4:.3f}" for m, k in fits.items())
    report(9, chain_bad == 0 and fit_bad == 0,
           f"{checked} chain checks, {chain_bad} violations; held-out even c: {fit_bad} violations "
           f"(inverse, informational: {inv_bad}); K4 {k4}")


def test_slash_covariance(report):
    F = gh.build_named("sym1-delta", 60)
    res = gh.slash_check(F, gh.slash_gammas(5), gh.sample_taus(10, seed=0, im_min=0.3), tol=1e-8,
                         min_order=60)
    ok = res.ok and F.k == 11
    report(10, ok, f"{len(gh.slash_gammas(5))} gammas x 10 points, max rel error "
                   f"{res.max_rel_error:.2e}, series orders used {sorted(set(res.orders_used))}")


def test_growth_desk_scale(report):
    t0 = time.perf_counter()
    F = gh.build_named("sym1-delta", 2000)
    rep = gh.coefficient_growth(F, 100, 2000)
    D = qs.delta_series(5)
    head = [int(D[n]) for n in range(1, 6)]
    oracle = [1, -24, 252, -1472, 4830]
    secs = time.perf_counter() - t0
    ok = (rep.kind == qs.CUSPIDAL and 5.4 <= rep.beta <= 6.1 and rep.beta <= rep.bound
          and head == oracle and [int(F.blocks[0].h[0][n]) for n in range(1, 6)] == oracle
          and secs < 30)
    report(11, ok, f"{rep.kind}, beta {rep.beta:.4f} <= (k+alpha)/2 = {rep.bound:.4f} "
                   f"(alpha {rep.alpha:.4f}), tau(1..5) = {head}, {secs:.1f}s")


def test_cuspidal_boundedness(report):
    F = gh.build_named("sym1-delta", 200)
    lo = gh.fundamental_domain_sup(F, 5.5, 0, height_cap=25).sup
    hi = gh.fundamental_domain_sup(F, 5.5, 0, height_cap=50).sup
    change = abs(hi - lo) / lo
    report(12, change < 0.01, f"sup {lo:.10f} at cap 25, {hi:.10f} at cap 50, change {change:.2e}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
