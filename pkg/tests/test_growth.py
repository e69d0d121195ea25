from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvvmf import growth as gh
from lvvmf import qseries as qs
from lvvmf.qseries import QSeries
from lvvmf.sl2z import S, T, GammaMatrix, enumerate_gamma


@pytest.fixture(scope="module")
def sym1_delta():
    return gh.build_named("sym1-delta", 60)


def test_sym1_delta_structure(sym1_delta):
    F = sym1_delta
    assert F.k == 11 and F.kind == qs.CUSPIDAL and F.p == 2
    D = qs.delta_series(60)
    # F = (tau Delta, Delta)
    assert F.components[0].terms[1].equals(D) and F.components[0].terms[0].is_zero()
    assert F.components[1].terms[0].equals(D)
    (block,) = F.blocks
    assert block.h[0].equals(D) and block.h[1].is_zero()


def test_sym0_e4_and_sym2_delta2():
    E = gh.build_named("sym0-e4", 30)
    assert E.k == 4 and E.kind == qs.HOLOMORPHIC and E.p == 1
    F = gh.build_named("sym2-delta2", 60)
    assert F.k == 22 and F.kind == qs.CUSPIDAL and F.p == 3
    (block,) = F.blocks
    assert block.h[0].equals(qs.delta_power(2, 60)) and block.h[1].is_zero() and block.h[2].is_zero()


def test_kind_follows_multiplier():
    for name, (m, mult) in gh.EXAMPLES.items():
        if mult == "zero":
            continue
        F = gh.build_named(name, 20)
        f = gh.MULTIPLIERS[mult].make(20)
        assert F.kind == qs.classify_at_infinity(f), name


def test_non_level_one_rejected():
    D = qs.delta_series(60)
    with pytest.raises(gh.NotLevelOne):
        gh.build_sym_example(1, D, 10)          # wrong weight
    with pytest.raises(gh.NotLevelOne):
        gh.build_sym_example(1, QSeries([0, 1, 1], order=60), 12)
    with pytest.raises(gh.NotLevelOne):
        gh.build_sym_example(0, QSeries([1, 2], mu=Fraction(1, 2)), 12)


def test_slash_translation_is_block_law(sym1_delta):
    taus = gh.sample_taus(10, seed=1)
    rep = gh.slash_check(sym1_delta, [T(1)], taus)
    assert rep.ok and rep.max_rel_error < 1e-12


def test_slash_S_at_2i(sym1_delta):
    rep = gh.slash_check(sym1_delta, [S], [2j])
    assert rep.ok


def test_slash_random_small_c(sym1_delta):
    gammas = [g for g in gh.slash_gammas(5) if abs(g.c) <= 5]
    rep = gh.slash_check(sym1_delta, gammas, gh.sample_taus(10, seed=3))
    assert rep.ok and not rep.inconclusive and max(rep.orders_used) >= 60


def test_slash_detects_wrong_weight(sym1_delta):
    import copy
    bad = copy.copy(sym1_delta)
    bad.k = 12
    bad.recipe = None
    rep = gh.slash_check(bad, [S, GammaMatrix(1, 0, 1, 1)], gh.sample_taus(5))
    assert not rep.ok


def test_slash_inconclusive_when_capped(sym1_delta):
    # gamma tau has imaginary part about 0.027, far beyond what 60 terms resolve
    rep = gh.slash_check(sym1_delta, [GammaMatrix(1, 0, 5, 1)], [-0.2 + 1.5j], order_cap=60)
    assert rep.inconclusive and not rep.ok


def test_other_examples_are_covariant():
    taus = gh.sample_taus(4, seed=5)
    for name in ("sym0-e4", "sym2-delta2", "sym1-e4delta"):
        F = gh.build_named(name, 60)
        rep = gh.slash_check(F, gh.slash_gammas(2), taus)
        assert rep.ok, (name, rep.as_dict())


def test_fundamental_domain_sup_cuspidal(sym1_delta):
    lo = gh.fundamental_domain_sup(sym1_delta, 5.5, 0, 25)
    hi = gh.fundamental_domain_sup(sym1_delta, 5.5, 0, 50)
    assert lo.sup > 0
    assert abs(hi.sup - lo.sup) / lo.sup < 0.01


def test_fundamental_domain_sup_holomorphic():
    E = gh.build_named("sym0-e4", 60)
    a = gh.fundamental_domain_sup(E, 2.0, 1, 10)
    b = gh.fundamental_domain_sup(E, 2.0, 1, 20)
    assert abs(b.sup - a.sup) / a.sup < 0.01
    # without the v^{-sigma} factor the same quantity is unbounded in the cap
    c = gh.fundamental_domain_sup(E, 2.0, 0, 20)
    assert c.sup > 100 * a.sup


def test_fundamental_domain_sup_zero():
    Z = gh.build_named("sym1-zero", 30)
    assert gh.fundamental_domain_sup(Z, 5.5, 0, 10).sup == 0


def test_growth_delta():
    F = gh.build_named("sym1-delta", 2000)
    rep = gh.coefficient_growth(F)
    assert 5.4 <= rep.beta <= 6.1
    assert rep.beta <= rep.bound and rep.ok
    assert rep.components[1].beta is None and "zero" in rep.components[1].note


def test_growth_e4():
    F = gh.build_named("sym0-e4", 2000)
    rep = gh.coefficient_growth(F)
    assert abs(rep.beta - 3) < 0.05 and rep.beta <= rep.bound == 4 + rep.alpha


def test_growth_orders_by_weight():
    b1 = gh.coefficient_growth(gh.build_named("sym1-delta", 2000)).beta
    b2 = gh.coefficient_growth(gh.build_named("sym1-delta2", 2000)).beta
    assert b1 < b2


def test_growth_zero_form():
    rep = gh.coefficient_growth(gh.build_named("sym1-zero", 2000))
    assert rep.beta is None and rep.ok


def test_growth_needs_long_series():
    with pytest.raises(ValueError):
        gh.coefficient_growth(gh.build_named("sym1-delta", 100))


@settings(max_examples=150, deadline=None)
@given(st.integers(-500, 500), st.integers(1, 1000), st.integers(1, 200))
def test_reduction_lands_in_region(xn, xd, n):
    x, y = Fraction(xn, xd), Fraction(1, n)
    u, v, g = gh.reduce_to_fundamental_domain(x, y)
    assert abs(u) <= Fraction(1, 2) and u * u + v * v >= 1
    z = g.act(complex(float(x), float(y)))
    assert abs(z - complex(float(u), float(v))) < 1e-9 * max(1.0, abs(z))


def test_l_nu_examples():
    rep = gh.l_nu_unit_check([(Fraction(3, 10), 10)])
    assert rep.ok
    rep = gh.l_nu_unit_check([(Fraction(0), 1)])  # tau = i is already reduced
    assert rep.excluded == 1 and not rep.cases


def test_l_nu_random_points():
    rep = gh.l_nu_unit_check(gh.random_lnu_points(100, seed=0))
    assert rep.ok


def test_l_nu_boundary_points_are_exercised():
    pts = [(Fraction(s, 2), n) for s in (-1, 1) for n in range(2, 51)]
    rep = gh.l_nu_unit_check(pts)
    assert rep.ok and rep.relevant
    assert all(abs(c.l_nu) == 1 and c.ratio < 2 for c in rep.relevant)
