import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvvmf.sl2z import (IDENTITY, S, ST, T, EichlerWord, GammaMatrix, TranslationWord,
                        canonical_nu, compose, eichler_decompose, eichler_length,
                        enumerate_gamma, fibonacci_family, is_sign_valid, lame_ratio,
                        lame_sweep, dichotomy_violations, prefix_products, reconstruct,
                        verify_prop3, word_product)

MINUS_I = GammaMatrix(-1, 0, 0, -1)


def test_determinant_enforced():
    with pytest.raises(ValueError):
        GammaMatrix(1, 1, 1, 1)


def test_compose_examples():
    assert compose(S, S) == MINUS_I
    assert compose(T(), T()) == GammaMatrix(1, 2, 0, 1)
    st1 = ST(1)
    assert st1 == GammaMatrix(0, -1, 1, 1)
    assert compose(compose(st1, st1), st1) == MINUS_I


def test_inverse_and_action():
    g = GammaMatrix(-1, -3, 2, 5)
    assert g @ g.inverse() == IDENTITY
    tau = 0.1 + 1.2j
    assert abs(g.act(g.inverse().act(tau)) - tau) < 1e-12


@pytest.mark.parametrize("g, sign, exps", [
    (GammaMatrix(0, -1, 1, 3), 1, (3,)),
    (GammaMatrix(1, 0, 1, 1), -1, (1, 1, 0)),
    (GammaMatrix(-1, -3, 2, 5), 1, (3, 2)),
])
def test_decompose_examples(g, sign, exps):
    w = eichler_decompose(g)
    assert (w.sign, w.exponents) == (sign, exps)
    assert reconstruct(w) == g


def test_translation_word():
    w = eichler_decompose(GammaMatrix(1, 7, 0, 1))
    assert isinstance(w, TranslationWord) and w.shift == 7 and w.sign == 1
    w = eichler_decompose(GammaMatrix(-1, 2, 0, -1))
    assert isinstance(w, TranslationWord) and reconstruct(w) == GammaMatrix(-1, 2, 0, -1)


def test_negative_c_flips_sign():
    g = GammaMatrix(1, 3, -2, -5)
    w = eichler_decompose(g)
    assert w.exponents == (3, 2) and w.sign == -1
    assert reconstruct(w) == g


def test_reconstruct_rejects_bad_pattern():
    with pytest.raises(ValueError):
        reconstruct(EichlerWord(1, (1, -2, 3)))   # l_1 must be positive
    with pytest.raises(ValueError):
        reconstruct(EichlerWord(1, (1, 2, 3, 0)))  # l_2 must be negative


def test_prefix_products():
    P = prefix_products(EichlerWord(1, (3, 2)))
    assert P[0] == GammaMatrix(0, -1, 1, 3)
    assert P[1] == GammaMatrix(-1, -3, 2, 5)
    assert prefix_products(EichlerWord(1, (-7,)))[0] == GammaMatrix(0, -1, 1, -7)
    assert prefix_products(EichlerWord(-1, (1, 1, 0)))[-1] == -GammaMatrix(1, 0, 1, 1)


@pytest.mark.parametrize("exps, length", [
    ((3, 2), 4), ((0, 5), 3), ((1, 1, 0), 3), ((0, 1, 0), 2), ((3,), 2), ((0,), 1),
])
def test_eichler_length(exps, length):
    assert eichler_length(EichlerWord(1, exps)) == length


def test_prop3_examples():
    g = GammaMatrix(-1, -3, 2, 5)
    rep = verify_prop3(eichler_decompose(g), g)
    assert rep.ok and rep.case.endswith("l0>0")
    assert rep.checks[0].lhs == 6 and rep.checks[0].rhs == 7
    g = ST(-4)
    rep = verify_prop3(eichler_decompose(g), g)
    assert rep.ok and rep.checks[0].lhs == 4 and rep.checks[0].rhs == 4


def test_prop3_reports_failures():
    # a word paired with the wrong matrix has to be caught
    g = GammaMatrix(-1, -3, 2, 5)
    wrong = GammaMatrix(0, -1, 1, 1)
    rep = verify_prop3(EichlerWord(1, (-9, 2)), GammaMatrix(-1, 9, 2, -19))
    assert rep.ok
    rep = verify_prop3(EichlerWord(1, (-9, 2)), wrong)
    assert not rep.ok and rep.failures


def test_enumerate_counts():
    assert len(list(enumerate_gamma(1, 1))) == 3
    gs = list(enumerate_gamma(2, 2))
    assert len(gs) == 7
    assert {(g.c, g.d) for g in gs} == {(1, d) for d in range(-2, 3)} | {(2, 1), (2, -1)}
    assert all(0 <= g.a < max(g.c, 2) for g in gs)


def test_enumeration_is_deterministic():
    assert list(enumerate_gamma(6, 4)) == list(enumerate_gamma(6, 4))


def test_dichotomy_extended_range():
    # first column a outside [0, c): every c >= 2 obeys the dichotomy exactly
    bad = []
    for g in enumerate_gamma(40, 40):
        if g.c < 2:
            continue
        for k in range(-3, 4):
            h = T(k) @ g
            bad += dichotomy_violations(h, eichler_decompose(h))
    assert bad == []


def test_dichotomy_exceptions_at_c_one():
    # for c = 1 the floor statement and the strict inequality break down
    g = GammaMatrix(-1, -1, 1, 0)
    assert eichler_decompose(g).exponents == (1, 1)
    assert dichotomy_violations(g, eichler_decompose(g))
    g = GammaMatrix(-2, -1, 1, 0)
    assert eichler_decompose(g).exponents == (1, 1, -1, 0)
    assert dichotomy_violations(g, eichler_decompose(g))


def test_lame_single_factor():
    w = eichler_decompose(ST(3))
    assert lame_ratio(w, ST(3)) == 2.0
    with pytest.raises(ValueError):
        lame_ratio(w, T(1))


def test_fibonacci_family_grows():
    fam = fibonacci_family(10**4)
    cs = [c for _, c, _ in fam]
    assert cs[:6] == [1, 2, 3, 5, 8, 13]
    ratios = [r for *_, r in fam]
    assert ratios[-1] < 2 / math.log((1 + 5**0.5) / 2)


def test_canonical_nu_matches_decomposition():
    for g in enumerate_gamma(80, 80):
        assert canonical_nu(g.a, g.c) == eichler_decompose(g).nu


def test_lame_sweep_small():
    sweep = lame_sweep(200)
    brute = max(lame_ratio(w, g) for g in enumerate_gamma(200, 200)
                for w in [eichler_decompose(g)])
    assert sweep.sup_ratio == pytest.approx(brute, abs=0)


# -- properties ---------------------------------------------------------------

gen_words = st.lists(st.sampled_from(["S", "T", "t"]), min_size=0, max_size=30)


def _from_letters(letters):
    g = IDENTITY
    for ch in letters:
        g = g @ {"S": S, "T": T(1), "t": T(-1)}[ch]
    return g


@settings(max_examples=400, deadline=None)
@given(gen_words)
def test_round_trip_random(letters):
    g = _from_letters(letters)
    w = eichler_decompose(g)
    assert reconstruct(w) == g
    if isinstance(w, EichlerWord):
        assert is_sign_valid(w.exponents)
        assert verify_prop3(w, g).ok


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=8), st.integers(-9, 9), st.booleans(),
       st.sampled_from([1, -1]))
def test_decompose_inverts_reconstruct(mags, l0, zero_last, sign):
    tail = [(-1) ** j * m for j, m in enumerate(mags)]
    if zero_last and len(tail) >= 2:
        tail.append(0)
    w = EichlerWord(sign, (l0,) + tuple(tail))
    assert eichler_decompose(reconstruct(w)) == w


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=10), st.integers(-5, 5))
def test_first_column_monotone(mags, l0):
    # the brute-force search prunes on this
    tail = [(-1) ** j * m for j, m in enumerate(mags)]
    prev = 0
    for P in prefix_products(EichlerWord(1, (l0,) + tuple(tail)))[1:]:
        size = max(abs(P.a), abs(P.c))
        assert size >= prev
        prev = size


def test_word_product_matches_reconstruct():
    assert word_product((3, 2)) == reconstruct(EichlerWord(1, (3, 2)))
