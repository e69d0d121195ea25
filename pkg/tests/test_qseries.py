import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvvmf import qseries as qs
from lvvmf.qseries import QSeries


def product_oracle(order):
    """q * prod_{n<=order} (1 - q^n)^24 by plain repeated multiplication."""
    poly = [1] + [0] * order
    for n in range(1, order + 1):
        for _ in range(24):
            for i in range(order, n - 1, -1):
                poly[i] -= poly[i - n]
    return [0] + poly[:order]


def sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def test_cauchy_product_examples():
    a = QSeries([1, 1], order=2)
    b = QSeries([1, -1], order=2)
    assert (a * b).equals(QSeries([1, 0, -1], order=2))
    h = QSeries.monomial(0, 5, mu=Fraction(1, 2))
    prod = h * h
    assert prod.mu == 0 and prod[1] == 1 and prod[0] == 0


def test_order_never_overclaimed():
    a = QSeries([1, 2, 3], order=2)
    b = QSeries([5, 7, 1, 1, 1], order=4)
    assert (a + b).order == 2
    assert (a * b).order == 2
    with pytest.raises(IndexError):
        (a * b)[3]


def test_add_offset_mismatch():
    with pytest.raises(ValueError):
        QSeries([1], mu=Fraction(1, 3)) + QSeries([1])


def test_delta_matches_product_oracle():
    D = qs.delta_series(100)
    oracle = product_oracle(100)
    assert [D[n] for n in range(101)] == oracle
    assert [D[n] for n in range(1, 6)] == [1, -24, 252, -1472, 4830]
    assert D[0] == 0
    assert D[6] == D[2] * D[3]
    assert all(isinstance(D[n], int) for n in range(101))


def test_delta_times_e4_matches_direct_convolution():
    N = 40
    D, E = qs.delta_series(N), qs.eisenstein(4, N)
    prod = D * E
    for n in range(N + 1):
        assert prod[n] == sum(D[i] * E[n - i] for i in range(n + 1))


def test_eisenstein():
    E4, E6 = qs.eisenstein(4, 10), qs.eisenstein(6, 10)
    assert [E4[n] for n in range(4)] == [1, 240, 2160, 6720]
    assert all(E4[n] == 240 * sigma(3, n) for n in range(1, 11))
    assert all(E6[n] == -504 * sigma(5, n) for n in range(1, 11))
    assert E6[0] == 1
    for k in (3, 2, 5):
        with pytest.raises(ValueError):
            qs.eisenstein(k, 5)


def test_discriminant_identity():
    N = 60
    lhs = qs.eisenstein(4, N) ** 3 - qs.eisenstein(6, N) ** 2
    assert lhs.equals(qs.delta_series(N).scale(1728))


def test_shift_T():
    x = QSeries([1, 2, 3])
    assert x.shift_T().equals(x)
    h = QSeries([1, 2, 3], mu=Fraction(1, 2))
    assert h.shift_T().equals(h.scale(-1))
    t = QSeries([1, 2, 3], mu=Fraction(1, 3))
    w = cmath.exp(2j * cmath.pi / 3)
    assert all(abs(complex(t.shift_T()[n]) - w * complex(t[n])) < 1e-12 for n in range(3))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=12), st.integers(0, 5), st.integers(1, 6),
       st.floats(-0.5, 0.5), st.floats(0.3, 2.0))
def test_shift_T_matches_evaluation(coeffs, num, den, x, y):
    mu = Fraction(num % den, den)
    s = QSeries(coeffs, mu=mu)
    tau = complex(x, y)
    a, b = s.shift_T().evaluate(tau), s.evaluate(tau + 1)
    assert abs(a - b) <= 1e-9 * (1 + abs(b))


def test_evaluate():
    assert QSeries([1]).evaluate(0.3 + 2j) == 1
    q = QSeries.monomial(1, 1)
    assert abs(q.evaluate(1j) - math.exp(-2 * math.pi)) < 1e-15
    assert abs(qs.delta_series(200).evaluate(1j) - 0.0017853698506421524) < 1e-9
    with pytest.raises(ValueError):
        q.evaluate(0.5 + 0j)


def test_tail_estimate_shrinks_with_height():
    D = qs.delta_series(60)
    assert D.tail_estimate(0.4j) > D.tail_estimate(1j) > D.tail_estimate(2j)
    val, tail = D.evaluate(1j, with_tail=True)
    assert tail < 1e-100


def test_classification():
    assert qs.classify_at_infinity(qs.delta_series(10)) == qs.CUSPIDAL
    assert qs.classify_at_infinity(qs.eisenstein(4, 10)) == qs.HOLOMORPHIC
    mero = QSeries.from_dict({-1: 1, 0: 744, 1: 196884})
    assert qs.classify_at_infinity(mero) == qs.MEROMORPHIC
    # fractional offsets: q^{-1 + 1/2} is not holomorphic, q^{0 + 1/3} is cuspidal
    assert qs.classify_at_infinity(QSeries.from_dict({-1: 1}, mu=Fraction(1, 2))) == qs.MEROMORPHIC
    assert qs.classify_at_infinity(QSeries.from_dict({0: 1}, mu=Fraction(1, 3))) == qs.CUSPIDAL


def test_classification_float_epsilon():
    s = QSeries([1e-15, 1.0, 2.0])
    assert qs.classify_at_infinity(s) == qs.CUSPIDAL
    s = QSeries([1e-6, 1.0, 2.0])
    assert qs.classify_at_infinity(s) == qs.HOLOMORPHIC


@settings(max_examples=80, deadline=None)
@given(st.dictionaries(st.integers(-3, 6), st.integers(-5, 5), min_size=1, max_size=6))
def test_classification_monotone(data):
    s = QSeries.from_dict(data)
    kind = qs.classify_at_infinity(s)
    holo = all(n >= 0 for n in s.support())
    cusp = all(n > 0 for n in s.support())
    assert (kind == qs.CUSPIDAL) == cusp
    assert (kind in (qs.CUSPIDAL, qs.HOLOMORPHIC)) == holo


def test_series_file_round_trip(tmp_path):
    s = QSeries([Fraction(1, 2), 3, -7], mu=Fraction(1, 3), order=4)
    qs.write_series(s, tmp_path / "s.txt")
    assert (tmp_path / "s.txt").read_text().splitlines()[0] == "mu 1/3, order 4"
    back = qs.read_series(tmp_path / "s.txt")
    assert back.equals(s) and back.order == 4
    c = QSeries([1 + 2j, 0.5])
    qs.write_series(c, tmp_path / "c.txt")
    assert qs.read_series(tmp_path / "c.txt")[0] == 1 + 2j


def test_bad_series_header(tmp_path):
    (tmp_path / "bad.txt").write_text("order 4\n0 1 0\n")
    with pytest.raises(ValueError):
        qs.read_series(tmp_path / "bad.txt")


def test_delta_power_consistent():
    assert qs.delta_power(2, 50).equals(qs.delta_series(50) ** 2)
