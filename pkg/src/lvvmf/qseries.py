"""Truncated q-series  sum_{n <= order} a(n) q^{n + mu}  with rational offset mu.

Coefficients are kept exactly (int, Fraction, Cyclotomic) whenever the
generator allows it and as Python complex otherwise.  The truncation order is
always explicit and arithmetic never claims coefficients it cannot know.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import sympy

from .jordan import root_of_unity

FLOAT_ZERO_RTOL = 1e-12


def _is_float_like(x) -> bool:
    return isinstance(x, (float, complex, np.floating, np.complexfloating))


class QSeries:
    """Coefficients a(start), ..., a(order) of sum a(n) q^{n+mu}."""

    def __init__(self, coeffs: Iterable, mu=0, order: Optional[int] = None, start: int = 0):
        coeffs = list(coeffs)
        self.mu = Fraction(mu)
        if not 0 <= self.mu < 1:
            shift = math.floor(self.mu)
            self.mu -= shift
            start += shift
            if order is not None:
                order += shift
        self.start = start
        if order is None:
            order = start + len(coeffs) - 1
        if order < start - 1:
            raise ValueError("order below start")
        n_known = order - start + 1
        coeffs = coeffs[:n_known] + [0] * (n_known - len(coeffs))
        self.coeffs = coeffs
        self.order = order
        self._numeric = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_dict(cls, data: Dict[int, object], mu=0, order: Optional[int] = None) -> "QSeries":
        if not data:
            return cls([], mu, order if order is not None else -1, start=0)
        lo = min(data)
        hi = max(data) if order is None else order
        return cls([data.get(n, 0) for n in range(lo, hi + 1)], mu, hi, start=lo)

    @classmethod
    def zero(cls, order: int, mu=0) -> "QSeries":
        return cls([], mu, order, start=0)

    @classmethod
    def monomial(cls, n: int, order: int, mu=0, coeff=1) -> "QSeries":
        return cls([coeff], mu, order, start=n)

    # -- access ---------------------------------------------------------------

    def __getitem__(self, n: int):
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        if n < self.start:
            return 0
        return self.coeffs[n - self.start]

    def items(self):
        for i, a in enumerate(self.coeffs):
            yield self.start + i, a

    def _scale_hint(self) -> float:
        return max((abs(complex(a)) for a in self.coeffs), default=0.0)

    def is_zero_coeff(self, a, scale: Optional[float] = None) -> bool:
        if _is_float_like(a):
            scale = self._scale_hint() if scale is None else scale
            return abs(a) <= FLOAT_ZERO_RTOL * max(scale, 1e-300)
        return a == 0

    def support(self) -> List[int]:
        scale = self._scale_hint()
        return [n for n, a in self.items() if not self.is_zero_coeff(a, scale)]

    def valuation(self) -> Optional[int]:
        sup = self.support()
        return sup[0] if sup else None

    def is_zero(self) -> bool:
        return not self.support()

    def truncate(self, order: int) -> "QSeries":
        order = min(order, self.order)
        return QSeries(self.coeffs[: max(order - self.start + 1, 0)], self.mu, order, self.start)

    # -- arithmetic -----------------------------------------------------------

    def _check_offset(self, other: "QSeries"):
        if self.mu != other.mu:
            raise ValueError(f"offset mismatch: {self.mu} vs {other.mu}")

    def __add__(self, other):
        if isinstance(other, Number) and not isinstance(other, QSeries):
            other = QSeries.monomial(0, self.order, self.mu, other) if other else QSeries.zero(self.order, self.mu)
        self._check_offset(other)
        order = min(self.order, other.order)
        lo = min(self.start, other.start)
        out = []
        for n in range(lo, order + 1):
            x = self[n] if n >= self.start else 0
            y = other[n] if n >= other.start else 0
            out.append(x + y)
        return QSeries(out, self.mu, order, lo)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-a for a in self.coeffs], self.mu, self.order, self.start)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        return QSeries([c * a for a in self.coeffs], self.mu, self.order, self.start)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        vx, vy = self.valuation(), other.valuation()
        mu = self.mu + other.mu
        if vx is None or vy is None:
            order = min(self.order + (vy if vy is not None else other.order + 1),
                        other.order + (vx if vx is not None else self.order + 1))
            return QSeries.zero(order, mu)
        order = min(self.order + vy, other.order + vx)
        start = vx + vy
        xs = [(n, a) for n, a in self.items() if n >= vx and a]
        ys = [(n, a) for n, a in other.items() if n >= vy and a]
        out = [0] * (order - start + 1)
        for n, a in xs:
            if n + vy > order:
                break
            for m, b in ys:
                k = n + m
                if k > order:
                    break
                out[k - start] += a * b
        return QSeries(out, mu, order, start)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("negative powers not supported")
        out = QSeries.monomial(0, self.order, 0, 1)
        for _ in range(e):
            out = out * self
        return out

    def equals(self, other: "QSeries", order: Optional[int] = None) -> bool:
        """Exact coefficientwise equality up to the common (or given) order."""
        if self.mu != other.mu:
            return False
        top = min(self.order, other.order) if order is None else order
        lo = min(self.start, other.start)
        return all(self[n] == other[n] for n in range(lo, top + 1))

    def shift_T(self) -> "QSeries":
        """Series of f(tau + 1): every coefficient picks up lambda = e^{2 pi i mu}."""
        lam = root_of_unity(self.mu)
        if lam == 1:
            return QSeries(list(self.coeffs), self.mu, self.order, self.start)
        return self.scale(lam)

    # -- numerics -------------------------------------------------------------

    def numeric_coeffs(self) -> np.ndarray:
        if self._numeric is None:
            self._numeric = np.array([complex(a) for a in self.coeffs], dtype=complex)
        return self._numeric

    def evaluate(self, tau: complex, with_tail: bool = False):
        """Partial sum at tau; with_tail also returns an estimated truncation error."""
        tau = complex(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        a = self.numeric_coeffs()
        n = np.arange(self.start, self.order + 1) + float(self.mu)
        value = complex(np.sum(a * np.exp(2j * np.pi * n * tau))) if len(a) else 0j
        if not with_tail:
            return value
        return value, self.tail_estimate(tau)

    def tail_estimate(self, tau: complex) -> float:
        """Rough bound for |sum_{n > order} a(n) q^{n+mu}|.

        The coefficient envelope C n^p is fitted on the upper half of the
        stored range and summed against |q|^{n+mu}.
        """
        r = math.exp(-2 * math.pi * complex(tau).imag)
        if r >= 1:
            return math.inf
        N = self.order
        absa = np.abs(self.numeric_coeffs())
        ns = np.arange(self.start, N + 1)
        keep = (ns >= max(1, N // 2)) & (absa > 0)
        if not keep.any():
            if not absa.any():
                return 0.0
            p, C = 0.0, float(absa.max())
        else:
            ln, la = np.log(ns[keep]), np.log(absa[keep])
            half = max(1, N // 2)
            lo = ns[keep] < (half + N) / 2
            hi = ~lo
            if lo.any() and hi.any() and N > 8:
                p = max(0.0, (la[hi].max() - la[lo].max()) / (ln[hi].mean() - ln[lo].mean()))
            else:
                p = 0.0
            C = float(np.exp(np.max(la - p * ln)))
        total, n = 0.0, N + 1
        while True:
            term = C * n**p * r ** (n + float(self.mu))
            total += term
            if term < 1e-18 * max(total, 1e-300) or n > N + 10**6:
                break
            n += 1
        return total

    # -- misc -----------------------------------------------------------------

    def __repr__(self):
        head = ", ".join(f"{n}: {a}" for n, a in list(self.items())[:6])
        return f"QSeries(mu={self.mu}, order={self.order}, {{{head}{', ...' if len(self.coeffs) > 6 else ''}}})"


# ---------------------------------------------------------------------------
# classical generators


def _sparse_times_dense(sparse: List[Tuple[int, int]], dense: List[int], order: int) -> List[int]:
    out = [0] * (order + 1)
    for k, c in sparse:
        if k > order:
            break
        for i in range(order + 1 - k):
            v = dense[i]
            if v:
                out[i + k] += c * v
    return out


def _jacobi_cube(order: int) -> List[Tuple[int, int]]:
    """prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}."""
    out, k = [], 0
    while k * (k + 1) // 2 <= order:
        out.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return out


def _euler(order: int) -> List[Tuple[int, int]]:
    """prod (1 - q^n) via pentagonal numbers."""
    terms = {0: 1}
    k = 1
    while k * (3 * k - 1) // 2 <= order:
        for e in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if e <= order:
                terms[e] = (-1) ** k
        k += 1
    return sorted(terms.items())


def eta_product_coeffs(e: int, order: int) -> List[int]:
    """Coefficients of prod_{n>=1} (1 - q^n)^e up to q^order, e >= 0."""
    out = [1] + [0] * order
    cube, single = _jacobi_cube(order), _euler(order)
    for _ in range(e // 3):
        out = _sparse_times_dense(cube, out, order)
    for _ in range(e % 3):
        out = _sparse_times_dense(single, out, order)
    return out


def delta_power(r: int, order: int) -> QSeries:
    """Delta^r = q^r prod (1 - q^n)^{24 r}, integer coefficients."""
    if order < 1:
        raise ValueError("order must be >= 1")
    body = eta_product_coeffs(24 * r, max(order - r, 0))
    return QSeries([0] * r + body, 0, order, 0)


def delta_series(order: int) -> QSeries:
    return delta_power(1, order)


def divisor_sigma_table(k: int, order: int) -> List[int]:
    sig = [0] * (order + 1)
    for d in range(1, order + 1):
        dk = d**k
        for m in range(d, order + 1, d):
            sig[m] += dk
    return sig


def eisenstein(k: int, order: int) -> QSeries:
    """E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise ValueError("weight must be even and >= 4")
    B = sympy.bernoulli(k)
    factor = -Fraction(2 * k) / Fraction(int(B.p), int(B.q))
    sig = divisor_sigma_table(k - 1, order)
    coeffs = [1] + [factor * sig[n] for n in range(1, order + 1)]
    coeffs = [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in coeffs]
    return QSeries(coeffs, 0, order, 0)


# ---------------------------------------------------------------------------
# behaviour at infinity

CUSPIDAL, HOLOMORPHIC, MEROMORPHIC = "cuspidal", "holomorphic", "meromorphic"


def classify_at_infinity(x: QSeries) -> str:
    """Most specific class, judged on the stored support only."""
    sup = x.support()
    if all(n + x.mu > 0 for n in sup):
        return CUSPIDAL
    if all(n + x.mu >= 0 for n in sup):
        return HOLOMORPHIC
    return MEROMORPHIC


def classify_many(series: Iterable[QSeries]) -> str:
    rank = {CUSPIDAL: 0, HOLOMORPHIC: 1, MEROMORPHIC: 2}
    worst = CUSPIDAL
    for s in series:
        c = classify_at_infinity(s)
        if rank[c] > rank[worst]:
            worst = c
    return worst


# ---------------------------------------------------------------------------
# series files: header "mu P/Q, order N", then "n re im" per coefficient


def _fmt_part(x) -> Tuple[str, str]:
    if isinstance(x, (int, Fraction)):
        return str(x), "0"
    z = complex(x)
    return repr(z.real), repr(z.imag)


def write_series(x: QSeries, path) -> None:
    lines = [f"mu {x.mu}, order {x.order}"]
    for n, a in x.items():
        re, im = _fmt_part(a)
        lines.append(f"{n} {re} {im}")
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_number(tok: str):
    try:
        return Fraction(tok)
    except ValueError:
        return float(tok)


def read_series(path) -> QSeries:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    head = lines[0]
    try:
        mu_part, order_part = [p.strip() for p in head.split(",")]
        if not mu_part.startswith("mu ") or not order_part.startswith("order "):
            raise ValueError
        mu = Fraction(mu_part[3:].strip())
        order = int(order_part[6:].strip())
    except ValueError:
        raise ValueError(f"bad series header: {head!r}") from None
    data = {}
    for ln in lines[1:]:
        n, re, im = ln.split()
        re, im = _parse_number(re), _parse_number(im)
        if isinstance(re, Fraction) and isinstance(im, Fraction) and im == 0:
            data[int(n)] = int(re) if re.denominator == 1 else re
        else:
            data[int(n)] = complex(float(re), float(im))
    if not data:
        return QSeries.zero(order, mu)
    lo = min(data)
    return QSeries([data.get(n, 0) for n in range(lo, order + 1)], mu, order, lo)
