"""Polynomial and logarithmic q-expansions of a single modified Jordan block.

A block component is held as a polynomial in tau with q-series
coefficients, ``sum_d tau^d S_d``.  With that representation the passage to
the h-series, h = B_m(tau) g, either cancels every tau-power exactly or it
does not, and the latter means the input was not a genuine T-block.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .qseries import QSeries, classify_many


class Poly:
    """Dense polynomial in one variable with Fraction coefficients, constant first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, v) -> "Poly":
        return cls([v])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.c), len(other.c))
        a = self.c + (0,) * (n - len(self.c))
        b = other.c + (0,) * (n - len(other.c))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-v for v in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([v * other for v in self.c])
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self.c == other.c

    __hash__ = None

    def __call__(self, x):
        acc = 0
        for v in reversed(self.c):
            acc = acc * x + (complex(v) if isinstance(x, complex) else v)
        return acc

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            v = self.c[k]
            if v == 0:
                continue
            mag = abs(v)
            if k == 0:
                body = str(mag)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                if mag == 1:
                    body = mono
                elif mag.denominator == 1:
                    body = f"{mag}*{mono}"
                else:
                    body = f"{mag.numerator}*{mono}/{mag.denominator}" if mag.numerator != 1 else f"{mono}/{mag.denominator}"
            sign = "-" if v < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


def binom_poly(shift: int, k: int) -> Poly:
    """C(x + shift, k) as a polynomial in x; zero for k < 0."""
    if k < 0:
        return Poly()
    out = Poly.const(1)
    for i in range(k):
        out = out * Poly([shift - i, 1])
    return out * Fraction(1, math.factorial(k))


PolyMatrix = List[List[Poly]]


def b_matrix(m: int) -> PolyMatrix:
    """B_m(x)_{ij} = (-1)^{i-j} C(x+i-j-1, i-j), lower triangular, 0-based."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return [[binom_poly(i - j - 1, i - j) * (-1) ** (i - j) if i >= j else Poly() for j in range(m)]
            for i in range(m)]


def b_matrix_inverse(m: int) -> PolyMatrix:
    """Entries C(x, i-j)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return [[binom_poly(0, i - j) if i >= j else Poly() for j in range(m)] for i in range(m)]


def polymatrix_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    n, k, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = Poly()
            for t in range(k):
                if A[i][t].c and B[t][j].c:
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def is_identity(A: PolyMatrix) -> bool:
    return all(A[i][j] == (1 if i == j else 0) for i in range(len(A)) for j in range(len(A)))


def vanishing_brackets(m: int) -> List[Poly]:
    """x * [C(x+t-1, t-1) - C(x+t-1, t) t / x] for 1 <= t < m; all should vanish."""
    return [binom_poly(t - 1, t - 1) * Poly.x() - binom_poly(t - 1, t) * t for t in range(1, m)]


# ---------------------------------------------------------------------------
# block components


class PolySeries:
    """sum_d tau^d S_d with all S_d sharing one offset mu."""

    def __init__(self, terms: Sequence[QSeries]):
        terms = list(terms)
        if not terms:
            raise ValueError("need at least the tau^0 term")
        mu = terms[0].mu
        if any(t.mu != mu for t in terms):
            raise ValueError("all tau-coefficients must share the offset")
        self.terms = terms

    @classmethod
    def of(cls, series: QSeries) -> "PolySeries":
        return cls([series])

    @property
    def mu(self) -> Fraction:
        return self.terms[0].mu

    @property
    def order(self) -> int:
        return min(t.order for t in self.terms)

    def residual_degree(self) -> int:
        """Highest tau-power with a nonzero coefficient series (0 if none)."""
        for d in range(len(self.terms) - 1, 0, -1):
            if not self.terms[d].is_zero():
                return d
        return 0

    def __add__(self, other: "PolySeries") -> "PolySeries":
        n = max(len(self.terms), len(other.terms))
        order = min(self.order, other.order)
        out = []
        for d in range(n):
            a = self.terms[d] if d < len(self.terms) else None
            b = other.terms[d] if d < len(other.terms) else None
            if a is None:
                out.append(b.truncate(order))
            elif b is None:
                out.append(a.truncate(order))
            else:
                out.append(a + b)
        return PolySeries(out)

    def times_poly(self, p: Poly) -> "PolySeries":
        zero = QSeries.zero(self.order, self.mu)
        if not p.c:
            return PolySeries([zero])
        out = [zero] * (len(self.terms) + len(p.c) - 1)
        for e, coeff in enumerate(p.c):
            if coeff == 0:
                continue
            for d, S in enumerate(self.terms):
                out[d + e] = out[d + e] + S.scale(coeff)
        return PolySeries(out)

    def scale(self, c) -> "PolySeries":
        return PolySeries([S.scale(c) for S in self.terms])

    def evaluate(self, tau: complex) -> complex:
        return sum(tau**d * S.evaluate(tau) for d, S in enumerate(self.terms))

    def shift_T(self) -> "PolySeries":
        """Component of f(tau + 1): tau^d -> (tau + 1)^d, S_d -> lambda S_d."""
        acc = PolySeries([QSeries.zero(self.order, self.mu)])
        for d, S in enumerate(self.terms):
            acc = acc + PolySeries([S.shift_T()]).times_poly(Poly([1, 1]) ** d)
        return acc


class ResidualTauError(ValueError):
    """The tau-polynomial part did not cancel: not a genuine T-block."""


@dataclass
class PolyQExpansion:
    """g_j = sum_t C(tau, t) h_{j-t}, j = 0..m-1."""

    h: List[QSeries]
    basis: str = "binomial"

    def __post_init__(self):
        if not self.h:
            raise ValueError("empty block")
        mu = self.h[0].mu
        if any(s.mu != mu for s in self.h):
            raise ValueError("h-series of one block share the offset mu")

    @property
    def m(self) -> int:
        return len(self.h)

    @property
    def mu(self) -> Fraction:
        return self.h[0].mu

    def kind(self) -> str:
        return classify_many(self.h)


@dataclass
class LogQExpansion:
    """g_j = sum_u (log q)^u (2 pi i)^{-u} S_{j,u}, with terms[j][u] = S_{j,u}.

    The (2 pi i)^{-u} factors are kept symbolic; S_{j,u} are exact.
    """

    terms: List[List[QSeries]]
    basis: str = field(default="logpower", init=False)

    @property
    def m(self) -> int:
        return len(self.terms)

    def evaluate(self, j: int, tau: complex) -> complex:
        logq = 2j * cmath.pi * complex(tau)
        return sum(logq**u * (2j * cmath.pi) ** (-u) * S.evaluate(tau)
                   for u, S in enumerate(self.terms[j]))


def h_from_components(g: Sequence[PolySeries]) -> PolyQExpansion:
    """h_j = sum_t (-1)^t C(tau+t-1, t) g_{j-t}, required to be tau-free."""
    m = len(g)
    h = []
    for j in range(m):
        acc = None
        for t in range(j + 1):
            term = g[j - t].times_poly(binom_poly(t - 1, t) * (-1) ** t)
            acc = term if acc is None else acc + term
        deg = acc.residual_degree()
        if deg:
            raise ResidualTauError(f"h_{j} keeps a tau^{deg} term")
        h.append(acc.terms[0])
    return PolyQExpansion(h)


def components_from_h(p: PolyQExpansion) -> List[PolySeries]:
    """g_j = sum_t C(tau, t) h_{j-t}."""
    out = []
    for j in range(p.m):
        acc = None
        for t in range(j + 1):
            term = PolySeries.of(p.h[j - t]).times_poly(binom_poly(0, t))
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def binomial_to_logpower(p: PolyQExpansion) -> LogQExpansion:
    """Re-expand each C(tau, t) in powers tau^u = (log q)^u / (2 pi i)^u."""
    comps = components_from_h(p)
    return LogQExpansion([list(c.terms) for c in comps])


def logpower_to_binomial(x: LogQExpansion) -> PolyQExpansion:
    """Inverse of binomial_to_logpower; the tau^0 parts are the h-series."""
    p = PolyQExpansion([row[0] for row in x.terms])
    check = binomial_to_logpower(p)
    for j, (got, want) in enumerate(zip(check.terms, x.terms)):
        if len(got) != len(want) or not all(a.equals(b) for a, b in zip(got, want)):
            raise ResidualTauError(f"component {j} is not of binomial shape")
    return p


@dataclass
class BlockTransformReport:
    lam: complex
    n_samples: int
    max_rel_error_g: float
    max_rel_error_h: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_rel_error_g < self.tol and self.max_rel_error_h < self.tol

    def as_dict(self) -> dict:
        return {"lambda": repr(self.lam), "samples": self.n_samples,
                "max_rel_error_g": repr(self.max_rel_error_g),
                "max_rel_error_h": repr(self.max_rel_error_h), "pass": self.ok}


def _numeric_h(gvals: Sequence[complex], tau: complex) -> List[complex]:
    B = b_matrix(len(gvals))
    return [sum(B[j][i](tau) * gvals[i] for i in range(j + 1)) for j in range(len(gvals))]


def verify_block_transform(g: Sequence[PolySeries], lam: complex, taus: Sequence[complex],
                           tol: float = 1e-9) -> BlockTransformReport:
    """Check g_j(tau+1) = lam (g_j + g_{j-1})(tau) and h_j(tau+1) = lam h_j(tau) numerically.

    Errors are measured against the largest component magnitude at the
    sample, so an identically vanishing h_j does not divide by zero.
    """
    lam = complex(lam)
    err_g = err_h = 0.0
    for tau in taus:
        tau = complex(tau)
        now = [c.evaluate(tau) for c in g]
        nxt = [c.evaluate(tau + 1) for c in g]
        scale = max(max(abs(v) for v in now), max(abs(v) for v in nxt), 1e-300)
        for j in range(len(g)):
            prev = now[j - 1] if j else 0
            err_g = max(err_g, abs(nxt[j] - lam * (now[j] + prev)) / scale)
        h_now, h_nxt = _numeric_h(now, tau), _numeric_h(nxt, tau + 1)
        hscale = max(scale, max(abs(v) for v in h_now), max(abs(v) for v in h_nxt))
        for a, b in zip(h_nxt, h_now):
            err_h = max(err_h, abs(a - lam * b) / hscale)
    return BlockTransformReport(lam, len(taus), err_g, err_h, tol)
