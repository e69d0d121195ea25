"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are kept in the power basis 1, zeta, ..., zeta^{phi(N)-1}; mixing
two fields lifts both to Q(zeta_lcm).  Only what the Jordan and q-series
code needs is provided.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Tuple

import sympy


@lru_cache(maxsize=None)
def _cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _reduce(coeffs, n):
    phi = _cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            for k in range(deg + 1):
                c[i - deg + k] -= lead * phi[k]
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(Fraction(v) for v in c)


class Cyclotomic:
    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        self.coeffs = _reduce(coeffs, n)

    @classmethod
    def root_of_unity(cls, mu) -> "Cyclotomic":
        """exp(2 pi i mu) for rational mu."""
        mu = Fraction(mu) % 1
        n = mu.denominator
        coeffs = [0] * (mu.numerator + 1)
        coeffs[mu.numerator] = 1
        return cls(n, coeffs)

    @classmethod
    def rational(cls, q) -> "Cyclotomic":
        return cls(1, [Fraction(q)])

    def _lift(self, m: int):
        step = m // self.n
        out = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1 if self.coeffs else 1)
        for i, v in enumerate(self.coeffs):
            out[i * step] = v
        return out

    @staticmethod
    def _coerce(other):
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Rational)):
            return Cyclotomic.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return complex(self) + other
        m = math.lcm(self.n, other.n)
        a, b = self._lift(m), other._lift(m)
        size = max(len(a), len(b))
        a += [0] * (size - len(a))
        b += [0] * (size - len(b))
        return Cyclotomic(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-v for v in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return complex(self) * other
        m = math.lcm(self.n, other.n)
        a, b = self._lift(m), other._lift(m)
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(m, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        out = Cyclotomic.rational(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        diff = self - other
        return not any(diff.coeffs)

    __hash__ = None

    def __bool__(self):
        return any(self.coeffs)

    def as_rational(self):
        """Fraction if the element lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.n)
        return complex(sum(float(v) * z**i for i, v in enumerate(self.coeffs)))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"Cyclotomic({self.n}, {[str(v) for v in self.coeffs]})"

    def __str__(self):
        q = self.as_rational()
        if q is not None:
            return str(q)
        terms = []
        for i, v in enumerate(self.coeffs):
            if not v:
                continue
            base = "1" if i == 0 else f"z{self.n}" + (f"^{i}" if i > 1 else "")
            terms.append(f"{v}*{base}" if i else str(v))
        return " + ".join(terms)
