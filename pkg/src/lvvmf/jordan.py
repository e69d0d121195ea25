"""Modified Jordan blocks: lambda on the diagonal *and* the subdiagonal.

Eigenvalues are stored as a rational angle mu (lambda = e^{2 pi i mu}) and
only turned into floating point at the numeric boundary.  Exact matrices are
numpy object arrays holding ints, Fractions or Cyclotomic elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
import sympy

from .cyclotomic import Cyclotomic


def binomial(x, k: int):
    """x(x-1)...(x-k+1)/k! for any rational x; 0 for k < 0."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= x - i
    out = Fraction(num) / math.factorial(k)
    return int(out) if out.denominator == 1 else out


def root_of_unity(mu):
    """e^{2 pi i mu} exactly: an int for mu in {0, 1/2} mod 1, else Cyclotomic."""
    mu = Fraction(mu) % 1
    if mu == 0:
        return 1
    if mu == Fraction(1, 2):
        return -1
    return Cyclotomic.root_of_unity(mu)


@dataclass(frozen=True)
class ModifiedJordanBlock:
    m: int
    mu: Fraction = Fraction(0)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("block size must be >= 1")
        object.__setattr__(self, "mu", Fraction(self.mu) % 1)

    @property
    def lam(self):
        return root_of_unity(self.mu)

    @property
    def lam_complex(self) -> complex:
        return complex(np.exp(2j * np.pi * float(self.mu)))


@dataclass(frozen=True)
class ModifiedJordanSpec:
    blocks: Tuple[ModifiedJordanBlock, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def s(self) -> int:
        return max(b.m for b in self.blocks)

    @property
    def dim(self) -> int:
        return sum(b.m for b in self.blocks)

    def offsets(self) -> List[int]:
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.m
        return out

    def as_dict(self) -> dict:
        return {"blocks": [{"m": b.m, "mu": str(b.mu)} for b in self.blocks]}


def _zeros(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = _zeros(n)
    for i in range(n):
        out[i, i] = 1
    return out


def block_matrix(b: ModifiedJordanBlock) -> np.ndarray:
    J = _zeros(b.m)
    lam = b.lam
    for i in range(b.m):
        J[i, i] = lam
        if i:
            J[i, i - 1] = lam
    return J


def block_power(b: ModifiedJordanBlock, l: int) -> np.ndarray:
    """J^l = lambda^l sum_i C(l, i) N^i, exact for every integer l."""
    J = _zeros(b.m)
    lam_l = root_of_unity(b.mu * l)
    for i in range(b.m):
        coeff = binomial(l, i)
        for r in range(i, b.m):
            J[r, r - i] = lam_l * coeff
    return J


def block_power_norm(b: ModifiedJordanBlock, l: int) -> Fraction:
    """max |entry| of J^l; |lambda| = 1 so only binomials matter."""
    return max(abs(binomial(l, i)) for i in range(b.m))


def rhoT_power(spec: ModifiedJordanSpec, l: int) -> np.ndarray:
    out = _zeros(spec.dim)
    for off, b in zip(spec.offsets(), spec.blocks):
        out[off:off + b.m, off:off + b.m] = block_power(b, l)
    return out


def to_complex(M: np.ndarray) -> np.ndarray:
    return np.vectorize(complex, otypes=[complex])(M)


def max_norm(M) -> float:
    return float(max(abs(x) for x in np.asarray(M).ravel()))


def norm_ratios(spec: ModifiedJordanSpec, l_range: int):
    """(|l|, ||rho(T^l)|| / |l|^{s-1}) maximised over +-l, for l = 1..l_range."""
    s = spec.s
    out = []
    for l in range(1, l_range + 1):
        best = max(block_power_norm(b, sl) for b in spec.blocks for sl in (l, -l))
        out.append((l, best / Fraction(l) ** (s - 1)))
    return out


def norm_bound_constant(spec: ModifiedJordanSpec, l_range: int) -> float:
    """Empirical C_s: max over 1 <= |l| <= l_range of ||rho(T^l)|| / |l|^{s-1}."""
    if l_range < 1:
        raise ValueError("l_range must be >= 1")
    return float(max(r for _, r in norm_ratios(spec, l_range)))


def standard_block(m: int, mu) -> np.ndarray:
    """Usual Jordan block in the same lower-triangular layout (1s below the diagonal)."""
    J = _zeros(m)
    lam = root_of_unity(mu)
    for i in range(m):
        J[i, i] = lam
        if i:
            J[i, i - 1] = 1
    return J


def modified_from_standard(m: int, mu) -> Tuple[np.ndarray, np.ndarray]:
    """D = diag(1, lam, ..., lam^{m-1}) and its inverse; D J_std D^{-1} = J_{m,lam}."""
    mu = Fraction(mu)
    D, Dinv = _zeros(m), _zeros(m)
    for k in range(m):
        D[k, k] = root_of_unity(mu * k)
        Dinv[k, k] = root_of_unity(-mu * k)
    return D, Dinv


def exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n, k = A.shape
    k2, p = B.shape
    assert k == k2
    out = np.empty((n, p), dtype=object)
    for i in range(n):
        for j in range(p):
            acc = 0
            for t in range(k):
                a = A[i, t]
                if a:
                    b = B[t, j]
                    if b:
                        acc = acc + a * b
            out[i, j] = acc
    return out


def exact_equal(A: np.ndarray, B: np.ndarray) -> bool:
    return A.shape == B.shape and all(x == y for x, y in zip(A.ravel(), B.ravel()))


class UnsupportedInput(ValueError):
    pass


def _to_fraction_matrix(M) -> List[List[Fraction]]:
    return [[Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x) for x in row]
            for row in np.asarray(M, dtype=object)]


def canonicalize_unipotent(M) -> Tuple[ModifiedJordanSpec, np.ndarray, np.ndarray]:
    """Spec, Q and Q^{-1} with Q M Q^{-1} in modified Jordan form (all lambda = 1).

    Chains are built top-down from the kernels of (M - I)^k; the column
    v_0, N v_0, N^2 v_0, ... of Q^{-1} realises one block.  Standard basis
    vectors are preferred as chain tops, last coordinate first.
    """
    A = sympy.Matrix(_to_fraction_matrix(M)).applyfunc(sympy.Rational)
    p = A.rows
    N = A - sympy.eye(p)
    powers = [sympy.eye(p)]
    while not powers[-1].is_zero_matrix:
        if len(powers) > p:
            raise UnsupportedInput("not unipotent: supply the Jordan spec and basis change explicitly")
        powers.append(N * powers[-1])
    s = len(powers) - 1
    kernels = [p - (powers[k]).rank() for k in range(s + 1)]  # dim ker N^k

    chains: List[List[sympy.Matrix]] = []
    carried: List[sympy.Matrix] = []  # N applied to tops of higher levels, at the current level
    for k in range(s, 0, -1):
        lower = powers[k - 1].nullspace() if k > 1 else []
        span = list(lower) + list(carried)
        rank = sympy.Matrix.hstack(*span).rank() if span else 0
        if k == s:
            candidates = [sympy.eye(p)[:, i] for i in range(p - 1, -1, -1)]
        else:
            candidates = powers[k].nullspace()
        needed = kernels[k] - kernels[k - 1] - len(carried)
        new_tops = []
        for v in candidates:
            if len(new_tops) == needed:
                break
            trial = sympy.Matrix.hstack(*(span + [v])) if span else v
            r = trial.rank()
            if r > rank:
                span.append(v)
                rank = r
                new_tops.append(v)
        if len(new_tops) != needed:
            raise ArithmeticError("failed to complete Jordan chains")
        for v in new_tops:
            chain = [v]
            for _ in range(k - 1):
                chain.append(N * chain[-1])
            chains.append(chain)
        carried = [N * v for v in carried] + [N * v for v in new_tops]
        carried = [v for v in carried if not v.is_zero_matrix]

    chains.sort(key=len, reverse=True)
    Vinv = sympy.Matrix.hstack(*[v for ch in chains for v in ch])
    Q = Vinv.inv()
    spec = ModifiedJordanSpec(tuple(ModifiedJordanBlock(len(ch)) for ch in chains))

    def conv(X):
        out = np.empty((p, p), dtype=object)
        for i in range(p):
            for j in range(p):
                q = Fraction(int(X[i, j].p), int(X[i, j].q))
                out[i, j] = int(q) if q.denominator == 1 else q
        return out

    return spec, conv(Q), conv(Vinv)


def assemble(spec: ModifiedJordanSpec) -> np.ndarray:
    out = _zeros(spec.dim)
    for off, b in zip(spec.offsets(), spec.blocks):
        out[off:off + b.m, off:off + b.m] = block_matrix(b)
    return out
