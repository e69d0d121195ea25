"""Matrix representations of SL(2, Z), the max-norm and the word-based bounds.

Representations are given by rho(S), rho(T) (optionally with a modified
Jordan form of rho(T) and the basis change to it).  Integer representations
are handled exactly: products run in int64 while the entries provably fit and
fall back to Python integers otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from . import jordan as jb
from .sl2z import (EichlerWord, GammaMatrix, TranslationWord, eichler_decompose,
                   enumerate_gamma, lame_ratio)

Matrix = np.ndarray
_INT64_SAFE = 2**62


def _as_exact(M) -> Matrix:
    """int64 array if every entry is an integer, else an object array."""
    arr = np.asarray(M, dtype=object)
    if all(isinstance(x, (int, np.integer)) or (isinstance(x, Fraction) and x.denominator == 1)
           for x in arr.ravel()):
        ints = [int(x) for x in arr.ravel()]
        if max((abs(v) for v in ints), default=0) < _INT64_SAFE:
            return np.array(ints, dtype=np.int64).reshape(arr.shape)
        return np.array(ints, dtype=object).reshape(arr.shape)
    return arr


def max_norm(M) -> Union[int, Fraction, float]:
    """Largest absolute entry; exact for exact matrices."""
    M = np.asarray(M)
    if M.dtype == np.int64:
        return int(np.abs(M).max())
    if M.dtype == object:
        return max(abs(x) for x in M.ravel())
    return float(np.abs(M).max())


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if A.dtype == np.int64 and B.dtype == np.int64:
        bound = int(np.abs(A).max()) * int(np.abs(B).max()) * A.shape[1]
        if bound < _INT64_SAFE:
            return A @ B
        return _as_exact(A.astype(object) @ B.astype(object))
    if A.dtype == complex or B.dtype == complex:
        return A.astype(complex) @ B.astype(complex)
    return _as_exact(A.astype(object) @ B.astype(object))


def _identity_like(M: Matrix) -> Matrix:
    p = M.shape[0]
    if M.dtype == complex:
        return np.eye(p, dtype=complex)
    return np.eye(p, dtype=np.int64)


def mat_equal(A: Matrix, B: Matrix, tol: float = 1e-10) -> bool:
    if A.dtype == complex or B.dtype == complex:
        return bool(np.allclose(A.astype(complex), B.astype(complex), atol=tol, rtol=0))
    return all(x == y for x, y in zip(A.ravel(), B.ravel()))


def sym_power_matrix(g: Union[GammaMatrix, Tuple[int, int, int, int]], m: int) -> Matrix:
    """Sym^m on monomials X^{m-i} Y^i: row i holds (aX+bY)^{m-i} (cX+dY)^i."""
    a, b, c, d = (g.a, g.b, g.c, g.d) if isinstance(g, GammaMatrix) else g

    def expand(u, v, e):  # (uX + vY)^e as coefficients of X^{e-j} Y^j
        return [math.comb(e, j) * u ** (e - j) * v**j for j in range(e + 1)]

    rows = []
    for i in range(m + 1):
        left, right = expand(a, b, m - i), expand(c, d, i)
        row = [0] * (m + 1)
        for j1, x in enumerate(left):
            for j2, y in enumerate(right):
                row[j1 + j2] += x * y
        rows.append(row)
    return _as_exact(rows)


@dataclass
class Representation:
    name: str
    rhoS: Matrix
    rhoT: Matrix
    jordan: Optional[jb.ModifiedJordanSpec] = None
    Q: Optional[Matrix] = None       # Q rhoT Q^{-1} is the modified Jordan form
    Qinv: Optional[Matrix] = None
    _tpow: Dict[int, Matrix] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.rhoS = _as_numeric_or_exact(self.rhoS)
        self.rhoT = _as_numeric_or_exact(self.rhoT)

    @property
    def p(self) -> int:
        return self.rhoS.shape[0]

    @property
    def exact(self) -> bool:
        return self.rhoS.dtype != complex and self.rhoT.dtype != complex

    @property
    def s(self) -> int:
        return self.jordan.s if self.jordan is not None else 1

    def relation_errors(self) -> Dict[str, float]:
        S, T = self.rhoS, self.rhoT
        I = _identity_like(S)
        S2 = mat_mul(S, S)
        S4 = mat_mul(S2, S2)
        ST = mat_mul(S, T)
        ST3 = mat_mul(mat_mul(ST, ST), ST)
        out = {}
        for name, A, B in (("S^4 = I", S4, I), ("(ST)^3 = S^2", ST3, S2)):
            diff = A.astype(complex) - B.astype(complex)
            out[name] = float(np.abs(diff).max())
        eig = np.linalg.eigvals(T.astype(complex))
        out["|eig T| = 1"] = float(np.abs(np.abs(eig) - 1).max())
        return out

    def validate(self, tol: float = 1e-10) -> None:
        errs = self.relation_errors()
        if self.exact:
            bad = [k for k in ("S^4 = I", "(ST)^3 = S^2") if errs[k] != 0]
        else:
            bad = [k for k in ("S^4 = I", "(ST)^3 = S^2") if errs[k] > tol]
        if errs["|eig T| = 1"] > max(tol, 1e-6 if self.s > 1 else tol):
            bad.append("|eig T| = 1")
        if bad:
            raise ValueError(f"{self.name}: relations fail: {', '.join(bad)}")

    def minus_identity(self) -> Matrix:
        return mat_mul(self.rhoS, self.rhoS)

    def T_power(self, l: int) -> Matrix:
        """rho(T)^l, through the Jordan form when one is attached."""
        if l not in self._tpow:
            self._tpow[l] = self._compute_T_power(l)
        return self._tpow[l]

    def _compute_T_power(self, l: int) -> Matrix:
        if self.jordan is not None and self.Q is not None:
            J = jb.rhoT_power(self.jordan, l)
            M = jb.exact_matmul(jb.exact_matmul(self.Qinv, J), self.Q)
            if self.exact and all(not isinstance(x, jb.Cyclotomic) for x in M.ravel()):
                return _as_exact(M)
            return jb.to_complex(M)
        base = self.rhoT
        if l < 0:
            base = _inverse(base)
            l = -l
        out = _identity_like(base)
        for _ in range(l):
            out = mat_mul(out, base)
        return out

    def S_inverse(self) -> Matrix:
        return mat_mul(self.minus_identity(), self.rhoS)

    def as_dict(self) -> dict:
        def enc(M):
            return [[_encode_entry(x) for x in row] for row in np.asarray(M).tolist()]
        out = {"name": self.name, "p": self.p, "rhoS": enc(self.rhoS), "rhoT": enc(self.rhoT)}
        if self.jordan is not None:
            out["jordan"] = dict(self.jordan.as_dict())
            if self.Q is not None:
                out["jordan"]["basis_change"] = enc(self.Q)
        return out


def _inverse(M: Matrix) -> Matrix:
    if M.dtype == complex:
        return np.linalg.inv(M)
    import sympy
    inv = sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in M.tolist()]).inv()
    return _as_exact([[Fraction(int(v.p), int(v.q)) for v in inv.row(i)] for i in range(inv.rows)])


def _encode_entry(x):
    if isinstance(x, (int, np.integer)):
        return [str(int(x)), "0"]
    if isinstance(x, Fraction):
        return [str(x), "0"]
    z = complex(x)
    return [repr(z.real), repr(z.imag)]


def _decode_entry(e):
    if isinstance(e, (list, tuple)):
        re, im = e
    else:
        re, im = e, 0
    re_s, im_s = str(re), str(im)
    try:
        qr, qi = Fraction(re_s), Fraction(im_s)
        if qi == 0:
            return int(qr) if qr.denominator == 1 else qr
        return complex(float(qr), float(qi))
    except ValueError:
        return complex(float(re_s), float(im_s))


def _as_numeric_or_exact(M) -> Matrix:
    arr = np.asarray(M, dtype=object) if not isinstance(M, np.ndarray) else M
    if arr.dtype == complex:
        return arr
    if arr.dtype == np.int64:
        return arr
    if any(isinstance(x, (complex, float, np.complexfloating, np.floating)) for x in arr.ravel()):
        return arr.astype(complex)
    return _as_exact(arr)


def load_representation(path) -> Representation:
    """JSON with keys name, p, rhoS, rhoT and optional jordan {blocks, basis_change}."""
    data = json.loads(Path(path).read_text())
    return representation_from_dict(data)


def representation_from_dict(data: dict) -> Representation:
    dec = lambda rows: [[_decode_entry(e) for e in row] for row in rows]  # noqa: E731
    rhoS, rhoT = dec(data["rhoS"]), dec(data["rhoT"])
    if len(rhoS) != data.get("p", len(rhoS)):
        raise ValueError("dimension p does not match rhoS")
    rep = Representation(data.get("name", "rep"), rhoS, rhoT)
    if "jordan" in data:
        blocks = [jb.ModifiedJordanBlock(b["m"], Fraction(str(b.get("mu", "0"))))
                  for b in data["jordan"]["blocks"]]
        spec = jb.ModifiedJordanSpec(tuple(blocks))
        if "basis_change" in data["jordan"]:
            Q = np.array(dec(data["jordan"]["basis_change"]), dtype=object)
            Qinv = _inverse(_as_numeric_or_exact(Q))
            rep.jordan, rep.Q, rep.Qinv = spec, Q, np.asarray(Qinv, dtype=object)
        else:
            rep.jordan = spec
    elif rep.exact:
        try:
            spec, Q, Qinv = jb.canonicalize_unipotent(rep.rhoT)
            rep.jordan, rep.Q, rep.Qinv = spec, Q, Qinv
        except jb.UnsupportedInput:
            pass
    return rep


def save_representation(rep: Representation, path) -> None:
    Path(path).write_text(json.dumps(rep.as_dict(), indent=1))


@lru_cache(maxsize=None)
def sym_power_rep(m: int) -> Representation:
    """Symmetric m-th power of the defining representation, unipotent rho(T)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    S_ = sym_power_matrix((0, -1, 1, 0), m)
    T_ = sym_power_matrix((1, 1, 0, 1), m)
    spec, Q, Qinv = jb.canonicalize_unipotent(T_)
    return Representation(f"sym{m}", S_, T_, spec, Q, Qinv)


# ---------------------------------------------------------------------------
# rho on words


def rho_of(rep: Representation, w: Union[EichlerWord, TranslationWord]) -> Matrix:
    """sign * rho(S) rho(T)^{l_{nu+1}} ... rho(S) rho(T)^{l_0}, rho(-I) = rho(S)^2."""
    if isinstance(w, TranslationWord):
        M = rep.T_power(w.shift)
    else:
        M = None
        for l in w.exponents:
            F = mat_mul(rep.rhoS, rep.T_power(l))
            M = F if M is None else mat_mul(F, M)
    if w.sign == -1:
        M = mat_mul(rep.minus_identity(), M)
    return M


def rho_of_inverse(rep: Representation, w: EichlerWord) -> Matrix:
    """rho(gamma^{-1}) = sign * (T^{-l_0} S^{-1}) (T^{-l_1} S^{-1}) ... ."""
    Sinv = rep.S_inverse()
    M = None
    for l in w.exponents:
        F = mat_mul(rep.T_power(-l), Sinv)
        M = F if M is None else mat_mul(M, F)
    if w.sign == -1:
        M = mat_mul(rep.minus_identity(), M)
    return M


def rho_of_gamma(rep: Representation, g: GammaMatrix) -> Matrix:
    return rho_of(rep, eichler_decompose(g))


@dataclass
class BoundResult:
    lhs: object
    rhs: object
    nu: int
    case: str
    inverse: bool = False

    @property
    def ok(self) -> bool:
        if isinstance(self.lhs, float) or isinstance(self.rhs, float):
            return self.lhs <= self.rhs * (1 + 1e-12)
        return self.lhs <= self.rhs

    def as_dict(self) -> dict:
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "nu": self.nu,
                "case": self.case, "inverse": self.inverse, "pass": self.ok}


def _minus_factor(rep: Representation):
    """Extra factor when rho(-I) is not a unimodular scalar (1 for Sym^m)."""
    mI = rep.minus_identity()
    I = _identity_like(mI)
    if mat_equal(mI, I) or mat_equal(mI, -I):
        return 1
    return rep.p * max_norm(mI)


def bound_chain(rep: Representation, w: EichlerWord, inverse: bool = False) -> BoundResult:
    """||rho(gamma)|| against the explicit word product bound.

    l_{nu+1} != 0:  p^{2nu+2} ||rho(S)||^{nu+2} prod_{j=0}^{nu+1} ||rho(T^{l_j})||
    l_{nu+1} == 0:  p^{2nu+1} ||rho(S)||^{nu}   prod_{j=0}^{nu}   ||rho(T^{l_j})||
    With inverse=True the same right side is used with T^{-l_j} for gamma^{-1}.
    """
    p, nu = rep.p, w.nu
    sgn = -1 if inverse else 1
    nS = max_norm(rep.rhoS)
    if inverse:
        nS = max(nS, max_norm(rep.S_inverse()))
    tn = [max_norm(rep.T_power(sgn * l)) for l in w.exponents]
    if w.last != 0 or nu == -1:
        case = "l_{nu+1} != 0"
        rhs = p ** (2 * nu + 2) * nS ** (nu + 2) * math.prod(tn)
    else:
        case = "l_{nu+1} = 0"
        rhs = p ** (2 * nu + 1) * nS**nu * math.prod(tn[: nu + 1])
    rhs = rhs * _minus_factor(rep)
    lhs = max_norm(rho_of_inverse(rep, w) if inverse else rho_of(rep, w))
    return BoundResult(lhs, rhs, nu, case, inverse)


# ---------------------------------------------------------------------------
# consolidated polynomial bound


@dataclass
class FittedConstants:
    K3: float
    K4: float
    Kemp: float
    Cs: float
    alpha: float
    c_max: int
    d_max: int
    degenerate: bool = False
    max_residual: float = 0.0
    n_train: int = 0
    n_valid: int = 0
    violations: int = 0
    inverse_violations: int = 0
    worst_ratio: float = 0.0

    def bound(self, c: int, d: int, l_nu_factor: float = 1.0) -> float:
        return self.K3 * (c * c + d * d) ** self.K4 * l_nu_factor

    def as_dict(self) -> dict:
        return {k: (repr(v) if isinstance(v, float) else v) for k, v in self.__dict__.items()}


def _l_nu_factor(rep: Representation, w: EichlerWord) -> int:
    if w.last == 0 and w.nu >= 1:
        return abs(w.exponents[w.nu]) ** (rep.s - 1)
    return 1


@lru_cache(maxsize=8)
def enumerated_words(c_max: int, d_max: int) -> Tuple[Tuple[GammaMatrix, EichlerWord], ...]:
    """(gamma, canonical word) for the standard enumeration, shared between sweeps."""
    return tuple((g, eichler_decompose(g)) for g in enumerate_gamma(c_max, d_max))


def _norm_samples(rep: Representation, c_max: int, d_max: int):
    """(c, d, log-norm-adjusted, log-inverse-norm-adjusted, lame ratio) per enumerated gamma."""
    out = []
    for g, w in enumerated_words(c_max, d_max):
        f = _l_nu_factor(rep, w)
        n = float(max_norm(rho_of(rep, w)))
        ni = float(max_norm(rho_of_inverse(rep, w)))
        out.append((g.c, g.d, math.log(n) - math.log(f), math.log(ni) - math.log(f), lame_ratio(w, g)))
    return out


def fit_polynomial_exponent(rep: Representation, c_max: int, d_max: Optional[int] = None,
                            l_range: int = 1000) -> FittedConstants:
    """Fit ||rho(gamma)|| <= K3 (c^2+d^2)^K4 (|l_nu|^{s-1} when l_{nu+1} = 0).

    Slope K4 is the least-squares slope of the forward norms on odd c; K3 is
    then raised until every training point, forward and inverse, sits under
    the bound.  Even c is held out for validation.
    """
    if c_max < 10:
        raise ValueError("c_max must be >= 10")
    d_max = c_max if d_max is None else d_max
    data = _norm_samples(rep, c_max, d_max)
    train = [r for r in data if r[0] % 2 == 1]
    valid = [r for r in data if r[0] % 2 == 0]
    x = np.array([math.log(c * c + d * d) for c, d, *_ in train])
    y = np.array([r[2] for r in train])
    degenerate = float(np.ptp(y)) == 0.0
    if degenerate:
        K4 = 0.0
    else:
        K4 = float(np.polyfit(x, y, 1)[0])
    resid = y - K4 * x
    # one constant pair has to cover gamma and gamma^{-1}, so K3 also sees the inverses
    yi = np.array([r[3] for r in train])
    logK3 = float(max(resid.max(), (yi - K4 * x).max()))
    K3 = math.exp(logK3)
    intercept = float(np.mean(resid))
    eps = 1e-12

    def count(rows, col):
        bad, worst = 0, -math.inf
        for r in rows:
            xv = math.log(r[0] ** 2 + r[1] ** 2)
            gap = r[col] - (logK3 + K4 * xv)
            worst = max(worst, gap)
            bad += gap > eps
        return bad, worst

    v_bad, v_worst = count(valid, 2)
    i_bad, i_worst = count(valid, 3)
    Cs = jb.norm_bound_constant(rep.jordan, l_range) if rep.jordan is not None else 1.0
    return FittedConstants(
        K3=K3, K4=K4, Kemp=max(r[4] for r in data), Cs=Cs, alpha=2 * K4,
        c_max=c_max, d_max=d_max, degenerate=degenerate, max_residual=logK3 - intercept,
        n_train=len(train), n_valid=len(valid), violations=v_bad, inverse_violations=i_bad,
        worst_ratio=math.exp(max(v_worst, i_worst)),
    )


def inverse_bound_check(rep: Representation, w: EichlerWord, g: GammaMatrix,
                        consts: FittedConstants) -> BoundResult:
    lhs = float(max_norm(rho_of_inverse(rep, w)))
    rhs = consts.bound(g.c, g.d, _l_nu_factor(rep, w))
    return BoundResult(lhs, rhs * (1 + 1e-12), w.nu, "fitted", inverse=True)
