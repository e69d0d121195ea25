"""Exact arithmetic in SL(2, Z) and the Eichler canonical word.

Every element with c != 0 factors uniquely (up to an overall sign) as

    gamma = sign * (S T^{l_{nu+1}}) ... (S T^{l_1}) (S T^{l_0})

with l_1 > 0, the l_j alternating in sign for 1 <= j <= nu and
(-1)^nu l_{nu+1} >= 0.  Exponents are stored low index first, i.e.
``exponents[j] == l_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple, Union


@dataclass(frozen=True)
class GammaMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    def __matmul__(self, other: "GammaMatrix") -> "GammaMatrix":
        return compose(self, other)

    def __neg__(self) -> "GammaMatrix":
        return GammaMatrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "GammaMatrix":
        return GammaMatrix(self.d, -self.b, -self.c, self.a)

    def rows(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def act(self, tau):
        """Moebius action on a point of the upper half-plane."""
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = GammaMatrix(1, 0, 0, 1)
S = GammaMatrix(0, -1, 1, 0)


def T(l: int = 1) -> GammaMatrix:
    return GammaMatrix(1, l, 0, 1)


def ST(l: int) -> GammaMatrix:
    return GammaMatrix(0, -1, 1, l)


def compose(g1: GammaMatrix, g2: GammaMatrix) -> GammaMatrix:
    return GammaMatrix(
        g1.a * g2.a + g1.b * g2.c,
        g1.a * g2.b + g1.b * g2.d,
        g1.c * g2.a + g1.d * g2.c,
        g1.c * g2.b + g1.d * g2.d,
    )


@dataclass(frozen=True)
class EichlerWord:
    sign: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(l) for l in self.exponents))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not self.exponents:
            raise ValueError("empty exponent sequence")

    @property
    def nu(self) -> int:
        return len(self.exponents) - 2

    @property
    def last(self) -> int:
        """l_{nu+1}."""
        return self.exponents[-1]

    def as_dict(self) -> dict:
        return {"sign": self.sign, "exponents": list(self.exponents), "nu": self.nu}


@dataclass(frozen=True)
class TranslationWord:
    """Result for c == 0 inputs, gamma = sign * T^shift."""

    sign: int
    shift: int

    def as_dict(self) -> dict:
        return {"sign": self.sign, "translation": self.shift}


def sign_pattern_problems(exponents: Sequence[int]) -> List[str]:
    """Violations of the alternating sign pattern; empty when valid.

    A single exponent (nu = -1) carries no condition.
    """
    nu = len(exponents) - 2
    problems = []
    for j in range(1, nu + 1):
        if (-1) ** (j - 1) * exponents[j] <= 0:
            problems.append(f"(-1)^{j - 1} l_{j} > 0 fails (l_{j} = {exponents[j]})")
    if nu >= 0 and (-1) ** nu * exponents[nu + 1] < 0:
        problems.append(f"(-1)^{nu} l_{nu + 1} >= 0 fails (l_{nu + 1} = {exponents[nu + 1]})")
    return problems


def is_sign_valid(exponents: Sequence[int]) -> bool:
    return not sign_pattern_problems(exponents)


def word_product(exponents: Sequence[int]) -> GammaMatrix:
    """(S T^{l_{nu+1}}) ... (S T^{l_0}) without sign or validation."""
    P = ST(exponents[0])
    for l in exponents[1:]:
        P = ST(l) @ P
    return P


def reconstruct(w: Union[EichlerWord, TranslationWord]) -> GammaMatrix:
    if isinstance(w, TranslationWord):
        g = T(w.shift)
        return g if w.sign == 1 else -g
    problems = sign_pattern_problems(w.exponents)
    if problems:
        raise ValueError("invalid Eichler word: " + "; ".join(problems))
    P = word_product(w.exponents)
    return P if w.sign == 1 else -P


def prefix_products(w: EichlerWord) -> List[GammaMatrix]:
    """P_0 = S T^{l_0}, P_{j+1} = (S T^{l_{j+1}}) P_j."""
    out = [ST(w.exponents[0])]
    for l in w.exponents[1:]:
        out.append(ST(l) @ out[-1])
    return out


def _continued_fraction(num: int, den: int) -> List[int]:
    quotients = []
    while den:
        q, r = divmod(num, den)
        quotients.append(q)
        num, den = den, r
    return quotients


def _cf_variants(num: int, den: int) -> List[List[int]]:
    """Both regular expansions of num/den (> 0) with positive partial quotients."""
    cf = _continued_fraction(num, den)
    out = []
    if all(q >= 1 for q in cf):
        out.append(cf)
    if cf[-1] >= 2 and (len(cf) > 1 or cf[0] >= 2):
        alt = cf[:-1] + [cf[-1] - 1, 1]
        if all(q >= 1 for q in alt):
            out.append(alt)
    return out


def _fit_word(g: GammaMatrix, tail: List[int]) -> Optional[EichlerWord]:
    """Given l_1..l_{nu+1}, solve for the sign and l_0; None if impossible."""
    M = S
    for l in tail:
        M = ST(l) @ M
    # g = eps * M * T^{l_0}; first columns agree up to eps
    if (M.a, M.c) == (g.a, g.c):
        eps = 1
    elif (M.a, M.c) == (-g.a, -g.c):
        eps = -1
    else:
        return None
    num = eps * g.d - M.d
    if num % M.c:
        return None
    w = EichlerWord(eps, (num // M.c,) + tuple(tail))
    if sign_pattern_problems(w.exponents) or reconstruct(w) != g:
        return None
    return w


def eichler_decompose(g: GammaMatrix) -> Union[EichlerWord, TranslationWord]:
    """Canonical word of g via continued-fraction steps on the first column.

    The magnitudes |c_j| of the first-column lower entries of the prefix
    products satisfy |c_{j+1}| = |l_{j+1}| |c_j| + |c_{j-1}|, so the |l_j|
    are partial quotients of c/|a| (last exponent nonzero) or of |a|/c
    (last exponent zero).  Signs are forced by the pattern; the sign flag
    and l_0 are solved at the end.
    """
    if g.c == 0:
        return TranslationWord(g.a, g.a * g.b)
    flip = g.c < 0
    h = -g if flip else g
    A, C = abs(h.a), h.c
    if A == 0:
        w = EichlerWord(1, (h.d,))
        return EichlerWord(-w.sign, w.exponents) if flip else w

    candidates = []
    for cf in _cf_variants(C, A):
        mags = cf[::-1]  # |l_1| .. |l_{nu+1}|
        candidates.append([(-1) ** j * m for j, m in enumerate(mags)])
    for cf in _cf_variants(A, C):
        mags = cf[::-1]  # |l_1| .. |l_nu|
        candidates.append([(-1) ** j * m for j, m in enumerate(mags)] + [0])

    found = [w for w in (_fit_word(h, tail) for tail in candidates) if w is not None]
    if len(found) != 1:
        raise ArithmeticError(f"no unique Eichler word for {g} ({len(found)} candidates)")
    w = found[0]
    return EichlerWord(-w.sign, w.exponents) if flip else w


def eichler_length(w: EichlerWord) -> int:
    nu, l0, last = w.nu, w.exponents[0], w.last
    if nu == -1:
        return 2 if l0 else 1
    if l0 and last:
        return 2 * nu + 4
    if last:
        return 2 * nu + 3
    if l0:
        return 2 * nu + 1
    return 2 * nu


def lame_ratio(w: EichlerWord, g: GammaMatrix) -> float:
    if g.c == 0:
        raise ValueError("Lame ratio undefined for c = 0")
    return eichler_length(w) / (math.log(abs(g.c)) + 1.0)


def enumerate_gamma(c_max: int, d_max: int) -> Iterator[GammaMatrix]:
    """One representative per coprime (c, d), 1 <= c <= c_max, |d| <= d_max.

    a is the least nonnegative inverse of d mod c, b = (ad - 1)/c.
    """
    if c_max < 1 or d_max < 1:
        raise ValueError("bounds must be >= 1")
    for c in range(1, c_max + 1):
        for d in range(-d_max, d_max + 1):
            if math.gcd(c, d) != 1:
                continue
            a = pow(d, -1, c) if c > 1 else 0
            yield GammaMatrix(a, (a * d - 1) // c, c, d)


def _product(xs: Sequence[int]) -> int:
    return math.prod(abs(x) for x in xs)


# ---------------------------------------------------------------------------
# first-column dichotomy and the product estimates


def dichotomy_violations(g: GammaMatrix, w: EichlerWord) -> List[str]:
    """Check  l_{nu+1} != 0  <=>  |a/c| < 1,  and  |l_nu| = floor(|a/c|) otherwise."""
    out = []
    if w.nu < 0:  # a single factor S T^l has no dichotomy to check
        return out
    small = abs(g.a) < abs(g.c)
    if (w.last != 0) != small:
        out.append(f"l_(nu+1) = {w.last} but |a/c| = {abs(g.a)}/{abs(g.c)}")
    if w.last == 0 and w.nu >= 1:
        fl = abs(g.a) // abs(g.c)
        if abs(w.exponents[w.nu]) != fl:
            out.append(f"|l_nu| = {abs(w.exponents[w.nu])} != floor|a/c| = {fl}")
    return out


@dataclass
class Check:
    name: str
    lhs: int
    rhs: int
    j: Optional[int] = None

    @property
    def ok(self) -> bool:
        if self.name.startswith("sign"):
            return self.lhs >= 0
        return self.lhs <= self.rhs

    def describe(self) -> str:
        where = "" if self.j is None else f" at j={self.j}"
        rel = ">= 0" if self.name.startswith("sign") else f"<= {self.rhs}"
        return f"{self.name}{where}: {self.lhs} {rel}"


@dataclass
class ProductBoundReport:
    case: str
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ch.ok for ch in self.checks)

    @property
    def failures(self) -> List[str]:
        return [ch.describe() for ch in self.checks if not ch.ok]

    def as_dict(self) -> dict:
        return {"case": self.case, "pass": self.ok, "n_checks": len(self.checks),
                "failures": self.failures}


def _inductive_checks(exps: Sequence[int], prefixes: Sequence[GammaMatrix],
                      upto: int) -> List[Check]:
    """Per-step invariants for j = 0..upto on a word with l_0 != 0."""
    checks = []
    l0 = exps[0]
    for j in range(upto + 1):
        P = prefixes[j]
        prod = _product(exps[: j + 1])
        if l0 < 0:
            checks.append(Check("|l_0..l_j| <= |d_j|", prod, abs(P.d), j))
            checks.append(Check("sign (-1)^j b_j d_j", (-1) ** j * P.b * P.d, 0, j))
        else:
            checks.append(Check("|l_0..l_j| <= |c_j|+|d_j|", prod, abs(P.c) + abs(P.d), j))
            if j >= 1:
                checks.append(Check("sign (-1)^j b_j d_j", (-1) ** j * P.b * P.d, 0, j))
                checks.append(Check("sign (-1)^j a_j c_j", (-1) ** j * P.a * P.c, 0, j))
    return checks


def verify_prop3(w: EichlerWord, g: GammaMatrix) -> ProductBoundReport:
    """All product estimates and per-step invariants, exact integers.

    For l_{nu+1} != 0 the estimate runs over the full word; for
    l_{nu+1} == 0 over l_0..l_{nu-1}, whose prefix P_{nu-1} equals
    -sign * T^{-l_nu} g and so has bottom row +-(c, d).  The l_0 == 0 case
    goes through g T^{-1}, whose word has l_0 = -1.
    """
    if g.c == 0:
        raise ValueError("product estimates assume c != 0")
    exps = w.exponents
    nu = w.nu
    full = w.last != 0 or nu == -1
    top = nu + 1 if full else nu - 1
    case = ("a" if full else "b") + (":l0<0" if exps[0] < 0 else ":l0=0" if exps[0] == 0 else ":l0>0")
    report = ProductBoundReport(case)
    c, d = g.c, g.d
    if exps[0] < 0:
        report.checks.append(Check("|l_0..| <= |d|", _product(exps[: top + 1]), abs(d)))
    elif exps[0] > 0:
        report.checks.append(Check("|l_0..| <= |c|+|d|", _product(exps[: top + 1]), abs(c) + abs(d)))
    else:
        report.checks.append(Check("|l_1..| <= |d-c|", _product(exps[1: top + 1]), abs(d - c)))

    if exps[0] != 0:
        report.checks += _inductive_checks(exps, prefix_products(w), top)
    else:
        shifted = eichler_decompose(g @ T(-1))
        expected = (-1,) + exps[1:]
        if not isinstance(shifted, EichlerWord) or shifted.exponents != expected:
            report.checks.append(Check("word of g T^-1 has l_0 = -1", 1, 0))
        else:
            report.checks += _inductive_checks(shifted.exponents, prefix_products(shifted), top)
    return report


# ---------------------------------------------------------------------------
# Lame ratio sweeps


def canonical_nu(a: int, c: int) -> int:
    """nu of the canonical word for any gamma with first column (a, c), 0 <= a < c.

    Integer-only version of the decomposition's candidate search, used for
    large sweeps.  With a < c the last exponent is nonzero, and l_0 can be
    shifted freely by choosing d in the class, so nu is all that matters.
    """
    if c == 1:
        return -1
    for cf in _cf_variants(c, a):
        tail = [(-1) ** j * m for j, m in enumerate(cf[::-1])]
        x, y = 0, 1  # first column of S
        for l in tail:
            x, y = -y, x + l * y
        if (x, y) in ((a, c), (-a, -c)):
            return len(tail) - 1
    raise ArithmeticError(f"no canonical word for first column ({a}, {c})")


@dataclass
class LameSweep:
    c_max: int
    sup_ratio: float
    argmax: Tuple[int, int]  # (a, c)
    classes: int


def lame_sweep(c_max: int) -> LameSweep:
    """Max of L/(ln c + 1) over every class (c, a mod c), c <= c_max, with l_0 != 0."""
    best, arg, count = 0.0, (0, 1), 0
    for c in range(1, c_max + 1):
        denom = math.log(c) + 1.0
        for a in range(c):
            if math.gcd(a, c) != 1:
                continue
            count += 1
            L = 2 * canonical_nu(a, c) + 4
            if L / denom > best:
                best, arg = L / denom, (a, c)
    return LameSweep(c_max, best, arg, count)


def fibonacci_word(nu: int, l0: int = 1) -> EichlerWord:
    """Exponents l_0, 1, -1, 1, ... (nu + 1 alternating unit steps)."""
    return EichlerWord(1, (l0,) + tuple((-1) ** j for j in range(nu + 1)))


def fibonacci_family(c_max: int) -> List[Tuple[int, int, float]]:
    """(nu, c, Lame ratio) along the alternating unit-exponent words with |c| <= c_max."""
    out = []
    nu = 0
    while True:
        w = fibonacci_word(nu)
        g = reconstruct(w)
        if abs(g.c) > c_max:
            return out
        out.append((nu, abs(g.c), lame_ratio(w, g)))
        nu += 1
