"""Desk-scale logarithmic vector-valued modular forms and the growth checks.

The bundled family is Sym^m tensor a level-one form f of weight w:
F_i(tau) = tau^{m-i} f(tau), i = 0..m, is covariant of weight k = w - m for
the symmetric power representation.  Moving to the Jordan basis, G = Q F,
puts the components in block shape g_j(tau+1) = g_j(tau) + g_{j-1}(tau).
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import qseries as qs
from .logexp import Poly, PolyQExpansion, PolySeries, h_from_components
from .qseries import QSeries
from .rep import (FittedConstants, Representation, fit_polynomial_exponent, rho_of,
                  sym_power_rep)
from .sl2z import (GammaMatrix, IDENTITY, S, T, EichlerWord, eichler_decompose,
                   enumerate_gamma)


# ---------------------------------------------------------------------------
# multipliers


@dataclass(frozen=True)
class Multiplier:
    name: str
    weight: int
    make: Callable[[int], QSeries]


MULTIPLIERS: Dict[str, Multiplier] = {
    "delta": Multiplier("delta", 12, qs.delta_series),
    "delta2": Multiplier("delta2", 24, lambda N: qs.delta_power(2, N)),
    "delta3": Multiplier("delta3", 36, lambda N: qs.delta_power(3, N)),
    "e4": Multiplier("e4", 4, lambda N: qs.eisenstein(4, N)),
    "e6": Multiplier("e6", 6, lambda N: qs.eisenstein(6, N)),
    "e4delta": Multiplier("e4delta", 16, lambda N: qs.eisenstein(4, N) * qs.delta_series(N)),
    "zero": Multiplier("zero", 12, lambda N: QSeries.zero(N)),
}

# name -> (m, multiplier)
EXAMPLES: Dict[str, Tuple[int, str]] = {
    "sym0-e4": (0, "e4"),
    "sym0-delta": (0, "delta"),
    "sym1-delta": (1, "delta"),
    "sym1-delta2": (1, "delta2"),
    "sym1-delta3": (1, "delta3"),
    "sym1-e4delta": (1, "e4delta"),
    "sym2-delta2": (2, "delta2"),
    "sym3-delta2": (3, "delta2"),
    "sym1-zero": (1, "zero"),
}


class NotLevelOne(ValueError):
    pass


def check_level_one(f: QSeries, weight: int, tol: float = 1e-9) -> None:
    """Reject multipliers that are not invariant under T and weight-w under S."""
    if f.mu != 0:
        raise NotLevelOne("multiplier must have integral exponents")
    if f.is_zero():
        return
    for tau in (0.1 + 1.1j, -0.2 + 1.3j):
        lhs = f.evaluate(-1 / tau)
        rhs = tau**weight * f.evaluate(tau)
        if abs(lhs - rhs) > tol * (1 + abs(rhs)):
            raise NotLevelOne(f"f(-1/tau) != tau^{weight} f(tau) at tau = {tau}")


# ---------------------------------------------------------------------------
# the forms


@dataclass
class LVVMF:
    name: str
    k: int
    rep: Representation
    components: List[PolySeries]        # F_i in the representation's own basis
    block_components: List[List[PolySeries]]  # g_j per Jordan block (G = Q F)
    blocks: List[PolyQExpansion]
    kind: str
    order: int
    recipe: Optional[Tuple[int, str]] = None
    _cache: Dict[int, "LVVMF"] = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(t.is_zero() for c in self.components for t in c.terms)

    def evaluate(self, tau: complex) -> np.ndarray:
        return np.array([c.evaluate(tau) for c in self.components], dtype=complex)

    def at_order(self, order: int) -> "LVVMF":
        """Same form with series recomputed to a longer truncation."""
        if order <= self.order or self.recipe is None:
            return self
        if order not in self._cache:
            m, mult = self.recipe
            self._cache[order] = build_named(f"{m}:{mult}", order, recipe=self.recipe)
        return self._cache[order]


def _tau_power(f: QSeries, e: int) -> PolySeries:
    return PolySeries.of(f).times_poly(Poly.x() ** e)


def _combine(coeffs: Sequence, parts: Sequence[PolySeries]) -> PolySeries:
    acc = None
    for c, part in zip(coeffs, parts):
        if c == 0:
            continue
        term = part.scale(c)
        acc = term if acc is None else acc + term
    if acc is None:
        acc = parts[0].scale(0)
    return acc


def build_sym_example(m: int, multiplier: QSeries, weight: int, name: str = "",
                      check: bool = True) -> LVVMF:
    """F = f (tau^m, ..., tau, 1) for Sym^m; weight weight - m."""
    if check:
        check_level_one(multiplier, weight)
    rep = sym_power_rep(m)
    F = [_tau_power(multiplier, m - i) for i in range(m + 1)]
    G = [_combine(list(rep.Q[j]), F) for j in range(m + 1)]
    blocks, block_components = [], []
    for off, b in zip(rep.jordan.offsets(), rep.jordan.blocks):
        g = G[off:off + b.m]
        block_components.append(g)
        blocks.append(h_from_components(g))
    kind = qs.classify_many([h for b in blocks for h in b.h])
    return LVVMF(name or f"sym{m}", weight - m, rep, F, block_components, blocks, kind,
                 multiplier.order)


def build_named(example: str, order: int, recipe: Optional[Tuple[int, str]] = None) -> LVVMF:
    """Bundled example by name ("sym1-delta") or by "m:multiplier"."""
    if recipe is None:
        if example in EXAMPLES:
            recipe = EXAMPLES[example]
        elif ":" in example:
            m_s, mult = example.split(":", 1)
            recipe = (int(m_s), mult)
        else:
            raise KeyError(f"unknown example {example!r}; known: {', '.join(EXAMPLES)}")
    m, mult = recipe
    spec = MULTIPLIERS[mult]
    F = build_sym_example(m, spec.make(order), spec.weight,
                          name=example if example in EXAMPLES else f"sym{m}-{mult}")
    F.recipe = recipe
    return F


# ---------------------------------------------------------------------------
# slash covariance


def slash(F: LVVMF, g: GammaMatrix, tau: complex) -> np.ndarray:
    """(F|_k gamma)(tau) = (c tau + d)^{-k} F(gamma tau)."""
    j = g.c * tau + g.d
    return j ** (-F.k) * F.evaluate(g.act(tau))


def _needed_order(F: LVVMF, taus: Sequence[complex], tol: float, cap: int) -> Optional[int]:
    order = max(F.order, 60)
    while order <= cap:
        G = F.at_order(order)
        ok = True
        for tau in taus:
            for c in G.components:
                for d, S_d in enumerate(c.terms):
                    if S_d.is_zero():
                        continue
                    value, tail = S_d.evaluate(tau, with_tail=True)
                    if abs(tau) ** d * tail > tol * (1 + abs(tau) ** d * abs(value)):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return order
        order *= 2
    return None


@dataclass
class SlashReport:
    example: str
    n_gamma: int
    n_samples: int
    max_rel_error: float
    worst_gamma: Tuple[int, int, int, int]
    orders_used: List[int]
    inconclusive: List[Tuple[int, int, int, int]]
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_rel_error < self.tol and not self.inconclusive

    def as_dict(self) -> dict:
        return {"example": self.example, "gammas": self.n_gamma, "samples": self.n_samples,
                "max_rel_error": repr(self.max_rel_error),
                "worst_gamma": list(self.worst_gamma),
                "max_order": max(self.orders_used) if self.orders_used else 0,
                "inconclusive": [list(g) for g in self.inconclusive],
                "tol": repr(self.tol), "pass": self.ok}


def sample_taus(n: int, seed: int = 0, im_min: float = 0.3, im_max: float = 1.5) -> List[complex]:
    rng = random.Random(seed)
    return [complex(rng.uniform(-0.5, 0.5), rng.uniform(im_min, im_max)) for _ in range(n)]


def slash_gammas(c_max: int) -> List[GammaMatrix]:
    """Canonical gammas with 1 <= c <= c_max, |d| <= c_max, their negatives, and T, S, -I."""
    base = list(enumerate_gamma(c_max, c_max))
    out = base + [-g for g in base]
    out += [T(1), T(-1), T(3), S, -IDENTITY]
    return out


def slash_check(F: LVVMF, gammas: Sequence[GammaMatrix], taus: Sequence[complex],
                tol: float = 1e-8, min_order: int = 60, order_cap: int = 16000) -> SlashReport:
    """max |rho(gamma) F(tau) - (F|_k gamma)(tau)| / (1 + |F(gamma tau)|).

    The series order is raised until the estimated tail at both tau and gamma
    tau is far below tol; if the cap is hit the gamma is reported as
    inconclusive instead of failing.
    """
    if any(t.imag <= 0 for t in taus):
        raise ValueError("samples must lie in the upper half-plane")
    worst, worst_g = 0.0, (1, 0, 0, 1)
    orders, inconclusive = [], []
    for g in gammas:
        images = [g.act(t) for t in taus]
        order = _needed_order(F.at_order(min_order), list(taus) + images, tol * 1e-2, order_cap)
        if order is None:
            inconclusive.append((g.a, g.b, g.c, g.d))
            continue
        orders.append(order)
        G = F.at_order(order)
        R = rho_of(G.rep, eichler_decompose(g)).astype(complex)
        for tau, img in zip(taus, images):
            lhs = R @ G.evaluate(tau)
            Fimg = G.evaluate(img)
            rhs = (g.c * tau + g.d) ** (-G.k) * Fimg
            err = float(np.max(np.abs(lhs - rhs)) / (1 + np.max(np.abs(Fimg))))
            if err > worst:
                worst, worst_g = err, (g.a, g.b, g.c, g.d)
    return SlashReport(F.name, len(gammas), len(taus), worst, worst_g, orders, inconclusive, tol)


# ---------------------------------------------------------------------------
# fundamental domain


def reduce_to_fundamental_domain(x: Fraction, y: Fraction,
                                 max_steps: int = 10_000) -> Tuple[Fraction, Fraction, GammaMatrix]:
    """Exact reduction of tau = x + i y with rational x, y.

    Returns (u, v, g) with g tau = u + i v in the closed standard region.
    Only translations and tau -> -1/tau are used, so y stays rational.
    """
    x, y = Fraction(x), Fraction(y)
    if y <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    g = IDENTITY
    for _ in range(max_steps):
        shift = -math.floor(x + Fraction(1, 2))
        if shift:
            x += shift
            g = T(shift) @ g
        r2 = x * x + y * y
        if r2 >= 1:
            return x, y, g
        x, y = -x / r2, y / r2
        g = S @ g
    raise ArithmeticError("reduction did not terminate")


def _fd_grid(height_cap: float, nx: int, dy_fine: float, dy_coarse: float, y_switch: float):
    xs = np.linspace(-0.5, 0.5, nx)
    ys_fine = np.arange(math.sqrt(3) / 2, min(y_switch, height_cap) + 1e-12, dy_fine)
    ys_coarse = np.arange(y_switch, height_cap + 1e-12, dy_coarse) if height_cap > y_switch else []
    pts = []
    for x in xs:
        y0 = math.sqrt(max(0.0, 1 - x * x))
        for y in np.concatenate([ys_fine, ys_coarse]):
            if y >= y0:
                pts.append(complex(x, y))
        pts.append(complex(x, y0))
    return np.array(pts)


def _vector_eval(S_: QSeries, taus: np.ndarray) -> np.ndarray:
    a = S_.numeric_coeffs()
    if not len(a):
        return np.zeros(len(taus), dtype=complex)
    n = np.arange(S_.start, S_.order + 1) + float(S_.mu)
    out = np.zeros(len(taus), dtype=complex)
    for lo in range(0, len(taus), 4096):
        chunk = taus[lo:lo + 4096]
        out[lo:lo + 4096] = np.exp(2j * np.pi * np.outer(chunk, n)) @ a
    return out


def _poly_eval(c: PolySeries, taus: np.ndarray) -> np.ndarray:
    out = np.zeros(len(taus), dtype=complex)
    for d, S_d in enumerate(c.terms):
        if not S_d.is_zero():
            out += taus**d * _vector_eval(S_d, taus)
    return out


@dataclass
class FDSupReport:
    sigma: float
    delta: int
    height_cap: float
    suprema: List[float]
    argmax: List[complex]
    n_points: int

    @property
    def sup(self) -> float:
        return max(self.suprema) if self.suprema else 0.0

    def as_dict(self) -> dict:
        return {"sigma": repr(self.sigma), "delta": self.delta, "height_cap": repr(self.height_cap),
                "suprema": [repr(s) for s in self.suprema],
                "argmax": [[repr(z.real), repr(z.imag)] for z in self.argmax],
                "sup": repr(self.sup), "points": self.n_points}


def fundamental_domain_sup(F: LVVMF, sigma: float, delta: int = 0, height_cap: float = 25.0,
                           nx: int = 41, dy_fine: float = 0.005, dy_coarse: float = 0.05,
                           y_switch: float = 3.0) -> FDSupReport:
    """max over the closed region of v^{-delta sigma} v^sigma |g_l(z)|, per block component.

    The grid below y_switch does not depend on the cap, so raising the cap
    only adds points higher up.
    """
    pts = _fd_grid(height_cap, nx, dy_fine, dy_coarse, y_switch)
    v = pts.imag
    weight = v ** (sigma - delta * sigma)
    sups, where = [], []
    comps = [g for block in F.block_components for g in block]
    for c in comps:
        vals = weight * np.abs(_poly_eval(c, pts))
        i = int(np.argmax(vals))
        sups.append(float(vals[i]))
        where.append(complex(pts[i]))
    return FDSupReport(sigma, delta, height_cap, sups, where, len(pts))


# ---------------------------------------------------------------------------
# coefficient growth


@lru_cache(maxsize=None)
def fitted_constants(m: int, c_max: int = 100) -> FittedConstants:
    return fit_polynomial_exponent(sym_power_rep(m), c_max)


@dataclass
class ComponentGrowth:
    block: int
    index: int
    beta: Optional[float]
    n_points: int
    note: str = ""

    def as_dict(self) -> dict:
        return {"block": self.block, "index": self.index,
                "beta": None if self.beta is None else repr(self.beta),
                "points": self.n_points, "note": self.note}


@dataclass
class GrowthReport:
    example: str
    k: int
    kind: str
    alpha: float
    n_min: int
    n_max: int
    components: List[ComponentGrowth]

    @property
    def beta(self) -> Optional[float]:
        vals = [c.beta for c in self.components if c.beta is not None]
        return max(vals) if vals else None

    @property
    def bound(self) -> float:
        if self.kind == qs.CUSPIDAL:
            return (self.k + self.alpha) / 2
        return self.k + self.alpha

    @property
    def delta(self) -> Optional[float]:
        return None if self.beta is None else self.bound - self.beta

    @property
    def ok(self) -> bool:
        return self.beta is None or self.beta <= self.bound

    def as_dict(self) -> dict:
        return {"example": self.example, "k": self.k, "kind": self.kind,
                "alpha": repr(self.alpha), "window": [self.n_min, self.n_max],
                "beta": None if self.beta is None else repr(self.beta),
                "bound": repr(self.bound),
                "delta": None if self.delta is None else repr(self.delta),
                "components": [c.as_dict() for c in self.components], "pass": self.ok}


def growth_slope(series: QSeries, n_min: int, n_max: int) -> Tuple[Optional[float], int]:
    """Least-squares slope of log|a(n)| against log n over nonzero a(n)."""
    ns, logs = [], []
    for n in range(n_min, min(n_max, series.order) + 1):
        a = series[n]
        if not series.is_zero_coeff(a):
            ns.append(math.log(n))
            logs.append(math.log(abs(complex(a))))
    if len(ns) < 2:
        return None, len(ns)
    return float(np.polyfit(ns, logs, 1)[0]), len(ns)


def coefficient_growth(F: LVVMF, n_min: int = 100, n_max: int = 2000,
                       alpha: Optional[float] = None, c_max: int = 100) -> GrowthReport:
    """Slope of the h-series coefficients against the (k+alpha)/2 or k+alpha bound.

    alpha defaults to 2 K4 from the representation's fitted constants.
    """
    if n_min < 1 or n_max <= n_min:
        raise ValueError("need 1 <= n_min < n_max")
    if F.order < n_max:
        raise ValueError(f"series order {F.order} is below the window end {n_max}")
    if alpha is None:
        alpha = fitted_constants(F.rep.p - 1, c_max).alpha if F.rep.name.startswith("sym") else 0.0
    comps = []
    for bi, block in enumerate(F.blocks):
        for j, h in enumerate(block.h):
            if h.is_zero():
                comps.append(ComponentGrowth(bi, j, None, 0, "identically zero, skipped"))
                continue
            beta, npts = growth_slope(h, n_min, n_max)
            comps.append(ComponentGrowth(bi, j, beta, npts, "" if beta is not None else "too few nonzero terms"))
    return GrowthReport(F.name, F.k, F.kind, alpha, n_min, n_max, comps)


# ---------------------------------------------------------------------------
# the |l_nu| = 1 step


@dataclass
class LNuCase:
    x: Fraction
    n: int
    gamma: Tuple[int, int, int, int]
    exponents: Tuple[int, ...]
    ratio: Fraction          # |a/c|
    l_nu: Optional[int]
    ok: bool


@dataclass
class LNuReport:
    cases: List[LNuCase]
    excluded: int

    @property
    def relevant(self) -> List[LNuCase]:
        return [c for c in self.cases if c.l_nu is not None]

    @property
    def violations(self) -> List[LNuCase]:
        return [c for c in self.cases if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"points": len(self.cases) + self.excluded, "excluded_c0": self.excluded,
                "l_nu_cases": len(self.relevant), "violations": len(self.violations),
                "pass": self.ok}


def l_nu_unit_check(points: Sequence[Tuple[Fraction, int]]) -> LNuReport:
    """For tau = x + i/n, transport from the closed region and inspect the word.

    tau = gamma z with z in the region; when gamma ends in l_{nu+1} = 0 the
    argument needs |a/c| < 2 and hence |l_nu| = 1.
    """
    cases, excluded = [], 0
    for x, n in points:
        _, _, red = reduce_to_fundamental_domain(Fraction(x), Fraction(1, n))
        g = red.inverse()
        if g.c == 0:
            excluded += 1
            continue
        w = eichler_decompose(g)
        ratio = abs(Fraction(g.a, g.c))
        l_nu = None
        ok = True
        if isinstance(w, EichlerWord) and w.last == 0 and w.nu >= 0:
            l_nu = w.exponents[w.nu]
            ok = ratio < 2 and abs(l_nu) == 1
        cases.append(LNuCase(Fraction(x), n, (g.a, g.b, g.c, g.d), tuple(w.exponents), ratio, l_nu, ok))
    return LNuReport(cases, excluded)


def random_lnu_points(count: int, seed: int = 0, n_range: Tuple[int, int] = (2, 50),
                      denom: int = 1000) -> List[Tuple[Fraction, int]]:
    rng = random.Random(seed)
    return [(Fraction(rng.randint(-denom // 2, denom // 2), denom), rng.randint(*n_range))
            for _ in range(count)]
