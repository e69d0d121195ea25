"""Exhaustive sweeps over enumerated gammas, optionally split across processes.

LVVMF_THREADS caps the number of worker processes (default 1).  Work is
partitioned by contiguous c-ranges and the per-range results are reduced in
order, so output does not depend on the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .sl2z import (EichlerWord, eichler_decompose, eichler_length, enumerate_gamma,
                   is_sign_valid, lame_ratio, dichotomy_violations, reconstruct, verify_prop3)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("LVVMF_THREADS", "1")))
    except ValueError:
        return 1


def _chunks(c_max: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, c_max))
    bounds = [round(c_max * i / parts) for i in range(parts + 1)]
    return [(bounds[i] + 1, bounds[i + 1]) for i in range(parts) if bounds[i + 1] > bounds[i]]


@dataclass
class WordRow:
    c: int
    d: int
    nu: int
    length: int
    max_ratio: Fraction   # worst lhs/rhs over the product inequalities
    lame: float


@dataclass
class WordSweep:
    c_max: int
    d_max: int
    rows: List[WordRow] = field(default_factory=list)
    count: int = 0
    roundtrip_failures: List[str] = field(default_factory=list)
    sign_failures: List[str] = field(default_factory=list)
    dichotomy_failures: List[str] = field(default_factory=list)
    prop3_failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.roundtrip_failures or self.sign_failures or self.dichotomy_failures
                    or self.prop3_failures)

    def merge(self, other: "WordSweep") -> None:
        self.rows += other.rows
        self.count += other.count
        for name in ("roundtrip_failures", "sign_failures", "dichotomy_failures", "prop3_failures"):
            getattr(self, name).extend(getattr(other, name))

    def summary(self) -> dict:
        return {"c_max": self.c_max, "d_max": self.d_max, "gammas": self.count,
                "roundtrip_violations": len(self.roundtrip_failures),
                "sign_violations": len(self.sign_failures),
                "dichotomy_violations": len(self.dichotomy_failures),
                "prop3_violations": len(self.prop3_failures),
                "max_ratio": max((r.max_ratio for r in self.rows), default=0),
                "max_lame_ratio": max((r.lame for r in self.rows), default=0.0),
                "pass": self.ok}


def _ratio(report) -> Fraction:
    worst = Fraction(0)
    for chk in report.checks:
        if chk.name.startswith("sign") or chk.rhs == 0:
            continue
        worst = max(worst, Fraction(chk.lhs, chk.rhs))
    return worst


def _sweep_range(args) -> WordSweep:
    c_lo, c_hi, d_max, keep_rows = args
    out = WordSweep(c_hi, d_max)
    for g in enumerate_gamma(c_hi, d_max):
        if g.c < c_lo:
            continue
        out.count += 1
        w = eichler_decompose(g)
        if reconstruct(w) != g:
            out.roundtrip_failures.append(str(g))
        if not is_sign_valid(w.exponents):
            out.sign_failures.append(str(g))
        for msg in dichotomy_violations(g, w):
            out.dichotomy_failures.append(f"{g}: {msg}")
        rep = verify_prop3(w, g)
        if not rep.ok:
            out.prop3_failures.extend(f"{g}: {f}" for f in rep.failures)
        if keep_rows:
            out.rows.append(WordRow(g.c, g.d, w.nu, eichler_length(w), _ratio(rep), lame_ratio(w, g)))
    return out


def word_sweep(c_max: int, d_max: int, keep_rows: bool = True,
               workers: Optional[int] = None) -> WordSweep:
    """Round trip, sign pattern, first-column dichotomy and the product bounds."""
    workers = worker_count() if workers is None else workers
    jobs = [(lo, hi, d_max, keep_rows) for lo, hi in _chunks(c_max, workers)]
    total = WordSweep(c_max, d_max)
    if workers == 1:
        parts = map(_sweep_range, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        parts = pool.map(_sweep_range, jobs)
    for part in parts:
        total.merge(part)
    if workers != 1:
        pool.shutdown()
    total.c_max, total.d_max = c_max, d_max
    return total
