"""Brute-force enumeration of sign-valid words, independent of the decomposition.

Used as the oracle for uniqueness and word-independence checks.  Tails
l_1..l_{nu+1} are grown one exponent at a time; the first-column entries of
the prefix products never shrink along a sign-valid word (checked separately
in the test suite), so a tail is abandoned once they exceed ``c_max``.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Tuple

from .sl2z import S, ST, T, GammaMatrix, is_sign_valid

Key = Tuple[int, int, int, int]


def _normalize(g: GammaMatrix) -> Key:
    if g.c < 0:
        g = -g
    return (g.a, g.b, g.c, g.d)


def sign_valid_tails(c_max: int, max_factors: int = 16) -> List[Tuple[int, ...]]:
    """All tails (l_1, ..., l_{nu+1}) whose prefix first columns stay within c_max."""
    out = []

    def grow(tail, M, depth):
        j = len(tail) + 1  # index of the exponent being chosen
        sgn = (-1) ** (j - 1)
        # zero is allowed only as the final exponent, and not right after l_0
        if j >= 2:
            out.append(tuple(tail) + (0,))
        if depth >= max_factors:
            return
        m = 1
        while True:
            l = sgn * m
            P = ST(l) @ M
            if max(abs(P.a), abs(P.c)) > c_max:
                break
            out.append(tuple(tail) + (l,))
            grow(tail + [l], P, depth + 1)
            m += 1

    grow([], ST(0), 1)
    return out


def search_words(c_max: int, l0_bound: int) -> Dict[Key, List[Tuple[int, ...]]]:
    """Map +-gamma (normalised to c > 0) to every sign-valid exponent tuple
    with |l_0| <= l0_bound, single factors included."""
    found: Dict[Key, List[Tuple[int, ...]]] = defaultdict(list)
    tails = [()] + sign_valid_tails(c_max)
    for tail in tails:
        M = S
        for l in tail:
            M = ST(l) @ M
        if M.c == 0:
            continue
        for l0 in range(-l0_bound, l0_bound + 1):
            exps = (l0,) + tail
            if not is_sign_valid(exps):
                continue
            found[_normalize(M @ T(l0))].append(exps)
    return found
