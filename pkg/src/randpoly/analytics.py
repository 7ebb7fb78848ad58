"""Entropy calculus and exact counting behind the clique and density thresholds."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .sampling import VertexSet


class CountBudgetExceeded(RuntimeError):
    pass


def entropy(d: float) -> float:
    """Binary entropy in bits, with 0 log 0 = 0."""
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"entropy argument {d} outside [0, 1]")
    if d == 0.0 or d == 1.0:
        return 0.0
    return -d * math.log2(d) - (1 - d) * math.log2(1 - d)


def f_exponent(d: float) -> float:
    """1 + 2d + H(d): growth exponent of the (x, y, u, v) quadruple count at distance dn."""
    return 1 + 2 * d + entropy(d)


def _ternary_max(f, lo, hi, tol):
    while hi - lo > tol:
        a = lo + (hi - lo) / 3
        b = hi - (hi - lo) / 3
        if f(a) < f(b):
            lo = a
        else:
            hi = b
    return (lo + hi) / 2


def argmax_f() -> float:
    """4/5, where f'(d) = 2 + log2((1-d)/d) vanishes; cross-checked numerically."""
    exact = 4 / 5
    numeric = _ternary_max(f_exponent, 0.0, 1.0, 1e-10)
    if abs(numeric - exact) > 1e-6:
        raise ArithmeticError(f"ternary search found {numeric}, expected 0.8")
    return exact


@lru_cache(maxsize=None)
def solve_delta(tol: float = 1e-12) -> float:
    """Root of H(d) = 2d - 1 on (1/2, 1) by bisection.

    g(d) = H(d) - 2d + 1 is positive near 1/2 and negative near 1.
    """
    lo, hi = 0.5 + 1e-9, 1 - 1e-9
    g = lambda d: entropy(d) - 2 * d + 1  # noqa: E731
    while True:
        mid = (lo + hi) / 2
        gm = g(mid)
        if abs(gm) < tol or mid in (lo, hi):
            return mid
        if gm > 0:
            lo = mid
        else:
            hi = mid


@dataclass(frozen=True)
class ThresholdConstants:
    delta_star: float
    f_max_arg: float
    f_max: float
    weak_exponent: float


def threshold_constants() -> ThresholdConstants:
    arg = argmax_f()
    fmax = f_exponent(arg)
    return ThresholdConstants(solve_delta(), arg, fmax, fmax / 4)


# --------------------------------------------------------------------------
# averaging tuples


def closed_form_tuple_count(d: int, k: int) -> int:
    """C(2k, k)^d ordered 2k-tuples of the box averaging to its centre."""
    return math.comb(2 * k, k) ** d


def count_averaging_tuples(S: Iterable, x, y, k: int, exclude_endpoints: bool = True,
                           budget: int = 10**7) -> int:
    """Ordered 2k-tuples from S whose mean is (x+y)/2.

    Tuples are ordered, so a multiset with multiplicities m_1..m_r is counted
    (2k)!/(m_1!...m_r!) times.  Only the coordinates where x and y differ
    matter; on each of them exactly k entries of the tuple must be 1.  The
    count is a dynamic programme over partial coordinate sums, with
    ``budget`` bounding the number of states.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    x, y = int(x), int(y)
    lo, hi = x & y, x | y
    pts = []
    for z in S:
        z = int(z)
        if (z & lo) != lo or (z | hi) != hi:
            raise ValueError(f"{z:#x} lies outside the box spanned by x and y")
        if exclude_endpoints and z in (x, y):
            continue
        pts.append(z)
    diff = x ^ y
    D = [i for i in range(diff.bit_length()) if (diff >> i) & 1]
    if (k + 1) ** len(D) > budget:
        raise CountBudgetExceeded(f"(k+1)^d = {(k + 1) ** len(D)} states exceed budget {budget}")
    counts = Counter(tuple((z >> i) & 1 for i in D) for z in pts)
    states = Counter({(0,) * len(D): 1})
    for t in range(2 * k):
        left = 2 * k - t - 1
        nxt = Counter()
        for state, ways in states.items():
            for bits, mult in counts.items():
                new = tuple(a + b for a, b in zip(state, bits))
                # every coordinate must still be able to end at exactly k
                if all(v <= k and v + left >= k for v in new):
                    nxt[new] += ways * mult
        states = nxt
    return states[(k,) * len(D)]


def count_witness_quadruples(Q: VertexSet, delta_band: Optional[tuple[float, float]] = None) -> int:
    """Tuples (x, y, u, v) with x < y, u < v and u, v in W(x, y).

    With ``delta_band = (lo, hi)`` only pairs with lo < dist(x, y)/n <= hi count.
    """
    from .adjacency import witness_count_rows

    N = len(Q)
    if N < 4:
        return 0
    arr = Q.array()
    n = Q.n
    total = 0
    for i in range(N - 1):
        counts, _ = witness_count_rows(Q, i, arr)
        if delta_band is not None:
            lo, hi = delta_band
            dist = np.bitwise_count(arr[i + 1:] ^ arr[i]) / n
            counts = counts[(dist > lo) & (dist <= hi)]
        c = counts.astype(object)
        total += int(sum(v * (v - 1) // 2 for v in c if v >= 2))
    return total
