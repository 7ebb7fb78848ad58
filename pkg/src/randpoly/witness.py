"""Witness sets and (x, alpha)-typicality.

The witnesses of a pair x, y in Q are the other points of Q inside the box
x∧y <= z <= x∨y; only they can appear in a convex combination that blocks
the segment [x, y].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypercube import Point, interval_bits
from .sampling import VertexSet

FULL_CUBE = "FULL_CUBE"
MAX_FULL_CUBE_DIM = 24


@dataclass(frozen=True)
class WitnessSet:
    x: int
    y: int
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _word(z) -> int:
    return z.bits if isinstance(z, Point) else int(z)


def witness_set(Q: VertexSet, x, y) -> WitnessSet:
    """Points of Q other than x, y lying in the box spanned by x and y.

    Enumerates the 2^d box points when that is cheaper than scanning Q.
    """
    x, y = _word(x), _word(y)
    if x not in Q or y not in Q:
        raise KeyError("both endpoints must belong to the vertex set")
    if x == y:
        raise ValueError("witness set needs two distinct points")
    lo, hi = x & y, x | y
    d = (x ^ y).bit_count()
    if (1 << d) <= 4 * len(Q):
        members = [z for z in interval_bits(lo, hi) if z in Q and z != x and z != y]
    else:
        members = [z for z in Q.points if (z & lo) == lo and (z | hi) == hi and z != x and z != y]
    return WitnessSet(min(x, y), max(x, y), tuple(members))


# --------------------------------------------------------------------------
# typicality


def _window(twice_center: int, alpha, n: int) -> tuple[int, int]:
    """Integer range of v with twice_center/2 - alpha*n <= v <= twice_center/2 + alpha*n."""
    c = Fraction(twice_center, 2)
    r = Fraction(alpha) * n
    return math.ceil(c - r), math.floor(c + r)


def is_typical(x: Point, y: Point, alpha) -> bool:
    """True iff y is (x, alpha)-typical."""
    if x.n != y.n:
        raise ValueError("dimension mismatch")
    n = x.n
    wx = x.bits.bit_count()
    overlap = (x.bits & y.bits).bit_count()
    outside = n - (x.bits | y.bits).bit_count()
    lo, hi = _window(wx, alpha, n)
    if not lo <= overlap <= hi:
        return False
    lo, hi = _window(n - wx, alpha, n)
    return lo <= outside <= hi


def is_typical_pair(x: Point, y: Point, alpha) -> bool:
    return is_typical(x, y, alpha) and is_typical(y, x, alpha)


def typical_mask(x: int, ys: np.ndarray, n: int, alpha) -> np.ndarray:
    """Vectorised is_typical(x, y) over an array of words ``ys``."""
    wx = x.bit_count()
    full = (1 << n) - 1
    overlap = np.bitwise_count(ys & np.uint64(x))
    outside = np.bitwise_count(~(ys | np.uint64(x)) & np.uint64(full))
    alo, ahi = _window(wx, alpha, n)
    blo, bhi = _window(n - wx, alpha, n)
    return (overlap >= alo) & (overlap <= ahi) & (outside >= blo) & (outside <= bhi)


def count_atypical(x: Point, alpha, universe=FULL_CUBE) -> int:
    """Number of y in the universe that are (x, alpha)-atypical."""
    n = x.n
    if isinstance(universe, str):
        if universe != FULL_CUBE:
            raise ValueError(f"unknown universe {universe!r}")
        if n > MAX_FULL_CUBE_DIM:
            raise ValueError(f"exhaustive count limited to n <= {MAX_FULL_CUBE_DIM}")
        ys = np.arange(1 << n, dtype=np.uint64)
    else:
        if len(universe) == 0:
            return 0
        if universe.n != n:
            raise ValueError("dimension mismatch")
        ys = universe.array()
    return int(ys.size - np.count_nonzero(typical_mask(x.bits, ys, n, alpha)))


def atypical_union_bound(x: Point, alpha) -> int:
    """Two-block union bound on count_atypical(x, alpha, FULL_CUBE).

    |x∧y| only depends on y restricted to supp(x) and |(x∨y)^c| only on the
    complement, so the atypical y number at most
    tail(Bin(|x|)) * 2^(n-|x|) + 2^|x| * tail(Bin(n-|x|)), tails taken outside
    the typicality windows.
    """
    n = x.n
    w = x.bits.bit_count()
    rest = n - w
    alo, ahi = _window(w, alpha, n)
    blo, bhi = _window(rest, alpha, n)
    tail_a = sum(math.comb(w, a) for a in range(w + 1) if not alo <= a <= ahi)
    tail_b = sum(math.comb(rest, b) for b in range(rest + 1) if not blo <= b <= bhi)
    return tail_a * (1 << rest) + (1 << w) * tail_b
