"""Bit-level arithmetic on points of the Boolean hypercube {0,1}^n.

A point is stored as a single unsigned word: coordinate 1 is bit 0 (least
significant), coordinate n is bit n-1.  Points order by their integer value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

MAX_DIM = 64


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Point:
    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIM:
            raise DimensionError(f"dimension must be in [1, {MAX_DIM}], got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in dimension {self.n}")

    @classmethod
    def from_coords(cls, coords) -> "Point":
        """Build a point from a coordinate sequence (coordinate 1 first)."""
        bits = 0
        for i, c in enumerate(coords):
            if c not in (0, 1):
                raise ValueError(f"coordinate {i + 1} is {c!r}, expected 0 or 1")
            bits |= c << i
        return cls(bits, len(coords))

    @classmethod
    def from_string(cls, s: str) -> "Point":
        """Parse a bit string written coordinate 1 first, e.g. ``"0110"``."""
        return cls.from_coords([int(ch) for ch in s])

    @classmethod
    def from_hex(cls, text: str, n: int) -> "Point":
        return cls(int(text, 16), n)

    def coords(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.n)]

    def to_hex(self) -> str:
        return format(self.bits, f"0{hex_width(self.n)}x")

    def __str__(self):
        return "".join(str(c) for c in self.coords())

    def __int__(self):
        return self.bits


def hex_width(n: int) -> int:
    return (n + 3) // 4


def full_mask(n: int) -> int:
    return (1 << n) - 1


def _check(x: Point, y: Point) -> int:
    if x.n != y.n:
        raise DimensionError(f"dimension mismatch: {x.n} vs {y.n}")
    return x.n


def meet(x: Point, y: Point) -> Point:
    return Point(x.bits & y.bits, _check(x, y))


def join(x: Point, y: Point) -> Point:
    return Point(x.bits | y.bits, _check(x, y))


def weight(x: Point) -> int:
    return x.bits.bit_count()


def hamming(x: Point, y: Point) -> int:
    _check(x, y)
    return (x.bits ^ y.bits).bit_count()


def complement_count(x: Point, y: Point) -> int:
    """Number of coordinates where both x and y are zero."""
    n = _check(x, y)
    return n - (x.bits | y.bits).bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in ascending order (0 first)."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        # next submask in increasing order: carry through the masked positions
        sub = ((sub | ~mask) + 1) & mask


def interval_bits(lo: int, hi: int) -> Iterator[int]:
    """Words z with lo <= z <= hi coordinate-wise, ascending.  Requires lo ⊆ hi."""
    free = hi & ~lo
    for sub in submasks(free):
        yield lo | sub


@dataclass(frozen=True)
class Interval:
    lo: Point
    hi: Point

    def __post_init__(self):
        _check(self.lo, self.hi)
        if self.lo.bits & ~self.hi.bits:
            raise ValueError("interval lower end is not below the upper end")

    @classmethod
    def spanned(cls, x: Point, y: Point) -> "Interval":
        return cls(meet(x, y), join(x, y))

    @property
    def n(self) -> int:
        return self.lo.n

    def __len__(self):
        return 1 << (self.hi.bits ^ self.lo.bits).bit_count()

    def __contains__(self, z: Point) -> bool:
        return (self.lo.bits & ~z.bits) == 0 and (z.bits & ~self.hi.bits) == 0

    def __iter__(self) -> Iterator[Point]:
        n = self.n
        return (Point(z, n) for z in interval_bits(self.lo.bits, self.hi.bits))


def interval_points(x: Point, y: Point) -> list[Point]:
    return list(Interval.spanned(x, y))
