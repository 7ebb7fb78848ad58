"""Seeded sampling of random vertex sets Q ⊆ {0,1}^n.

Random numbers come from SplitMix64, defined by the recurrence

    state_{i+1} = state_i + 0x9E3779B97F4A7C15   (mod 2^64)
    out_i       = fmix(state_{i+1})

    fmix(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
             return z ^ (z >> 31)                     (all mod 2^64)

Because the state advances by a constant, the i-th output depends only on
``seed`` and ``i``, which lets the dense sampler draw whole blocks with numpy
and stay bit-identical to the scalar generator.

Point ``z`` (as an integer) is included when draw ``z`` is below the integer
threshold ``floor(p * 2^64)``.  For ``p <= GAP_SKIP_MAX_P`` the sampler skips
straight to the next included point with a geometric gap drawn by inversion
from one 64-bit output, so it costs O(|Q|) draws instead of 2^n.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .hypercube import MAX_DIM, Point, hex_width

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

GAP_SKIP_MAX_P = 2.0 ** -20
MAX_DENSE_DIM = 34
_BLOCK = 1 << 20


def fmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64(base: int, index: int) -> int:
    """Derive a child seed; injective in ``index`` for a fixed ``base``."""
    return fmix64((base & MASK64) ^ fmix64(index + GAMMA))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return fmix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next()
            if r < limit:
                return r % bound


def splitmix_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the stream seeded with ``seed``."""
    with np.errstate(over="ignore"):
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        z = np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


# --------------------------------------------------------------------------
# rate schedules

EXPLICIT = "explicit"
POW2 = "pow2"
HALF_SCALED = "half"
DELTA_SCALED = "delta"


@dataclass(frozen=True)
class RateSpec:
    """A sampling probability, possibly a function of the dimension.

    ``form`` is one of ``explicit`` (value = p), ``pow2`` (p = 2^(-value*n)),
    ``half`` (p = ((1 + sign*value)/sqrt 2)^n) and ``delta``
    (p = ((1 + sign*value) * 2^(-delta_star))^n).
    """

    form: str
    value: float
    sign: int = 1

    def __post_init__(self):
        if self.form not in (EXPLICIT, POW2, HALF_SCALED, DELTA_SCALED):
            raise ValueError(f"unknown rate form {self.form!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.form == EXPLICIT and not 0.0 <= self.value <= 1.0:
            raise ValueError(f"explicit probability {self.value} outside [0, 1]")
        if self.form == POW2 and self.value < 0:
            raise ValueError("pow2 exponent must be nonnegative")
        if self.form in (HALF_SCALED, DELTA_SCALED) and 1 + self.sign * self.value < 0:
            raise ValueError(f"1 {'+' if self.sign > 0 else '-'} {self.value} is negative")

    @property
    def label(self) -> str:
        if self.form == EXPLICIT:
            return f"explicit:p={self.value:.6g}"
        if self.form == POW2:
            return f"pow2:c={self.value:.4f}"
        sign = "+" if self.sign > 0 else "-"
        return f"{self.form}:eps={self.value:.4f},sign={sign}"

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str) -> "RateSpec":
        """Parse ``pow2:c=0.6``, ``pow2:0.6``, ``explicit:0.5``, ``delta:eps=0.03,sign=-``."""
        form, _, rest = text.strip().partition(":")
        form = form.lower()
        if form in ("p", "explicit"):
            form = EXPLICIT
        value = None
        sign = 1
        for part in filter(None, rest.split(",")):
            key, eq, val = part.partition("=")
            if not eq:
                key, val = "", key
            key = key.strip().lower()
            val = val.strip()
            if key == "sign":
                sign = -1 if val in ("-", "-1", "minus") else 1
            elif val.startswith(("+", "-")) and form in (HALF_SCALED, DELTA_SCALED):
                sign = -1 if val[0] == "-" else 1
                value = float(val[1:])
            else:
                value = float(val)
        if value is None:
            raise ValueError(f"rate {text!r} has no value")
        return cls(form, value, sign)


def resolve_rate(spec: RateSpec, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.form == EXPLICIT:
        p = spec.value
    elif spec.form == POW2:
        p = 2.0 ** (-spec.value * n)
    elif spec.form == HALF_SCALED:
        p = ((1 + spec.sign * spec.value) / math.sqrt(2)) ** n
    else:
        from .analytics import solve_delta

        p = ((1 + spec.sign * spec.value) * 2.0 ** (-solve_delta())) ** n
    return min(1.0, max(0.0, p))


# --------------------------------------------------------------------------
# vertex sets


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Ascending, duplicate-free set of hypercube points stored as words."""

    n: int
    points: tuple[int, ...]
    provenance: object = "explicit"
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}]")
        pts = self.points
        for a, b in zip(pts, pts[1:]):
            if a >= b:
                raise ValueError("points must be strictly ascending")
        if pts and (pts[0] < 0 or pts[-1] >> self.n):
            raise ValueError("point outside the hypercube")
        object.__setattr__(self, "_members", frozenset(pts))

    @classmethod
    def from_points(cls, n: int, points: Iterable, provenance="explicit") -> "VertexSet":
        words = set()
        for p in points:
            if isinstance(p, Point):
                if p.n != n:
                    raise ValueError("dimension mismatch")
                p = p.bits
            elif isinstance(p, str):
                p = Point.from_string(p).bits
            words.add(int(p))
        return cls(n, tuple(sorted(words)), provenance)

    @classmethod
    def full_cube(cls, n: int) -> "VertexSet":
        return cls(n, tuple(range(1 << n)), "full")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, z) -> bool:
        return int(z) in self._members

    def __eq__(self, other):
        return isinstance(other, VertexSet) and self.n == other.n and self.points == other.points

    def __hash__(self):
        return hash((self.n, self.points))

    def index(self, z) -> int:
        z = int(z)
        i = bisect.bisect_left(self.points, z)
        if i == len(self.points) or self.points[i] != z:
            raise KeyError(f"{z:#x} not in vertex set")
        return i

    def point(self, i: int) -> Point:
        return Point(self.points[i], self.n)

    def array(self) -> np.ndarray:
        return np.fromiter(self.points, dtype=np.uint64, count=len(self.points))

    # file format: "n=<int>" then one hex point per line, ascending
    def dumps(self) -> str:
        w = hex_width(self.n)
        lines = [f"n={self.n}"] + [format(z, f"0{w}x") for z in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "VertexSet":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("n="):
            raise ValueError("vertex set file must start with 'n=<int>'")
        n = int(lines[0][2:])
        words = [int(ln, 16) for ln in lines[1:]]
        if words != sorted(set(words)):
            raise ValueError("vertex set file is not strictly ascending")
        return cls(n, tuple(words), "file")

    def write(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def read(cls, path) -> "VertexSet":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def inclusion_threshold(p: float) -> int:
    """floor(p * 2^64), computed exactly from the binary value of p."""
    return math.floor(Fraction(p) * (1 << 64))


def _sample_dense(n: int, threshold: int, seed: int) -> list[int]:
    total = 1 << n
    out = []
    thr = np.uint64(threshold)
    for start in range(0, total, _BLOCK):
        count = min(_BLOCK, total - start)
        hits = np.flatnonzero(splitmix_block(seed, start, count) < thr)
        out.extend((hits + start).tolist())
    return out


def _sample_sparse(n: int, p: float, seed: int) -> list[int]:
    total = 1 << n
    rng = SplitMix64(seed)
    log_q = math.log1p(-p)
    out = []
    pos = 0
    while True:
        u = ((rng.next() >> 11) + 1) * 2.0 ** -53  # uniform on (0, 1]
        pos += math.floor(math.log(u) / log_q)
        if pos >= total:
            return out
        out.append(pos)
        pos += 1


def sample_vertex_set(n: int, p: float, seed: int, rate: RateSpec | None = None) -> VertexSet:
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"probability {p} outside [0, 1]")
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"dimension must be in [1, {MAX_DIM}]")
    seed &= MASK64
    prov = (seed, rate if rate is not None else RateSpec(EXPLICIT, p))
    if p == 0.0:
        return VertexSet(n, (), prov)
    if p == 1.0:
        return VertexSet(n, tuple(range(1 << n)), prov)
    if p <= GAP_SKIP_MAX_P:
        pts = _sample_sparse(n, p, seed)
    elif n > MAX_DENSE_DIM:
        raise ValueError(f"p={p:g} needs dense enumeration of 2^{n} points")
    else:
        pts = _sample_dense(n, inclusion_threshold(p), seed)
    return VertexSet(n, tuple(pts), prov)


def sample_rate(n: int, rate: RateSpec, seed: int) -> VertexSet:
    return sample_vertex_set(n, resolve_rate(rate, n), seed, rate)
