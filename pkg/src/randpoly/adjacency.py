"""Edge / non-edge classification for pairs of vertices of conv(Q).

For x, y in Q the segment [x, y] fails to be an edge exactly when some point
alpha*x + (1-alpha)*y with 0 < alpha < 1 is a convex combination of the other
points of Q.  Such combinations may only use witnesses (points inside the box
x∧y <= z <= x∨y), so at most the witness set has to be examined.

Four deciders are offered and must always agree:

* ``LP``: after flipping the differing coordinates D so that x|D = 1...1 and
  y|D = 0...0, the pair is a non-edge iff some convex combination of the
  projected witnesses has all coordinates equal.
* ``AUTO``: |W| <= 1 is an edge outright; a few cheap exact tests come next
  and the ``LP`` system is solved only when they are inconclusive.
* ``ORACLE_FULL``: the unrestricted system over Q \\ {x, y} with an explicit
  alpha variable.
* ``ORACLE_HYPERPLANE``: searches for (c, b) with c·x = c·y = b and
  c·z <= b - 1 for every other point z.

For 0/1 point sets every point of Q is a vertex of conv(Q), so no vertex
precondition needs checking.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .exactlp import BLAND, DANTZIG, Feasible, FeasibilitySystem, solve_feasibility, verify_farkas
from .hypercube import Point
from .sampling import SplitMix64, VertexSet
from .witness import witness_set

AUTO = "AUTO"
LP = "LP"
ORACLE_FULL = "ORACLE_FULL"
ORACLE_HYPERPLANE = "ORACLE_HYPERPLANE"
METHODS = (AUTO, LP, ORACLE_FULL, ORACLE_HYPERPLANE)
ORACLE_RULE = BLAND


class SearchBudgetExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class WitnessCount:
    count: int

    kind = "witness_count"

    def to_json(self):
        return {"kind": self.kind, "count": self.count}


@dataclass(frozen=True)
class Hyperplane:
    c: tuple[Fraction, ...]
    b: Fraction

    kind = "hyperplane"

    def to_json(self):
        return {"kind": self.kind, "c": [str(v) for v in self.c], "b": str(self.b)}


@dataclass(frozen=True)
class ConvexCombination:
    support: tuple[int, ...]
    lam: tuple[Fraction, ...]
    alpha: Fraction

    kind = "convex_combination"

    def to_json(self):
        return {
            "kind": self.kind,
            "support": [format(z, "x") for z in self.support],
            "lambda": [str(v) for v in self.lam],
            "alpha": str(self.alpha),
        }


@dataclass(frozen=True)
class AveragingTuple:
    points: tuple[int, ...]
    k: int

    kind = "averaging_tuple"

    def to_json(self):
        return {"kind": self.kind, "k": self.k, "points": [format(z, "x") for z in self.points]}


@dataclass(frozen=True)
class FarkasCertificate:
    """Infeasibility proof for one of the LP systems, replayed by rebuilding it."""

    system: str
    farkas: tuple[Fraction, ...]

    kind = "farkas"

    def to_json(self):
        return {"kind": self.kind, "system": self.system, "farkas": [str(v) for v in self.farkas]}


Certificate = Union[WitnessCount, Hyperplane, ConvexCombination, AveragingTuple, FarkasCertificate]


@dataclass(frozen=True)
class EdgeStatus:
    is_edge: bool
    certificate: Optional[Certificate] = None

    @property
    def verdict(self) -> str:
        return "Edge" if self.is_edge else "NonEdge"


def _bits(z, n):
    return [(z >> i) & 1 for i in range(n)]


def replay(Q: VertexSet, x: int, y: int, status: EdgeStatus) -> bool:
    """Check a certificate exactly against Q; False on any mismatch."""
    cert = status.certificate
    x, y = int(x), int(y)
    n = Q.n
    others = [z for z in Q.points if z != x and z != y]
    if isinstance(cert, WitnessCount):
        return status.is_edge and cert.count <= 1 and len(witness_set(Q, x, y)) == cert.count
    if isinstance(cert, Hyperplane):
        if not status.is_edge or len(cert.c) != n:
            return False

        def dot(z):
            return sum(ci for i, ci in enumerate(cert.c) if (z >> i) & 1)

        return dot(x) == cert.b and dot(y) == cert.b and all(dot(z) <= cert.b - 1 for z in others)
    if isinstance(cert, ConvexCombination):
        if status.is_edge or len(cert.support) != len(cert.lam):
            return False
        if len(set(cert.support)) != len(cert.support):
            return False
        if not all(z in Q and z != x and z != y for z in cert.support):
            return False
        lo, hi = x & y, x | y
        if not all((z & lo) == lo and (z | hi) == hi for z in cert.support):
            return False
        if any(v <= 0 for v in cert.lam) or sum(cert.lam) != 1 or not 0 < cert.alpha < 1:
            return False
        for i in range(n):
            lhs = sum(v for z, v in zip(cert.support, cert.lam) if (z >> i) & 1)
            rhs = cert.alpha * ((x >> i) & 1) + (1 - cert.alpha) * ((y >> i) & 1)
            if lhs != rhs:
                return False
        return True
    if isinstance(cert, AveragingTuple):
        if status.is_edge or len(cert.points) != 2 * cert.k or cert.k < 1:
            return False
        if not all(z in Q and z != x and z != y for z in cert.points):
            return False
        for i in range(n):
            if sum((z >> i) & 1 for z in cert.points) != cert.k * (((x >> i) & 1) + ((y >> i) & 1)):
                return False
        return True
    if isinstance(cert, FarkasCertificate):
        if cert.system == "projected":
            system, _ = projected_system(x, y, witness_set(Q, x, y).members)
            return status.is_edge and verify_farkas(system, cert.farkas)
        if cert.system == "full":
            return status.is_edge and verify_farkas(full_system(Q, x, y), cert.farkas)
        if cert.system == "hyperplane":
            return not status.is_edge and verify_farkas(hyperplane_system(Q, x, y), cert.farkas)
    return False


# --------------------------------------------------------------------------
# LP systems


def projected_system(x: int, y: int, witnesses) -> tuple[Optional[FeasibilitySystem], list[int]]:
    """The diagonal system over the witnesses, projected to the differing coordinates.

    Row 0 is sum(lam) = 1; row i (i >= 1) asks coordinate D[i] of the
    combination to equal coordinate D[0].  Returns (None, D) when there are no
    witnesses, in which case the system has no columns and is infeasible.
    """
    diff = x ^ y
    D = [i for i in range(diff.bit_length()) if (diff >> i) & 1]
    if not witnesses:
        return None, D
    proj = [(z ^ y) & diff for z in witnesses]
    first = D[0]
    A = [[1] * len(proj)]
    for i in D[1:]:
        A.append([((u >> i) & 1) - ((u >> first) & 1) for u in proj])
    b = [1] + [0] * (len(D) - 1)
    return FeasibilitySystem.from_integers(A, b), D


def full_system(Q: VertexSet, x: int, y: int) -> FeasibilitySystem:
    """alpha*x + (1-alpha)*y = sum lam_z z over all z in Q \\ {x, y}, sum lam = 1, alpha <= 1.

    Columns: lam_z for each z, then alpha, then the slack of alpha <= 1.
    """
    n = Q.n
    others = [z for z in Q.points if z != x and z != y]
    A = []
    b = []
    for i in range(n):
        xi, yi = (x >> i) & 1, (y >> i) & 1
        A.append([(z >> i) & 1 for z in others] + [yi - xi, 0])
        b.append(yi)
    A.append([1] * len(others) + [0, 0])
    b.append(1)
    A.append([0] * len(others) + [1, 1])
    b.append(1)
    return FeasibilitySystem.from_integers(A, b)


def hyperplane_system(Q: VertexSet, x: int, y: int) -> FeasibilitySystem:
    """(c, beta) free with c·x - beta = 1, c·y - beta = 1, c·z - beta <= 0 for other z.

    beta = b - 1.  Columns: c+ (n), c- (n), beta+, beta-, then one slack per z.
    """
    n = Q.n
    others = [z for z in Q.points if z != x and z != y]
    m = len(others)

    def row(p):
        bits = _bits(p, n)
        return bits + [-v for v in bits] + [-1, 1]

    A = [row(x) + [0] * m, row(y) + [0] * m]
    for t, z in enumerate(others):
        slack = [0] * m
        slack[t] = 1
        A.append(row(z) + slack)
    b = [1, 1] + [0] * m
    return FeasibilitySystem.from_integers(A, b)


def _hyperplane_from_weights(x: int, y: int, n: int, w: dict, margin: Fraction) -> Hyperplane:
    """Lift g(u') = sum_{i in D} w_i u'_i (sum w = 0, g <= -margin on witnesses) to Q.

    Coordinates where x and y agree get a penalty heavy enough to push every
    point outside the box below the plane as well.
    """
    c = [Fraction(0)] * n
    const = Fraction(0)
    for i, wi in w.items():
        if (x >> i) & 1:
            c[i] += wi
        else:
            c[i] -= wi
            const += wi
    big = sum((v for v in w.values() if v > 0), Fraction(0)) + margin
    agree_one = x & y
    for i in range(n):
        if i in w:
            continue
        if (agree_one >> i) & 1:
            c[i] += big
            const -= big
        else:
            c[i] -= big
    scale = 1 / Fraction(margin)
    return Hyperplane(tuple(v * scale for v in c), -const * scale)


def _edge_from_farkas(x, y, n, D, farkas, certify):
    if not certify:
        return EdgeStatus(True)
    y0 = Fraction(farkas[0])
    w = {D[0]: -sum((Fraction(v) for v in farkas[1:]), Fraction(0))}
    for i, v in zip(D[1:], farkas[1:]):
        w[i] = Fraction(v)
    return EdgeStatus(True, _hyperplane_from_weights(x, y, n, w, y0))


def _nonedge_from_lam(x, y, witnesses, lam, certify):
    if not certify:
        return EdgeStatus(False)
    pairs = [(z, v) for z, v in zip(witnesses, lam) if v > 0]
    pairs.sort()
    i = ((x ^ y) & -(x ^ y)).bit_length() - 1  # any differing coordinate
    alpha = sum((v for z, v in pairs if ((z >> i) & 1) == ((x >> i) & 1)), Fraction(0))
    return EdgeStatus(False, ConvexCombination(tuple(z for z, _ in pairs), tuple(v for _, v in pairs), alpha))


def _solve_projected(x, y, n, witnesses, certify, rule=BLAND):
    system, D = projected_system(x, y, witnesses)
    if system is None:
        return _edge_from_farkas(x, y, n, D, [1] + [0] * (len(D) - 1), certify)
    verdict = solve_feasibility(system, rule)
    if isinstance(verdict, Feasible):
        return _nonedge_from_lam(x, y, witnesses, verdict.lam, certify)
    return _edge_from_farkas(x, y, n, D, verdict.farkas, certify)


def _auto(x, y, n, witnesses, certify):
    if len(witnesses) <= 1:
        return EdgeStatus(True, WitnessCount(len(witnesses)) if certify else None)
    diff = x ^ y
    d = diff.bit_count()
    proj = [(z ^ y) & diff for z in witnesses]
    common_one = diff
    any_one = 0
    for u in proj:
        common_one &= u
        any_one |= u
    # a coordinate of D that is constant over all witnesses pins alpha to 0 or 1
    fixed = common_one or (diff & ~any_one)
    if fixed:
        if not certify:
            return EdgeStatus(True)
        i = (fixed & -fixed).bit_length() - 1
        sign = -1 if common_one else 1
        w = {j: Fraction(-sign) for j in range(n) if (diff >> j) & 1}
        w[i] = Fraction(sign * (d - 1))
        return EdgeStatus(True, _hyperplane_from_weights(x, y, n, w, Fraction(1)))
    present = set(proj)
    for z, u in zip(witnesses, proj):
        if (u ^ diff) in present:
            if not certify:
                return EdgeStatus(False)
            mate = ((u ^ diff) ^ y) & diff | (x & y)
            pair = tuple(sorted((z, mate)))
            half = Fraction(1, 2)
            return EdgeStatus(False, ConvexCombination(pair, (half, half), half))
    return _solve_projected(x, y, n, witnesses, certify, DANTZIG)


def _oracle_full(Q, x, y, certify):
    system = full_system(Q, x, y)
    verdict = solve_feasibility(system, ORACLE_RULE)
    if isinstance(verdict, Feasible):
        if not certify:
            return EdgeStatus(False)
        others = [z for z in Q.points if z != x and z != y]
        pairs = sorted((z, v) for z, v in zip(others, verdict.lam) if v > 0)
        alpha = verdict.lam[len(others)]
        return EdgeStatus(False, ConvexCombination(tuple(z for z, _ in pairs), tuple(v for _, v in pairs), alpha))
    return EdgeStatus(True, FarkasCertificate("full", verdict.farkas) if certify else None)


def _oracle_hyperplane(Q, x, y, certify):
    n = Q.n
    system = hyperplane_system(Q, x, y)
    verdict = solve_feasibility(system, ORACLE_RULE)
    if isinstance(verdict, Feasible):
        if not certify:
            return EdgeStatus(True)
        v = verdict.lam
        c = tuple(v[i] - v[n + i] for i in range(n))
        b = v[2 * n] - v[2 * n + 1] + 1
        return EdgeStatus(True, Hyperplane(c, b))
    if not certify:
        return EdgeStatus(False)
    # the Farkas vector is itself a convex combination: mu_z = -y_z
    f = verdict.farkas
    others = [z for z in Q.points if z != x and z != y]
    total = f[0] + f[1]
    pairs = sorted((z, -fz / total) for z, fz in zip(others, f[2:]) if fz < 0)
    cert = ConvexCombination(tuple(z for z, _ in pairs), tuple(v for _, v in pairs), f[0] / total)
    return EdgeStatus(False, cert)


def _check_pair(Q: VertexSet, x, y) -> tuple[int, int]:
    x = x.bits if isinstance(x, Point) else int(x)
    y = y.bits if isinstance(y, Point) else int(y)
    if x not in Q or y not in Q:
        raise KeyError("both endpoints must belong to the vertex set")
    if x == y:
        raise ValueError("x and y must be distinct")
    return x, y


def edge_status(Q: VertexSet, x, y, method: str = AUTO, certify: bool = True,
                witnesses: Optional[tuple] = None) -> EdgeStatus:
    x, y = _check_pair(Q, x, y)
    if method == ORACLE_FULL:
        return _oracle_full(Q, x, y, certify)
    if method == ORACLE_HYPERPLANE:
        return _oracle_hyperplane(Q, x, y, certify)
    if witnesses is None:
        witnesses = witness_set(Q, x, y).members
    if method == AUTO:
        return _auto(x, y, Q.n, witnesses, certify)
    if method == LP:
        return _solve_projected(x, y, Q.n, witnesses, certify)
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# averaging tuples


def _enc(u: int, D: list[int], base: int) -> int:
    v = 0
    scale = 1
    for i in D:
        if (u >> i) & 1:
            v += scale
        scale *= base
    return v


def averaging_certificate_search(Q: VertexSet, x, y, k_max: int,
                                 budget: int = 10**6) -> Optional[AveragingTuple]:
    """Smallest k <= k_max with a 2k-multiset of witnesses averaging to (x+y)/2.

    Meet in the middle: every k-multiset is indexed by its coordinate sums on
    D, and a second k-multiset must supply the complement to k on each
    coordinate.  Raises SearchBudgetExceeded if a level would enumerate more
    than ``budget`` multisets.
    """
    x, y = _check_pair(Q, x, y)
    W = witness_set(Q, x, y).members
    if not W:
        return None
    diff = x ^ y
    D = [i for i in range(diff.bit_length()) if (diff >> i) & 1]
    proj = [(z ^ y) & diff for z in W]
    for k in range(1, k_max + 1):
        if math.comb(len(W) + k - 1, k) > budget:
            raise SearchBudgetExceeded(f"k={k} needs {math.comb(len(W) + k - 1, k)} multisets")
        base = 2 * k + 1
        codes = [_enc(u, D, base) for u in proj]
        target = k * _enc(diff, D, base)
        table = {}
        for combo in itertools.combinations_with_replacement(range(len(W)), k):
            table.setdefault(sum(codes[i] for i in combo), combo)
        for s, combo in table.items():
            other = table.get(target - s)
            if other is not None:
                pts = tuple(sorted(W[i] for i in combo + other))
                return AveragingTuple(pts, k)
    return None


# --------------------------------------------------------------------------
# polytope graph


@dataclass
class PolytopeGraph:
    vertices: VertexSet
    edges: set = field(default_factory=set)
    non_edges: dict = field(default_factory=dict)
    method: str = AUTO
    sampled: bool = False
    edge_certificates: dict = field(default_factory=dict)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_pairs(self) -> int:
        return len(self.edges) + len(self.non_edges)

    def adjacency(self) -> list[int]:
        """Neighbourhoods as bitmasks over vertex indices."""
        adj = [0] * len(self.vertices)
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    def certificate(self, i: int, j: int):
        key = (min(i, j), max(i, j))
        if key in self.non_edges:
            return self.non_edges[key]
        return self.edge_certificates.get(key)

    def to_json(self) -> dict:
        prov = self.vertices.provenance
        seed, p = None, None
        if isinstance(prov, tuple):
            seed = prov[0]
            rate = prov[1]
            p = rate.value if getattr(rate, "form", None) == "explicit" else str(rate)
        elif prov == "full":
            p = 1.0
        width = (self.vertices.n + 3) // 4
        non_edges = []
        for (i, j) in sorted(self.non_edges):
            cert = self.non_edges[(i, j)]
            non_edges.append([i, j, cert.to_json() if cert is not None else None])
        return {
            "n": self.vertices.n,
            "p": p,
            "seed": seed,
            "method": self.method,
            "vertices": [format(z, f"0{width}x") for z in self.vertices.points],
            "edges": [[i, j] for i, j in sorted(self.edges)],
            "non_edges": non_edges,
        }


_CHUNK_CELLS = 1 << 22


def witness_count_rows(Q: VertexSet, i: int, arr: Optional[np.ndarray] = None):
    """For vertex i, the witness counts of every pair (i, j) with j > i.

    A point z lies in the box of (x, y) iff z differs from x only where y
    does, i.e. (z ^ x) ⊆ (y ^ x).  Returns (counts, membership) where the
    membership matrix has one boolean row per j.
    """
    if arr is None:
        arr = Q.array()
    x = np.uint64(Q.points[i])
    dz = arr ^ x
    dy = arr[i + 1:] ^ x
    inside = (dz[None, :] & ~dy[:, None]) == 0
    counts = inside.sum(axis=1) - 2  # z = x and z = y are always inside
    return counts, inside


def _classify(Q, i, j, method, certify, inside_row=None):
    x, y = Q.points[i], Q.points[j]
    if method in (AUTO, LP):
        if inside_row is not None:
            idx = np.flatnonzero(inside_row)
            W = tuple(Q.points[t] for t in idx if t != i and t != j)
        else:
            W = witness_set(Q, x, y).members
        return edge_status(Q, x, y, method, certify, witnesses=W)
    return edge_status(Q, x, y, method, certify)


def _record(G, i, j, status, certify):
    if status.is_edge:
        G.edges.add((i, j))
        if certify and status.certificate is not None:
            G.edge_certificates[(i, j)] = status.certificate
    else:
        G.non_edges[(i, j)] = status.certificate if certify else None


def sample_pairs(N: int, budget: int, seed: int) -> list[tuple[int, int]]:
    """``budget`` distinct unordered index pairs, uniformly at random."""
    total = N * (N - 1) // 2
    if budget >= total:
        return [(i, j) for i in range(N) for j in range(i + 1, N)]
    rng = SplitMix64(seed)
    chosen = set()
    out = []
    while len(out) < budget:
        i, j = rng.below(N), rng.below(N)
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        if key not in chosen:
            chosen.add(key)
            out.append(key)
    out.sort()
    return out


def build_graph(Q: VertexSet, method: str = AUTO, pair_budget: Optional[int] = None,
                certificates: bool = False, seed: int = 0) -> PolytopeGraph:
    """Classify every pair of Q, or ``pair_budget`` uniformly sampled pairs."""
    N = len(Q)
    G = PolytopeGraph(Q, method=method)
    if N < 2:
        return G
    if pair_budget is not None:
        pairs = sample_pairs(N, pair_budget, seed)
        G.sampled = len(pairs) < N * (N - 1) // 2
        arr = Q.array() if method in (AUTO, LP) else None
        for i, j in pairs:
            row = None
            if arr is not None:
                x, y = arr[i], arr[j]
                row = ((arr ^ x) & ~(y ^ x)) == 0
            _record(G, i, j, _classify(Q, i, j, method, certificates, row), certificates)
        return G
    if method not in (AUTO, LP):
        for i in range(N):
            for j in range(i + 1, N):
                _record(G, i, j, _classify(Q, i, j, method, certificates), certificates)
        return G
    arr = Q.array()
    rows_per_chunk = max(1, _CHUNK_CELLS // N)
    for i in range(N - 1):
        for start in range(i + 1, N, rows_per_chunk):
            stop = min(N, start + rows_per_chunk)
            x = arr[i]
            dy = arr[start:stop] ^ x
            counts = ((arr ^ x)[None, :] & ~dy[:, None]) == 0
            sizes = counts.sum(axis=1) - 2
            for off in range(stop - start):
                j = start + off
                if method == AUTO and sizes[off] <= 1:
                    _record(G, i, j, EdgeStatus(True, WitnessCount(int(sizes[off])) if certificates else None),
                            certificates)
                else:
                    _record(G, i, j, _classify(Q, i, j, method, certificates, counts[off]), certificates)
    return G


def find_non_edge(Q: VertexSet, method: str = AUTO) -> Optional[tuple[int, int]]:
    """Some non-adjacent index pair, or None if the graph is a clique.

    Pairs are tried from the largest Hamming distance down, where witnesses
    are most plentiful.
    """
    N = len(Q)
    if N < 3:
        return None
    arr = Q.array()
    ii, jj = np.triu_indices(N, 1)
    dist = np.bitwise_count(arr[ii] ^ arr[jj])
    order = np.argsort(-dist.astype(np.int64), kind="stable")
    for t in order:
        i, j = int(ii[t]), int(jj[t])
        if dist[t] < 2:
            break
        x, y = arr[i], arr[j]
        row = ((arr ^ x) & ~(y ^ x)) == 0
        if row.sum() <= 3:
            continue
        if not _classify(Q, i, j, method, False, row).is_edge:
            return i, j
    return None
