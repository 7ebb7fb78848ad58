"""Graph statistics for polytope graphs: density, degrees, cliques, expansion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .adjacency import PolytopeGraph

MAX_EXPANSION_VERTICES = 24


class SampledGraphError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    num_vertices: int
    num_edges: int
    density: Fraction
    min_degree: Optional[int]
    max_degree: Optional[int]
    is_clique: bool
    num_components: int
    expansion: Optional[Fraction] = None


def _full(G: PolytopeGraph, what: str):
    if G.sampled:
        raise SampledGraphError(f"{what} needs a fully built graph")


def density(G: PolytopeGraph) -> Fraction:
    """|E| / C(|V|, 2), taken to be 1 when |V| <= 1."""
    _full(G, "density")
    N = G.num_vertices
    if N <= 1:
        return Fraction(1)
    return Fraction(len(G.edges), math.comb(N, 2))


def density_estimate(G: PolytopeGraph) -> tuple[float, float]:
    """Edge fraction among the classified pairs and its binomial standard error."""
    total = G.num_pairs
    if total == 0:
        raise ValueError("no pairs were classified")
    est = len(G.edges) / total
    return est, math.sqrt(est * (1 - est) / total)


def degrees(G: PolytopeGraph) -> list[int]:
    _full(G, "degrees")
    deg = [0] * G.num_vertices
    for i, j in G.edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def min_degree(G: PolytopeGraph) -> int:
    if G.num_vertices == 0:
        raise ValueError("empty graph has no degrees")
    return min(degrees(G))


def max_degree(G: PolytopeGraph) -> int:
    if G.num_vertices == 0:
        raise ValueError("empty graph has no degrees")
    return max(degrees(G))


def is_clique(G: PolytopeGraph) -> bool:
    _full(G, "is_clique")
    return not G.non_edges


def num_components(G: PolytopeGraph) -> int:
    _full(G, "num_components")
    adj = G.adjacency()
    unseen = (1 << G.num_vertices) - 1
    count = 0
    while unseen:
        frontier = unseen & -unseen
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            f = frontier
            while f:
                v = (f & -f).bit_length() - 1
                nxt |= adj[v]
                f &= f - 1
            frontier = nxt & ~comp
        unseen &= ~comp
        count += 1
    return count


def expansion_from_adjacency(adj: list[int]) -> Fraction:
    """Exact min over 0 < |S| <= N/2 of cut(S)/|S|, by exhaustive enumeration.

    Cut sizes of all 2^N subsets are filled in by doubling:
    cut(T ∪ {v}) = cut(T) + deg(v) - 2|N(v) ∩ T| for T ⊆ {0..v-1}.
    """
    N = len(adj)
    if N < 2:
        raise ValueError("expansion needs at least two vertices")
    if N > MAX_EXPANSION_VERTICES:
        raise ValueError(f"exhaustive expansion limited to {MAX_EXPANSION_VERTICES} vertices")
    cut = np.zeros(1 << N, dtype=np.int32)
    size = np.zeros(1 << N, dtype=np.int8)
    for v in range(N):
        lo = 1 << v
        t = np.arange(lo, dtype=np.uint32)
        shared = np.bitwise_count(t & np.uint32(adj[v] & (lo - 1))).astype(np.int32)
        cut[lo:2 * lo] = cut[:lo] + adj[v].bit_count() - 2 * shared
        size[lo:2 * lo] = size[:lo] + 1
    best = None
    for s in range(1, N // 2 + 1):
        c = int(cut[size == s].min())
        ratio = Fraction(c, s)
        if best is None or ratio < best:
            best = ratio
    return best


def edge_expansion(G: PolytopeGraph) -> Fraction:
    _full(G, "edge_expansion")
    return expansion_from_adjacency(G.adjacency())


def report(G: PolytopeGraph, with_expansion: bool = False) -> MetricsReport:
    N = G.num_vertices
    deg = degrees(G) if N else []
    exp = None
    if with_expansion and 2 <= N <= MAX_EXPANSION_VERTICES:
        exp = edge_expansion(G)
    return MetricsReport(
        num_vertices=N,
        num_edges=len(G.edges),
        density=density(G),
        min_degree=min(deg) if deg else None,
        max_degree=max(deg) if deg else None,
        is_clique=is_clique(G),
        num_components=num_components(G),
        expansion=exp,
    )
