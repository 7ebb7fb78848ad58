import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from randpoly.hypercube import Point, hamming, meet, weight
from randpoly.sampling import VertexSet, sample_vertex_set
from randpoly.witness import (FULL_CUBE, atypical_union_bound, count_atypical, is_typical,
                              is_typical_pair, witness_set)


def P(s):
    return Point.from_string(s)


def brute_witnesses(Q, x, y):
    lo, hi = x & y, x | y
    return tuple(z for z in Q.points if z not in (x, y) and z & lo == lo and z | hi == hi)


def brute_typical(x, y, alpha):
    # real-valued windows evaluated with exact rationals
    n = x.n
    a = Fraction(alpha) * n
    ov = weight(meet(x, y))
    out = n - (x.bits | y.bits).bit_count()
    return (abs(ov - Fraction(weight(x), 2)) <= a
            and abs(out - Fraction(n - weight(x), 2)) <= a)


def test_square_examples(square):
    assert witness_set(square, 0b00, 0b11).members == (0b01, 0b10)
    assert witness_set(square, 0b00, 0b01).members == ()
    pair = VertexSet.from_points(3, [1, 6])
    assert witness_set(pair, 1, 6).members == ()


def test_witness_errors(square):
    with pytest.raises(ValueError):
        witness_set(square, 1, 1)
    with pytest.raises(KeyError):
        witness_set(VertexSet.from_points(2, [0, 1]), 0, 3)


@given(st.integers(1, 10), st.floats(0.05, 0.9), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_witness_matches_brute_force_and_symmetric(n, p, seed):
    Q = sample_vertex_set(n, p, seed)
    pts = Q.points
    for x, y in itertools.islice(itertools.combinations(pts, 2), 200):
        w = witness_set(Q, x, y).members
        assert w == brute_witnesses(Q, x, y)
        assert w == witness_set(Q, y, x).members


def test_witness_monotone():
    big = sample_vertex_set(8, 0.6, 1)
    small = VertexSet.from_points(8, big.points[::2])
    for x, y in itertools.combinations(small.points, 2):
        assert set(witness_set(small, x, y).members) <= set(witness_set(big, x, y).members)


def test_typicality_examples():
    assert is_typical(P("0000"), P("0011"), 0.25)
    assert not is_typical(P("0000"), P("1111"), 0.25)
    assert not is_typical(P("1111"), P("1111"), 0.25)
    assert is_typical(P("00000000"), P("00001111"), 0.1)
    assert not is_typical_pair(P("00000000"), P("00001111"), 0.1)
    assert is_typical_pair(P("01"), P("10"), 0.3)


def test_typicality_matches_rational_definition():
    for n in range(1, 7):
        for alpha in (0.05, 0.1, 0.25, 1 / 3):
            for a, b in itertools.product(range(1 << n), repeat=2):
                x, y = Point(a, n), Point(b, n)
                assert is_typical(x, y, alpha) == brute_typical(x, y, alpha)


def _check_pair_lemma(x, y, alpha):
    n = x.n
    a = 2 * Fraction(alpha) * n
    h = Fraction(n, 2)
    q = Fraction(n, 4)
    assert h - a <= weight(x) <= h + a
    assert h - a <= weight(y) <= h + a
    assert q - a <= weight(meet(x, y)) <= q + a
    assert h - a <= hamming(x, y) <= h + a


def test_typical_pair_lemma_exhaustive_small():
    for n in range(1, 9):
        for a, b in itertools.product(range(1 << n), repeat=2):
            x, y = Point(a, n), Point(b, n)
            if is_typical_pair(x, y, 0.1):
                _check_pair_lemma(x, y, 0.1)


@given(st.integers(1, 64), st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1),
       st.sampled_from([0.05, 0.1, 0.2]))
@settings(max_examples=300)
def test_typical_pair_lemma_random(n, a, b, alpha):
    mask = (1 << n) - 1
    x, y = Point(a & mask, n), Point(b & mask, n)
    if is_typical_pair(x, y, alpha):
        _check_pair_lemma(x, y, alpha)


def test_count_atypical_examples():
    assert count_atypical(P("00"), 0.6) == 0
    assert count_atypical(P("00"), 0.6, VertexSet(2, ())) == 0
    x = P("0110")
    brute = sum(not is_typical(x, Point(b, 4), 0.1) for b in range(16))
    assert count_atypical(x, 0.1) == brute


def test_count_atypical_vs_union_bound_n12():
    n = 12
    for a in range(1 << n):
        x = Point(a, n)
        assert count_atypical(x, 0.1, FULL_CUBE) <= atypical_union_bound(x, 0.1)


def test_union_bound_value():
    # |x| = 2, n = 4: alpha = 1/4 gives windows [0, 2] on both blocks, nothing atypical;
    # alpha = 0.1 gives [0.6, 1.4], so only the values 0 and 2 fall outside
    x = P("1100")
    assert atypical_union_bound(x, 0.25) == 0
    tail = math.comb(2, 0) + math.comb(2, 2)
    assert atypical_union_bound(x, 0.1) == tail * 4 + 4 * tail
