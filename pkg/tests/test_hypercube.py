import itertools

import pytest
from hypothesis import given, strategies as st

from randpoly.hypercube import (DimensionError, Interval, Point, complement_count, hamming,
                                interval_points, join, meet, submasks, weight)


def P(s):
    return Point.from_string(s)


def test_string_convention_coordinate_one_is_low_bit():
    assert P("10").bits == 1
    assert P("0110").coords() == [0, 1, 1, 0]
    assert str(P("0110")) == "0110"
    assert P("0110").to_hex() == "6"
    assert Point.from_hex("6", 4) == P("0110")


def test_meet_join_examples():
    assert meet(P("01"), P("10")) == P("00")
    assert meet(P("0110"), P("0011")) == P("0010")
    assert join(P("01"), P("10")) == P("11")
    assert join(P("0110"), P("0011")) == P("0111")
    x = P("1011")
    assert meet(x, x) == x
    assert join(x, P("0000")) == x


def test_weight_hamming_complement():
    assert weight(P("0000")) == 0
    assert weight(P("1111")) == 4
    assert weight(P("0110")) == 2
    assert hamming(P("00"), P("11")) == 2
    assert hamming(P("0110"), P("0011")) == 2
    assert complement_count(P("00"), P("00")) == 2
    assert complement_count(P("01"), P("10")) == 0
    assert complement_count(P("0110"), P("0011")) == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        meet(P("01"), P("011"))
    with pytest.raises(DimensionError):
        hamming(P("01"), P("011"))


def test_interval_examples():
    assert interval_points(P("00"), P("11")) == [P("00"), P("10"), P("01"), P("11")]
    z = P("101")
    assert interval_points(z, z) == [z]
    assert interval_points(P("010"), P("011")) == [P("010"), P("011")]


def test_interval_exhaustive_small():
    for n in range(1, 7):
        for a, b in itertools.product(range(1 << n), repeat=2):
            x, y = Point(a, n), Point(b, n)
            pts = interval_points(x, y)
            assert len(pts) == 2 ** hamming(x, y)
            lo, hi = meet(x, y), join(x, y)
            inside = {p.bits for p in pts}
            for z in range(1 << n):
                zz = Point(z, n)
                member = meet(lo, zz) == lo and join(hi, zz) == hi
                assert member == (z in inside)


def test_interval_cardinality_exhaustive_n12():
    n = 12
    for a in range(1 << n):
        x = Point(a, n)
        for b in range(0, 1 << n, 37):
            y = Point(b, n)
            assert len(Interval.spanned(x, y)) == 2 ** hamming(x, y)


@given(st.integers(0, 4095), st.integers(0, 4095), st.integers(0, 4095))
def test_interval_membership_n12(a, b, c):
    n = 12
    x, y, z = Point(a, n), Point(b, n), Point(c, n)
    iv = Interval.spanned(x, y)
    expected = meet(x, y) == meet(meet(x, y), z) and join(x, y) == join(join(x, y), z)
    assert (z in iv) == expected
    if hamming(x, y) <= 6:
        assert (z in interval_points(x, y)) == expected


def test_submasks_all_distinct():
    for mask in range(64):
        subs = list(submasks(mask))
        assert len(subs) == len(set(subs)) == 2 ** mask.bit_count()
        assert all(s & ~mask == 0 for s in subs)


words = st.integers(min_value=0, max_value=(1 << 64) - 1)


@given(words, words, st.integers(min_value=1, max_value=64))
def test_identities(a, b, n):
    mask = (1 << n) - 1
    x, y = Point(a & mask, n), Point(b & mask, n)
    assert hamming(x, y) == weight(x) + weight(y) - 2 * weight(meet(x, y))
    assert complement_count(x, y) == n - weight(x) - weight(y) + weight(meet(x, y))
    assert Point.from_hex(x.to_hex(), n) == x
    assert 0 <= weight(x) <= n


def test_point_rejects_high_bits():
    with pytest.raises(ValueError):
        Point(0b100, 2)
