"""Interval domain: bound conventions, lattice operations, splitting."""

import pytest

from fpfilter.interval import (
    FpInterval,
    contains,
    count,
    full,
    hull,
    intersect,
    is_singleton,
    make,
    parse_text,
    singleton,
    split,
    to_text,
)
from fpfilter.minifloat import TINY, FpVal, parse_decimal, parse_literal
from fpfilter.oracle import enumerate_values


def _iv(lo: str, hi: str) -> FpInterval:
    return FpInterval(parse_decimal(lo, TINY), parse_decimal(hi, TINY))


class TestZeroConventions:
    def test_zero_pair_is_a_two_value_interval(self):
        iv = make(FpVal.zero(TINY, True), FpVal.zero(TINY))
        assert iv is not None
        assert count(iv) == 2
        assert contains(iv, FpVal.zero(TINY, True))
        assert contains(iv, FpVal.zero(TINY))

    def test_reversed_zero_pair_is_empty(self):
        assert make(FpVal.zero(TINY), FpVal.zero(TINY, True)) is None

    def test_singleton(self):
        one = TINY.one()
        assert count(singleton(one)) == 1
        assert is_singleton(singleton(one))


class TestLattice:
    def test_intersect_example(self):
        assert intersect(_iv("1", "4"), _iv("2", "8")) == _iv("2", "4")

    def test_disjoint_intersection_is_empty(self):
        assert intersect(_iv("1", "2"), _iv("4", "8")) is None

    def test_hull_example(self):
        assert hull(_iv("-2", "-1"), _iv("3", "5")) == _iv("-2", "5")

    def test_hull_contains_both_sides(self):
        vals = enumerate_values(TINY)
        a = FpInterval(vals[10], vals[40])
        b = FpInterval(vals[200], vals[300])
        h = hull(a, b)
        for v in vals[10:41] + vals[200:301]:
            assert contains(h, v)

    def test_glb_lub_on_a_subgrid(self):
        vals = enumerate_values(TINY)[::37]
        ivs = [
            FpInterval(vals[i], vals[j])
            for i in range(len(vals))
            for j in range(i, len(vals))
        ]
        for a in ivs:
            for b in ivs:
                both = intersect(a, b)
                h = hull(a, b)
                for v in vals:
                    inboth = contains(a, v) and contains(b, v)
                    assert inboth == (both is not None and contains(both, v))
                    if contains(a, v) or contains(b, v):
                        assert contains(h, v)


class TestCount:
    def test_binade_width(self):
        # one binade holds 2**(p-1) values; [1.0, pred(2.0)] is exactly it
        a = FpInterval(
            parse_literal("1.00000e2^0", TINY), parse_literal("1.11111e2^0", TINY)
        )
        assert count(a) == 32

    def test_full_count(self):
        assert count(full(TINY)) == TINY.total_count == 450


class TestSplit:
    def test_halves_partition(self):
        vals = enumerate_values(TINY)
        for i, j in ((0, len(vals) - 1), (5, 6), (17, 100)):
            a = FpInterval(vals[i], vals[j])
            left, right = split(a)
            assert count(left) + count(right) == count(a)
            assert abs(count(left) - count(right)) <= 1
            assert intersect(left, right) is None
            assert hull(left, right) == a

    def test_singleton_refuses(self):
        with pytest.raises(ValueError):
            split(singleton(TINY.one()))


class TestText:
    def test_roundtrip(self):
        a = _iv("-2", "5")
        assert parse_text(to_text(a), TINY) == a

    def test_zero_interval_text(self):
        a = make(FpVal.zero(TINY, True), FpVal.zero(TINY))
        assert to_text(a) == "[-0, +0]"
        assert parse_text("[-0, +0]", TINY) == a
