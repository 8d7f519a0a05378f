"""The brute-force ground truth itself: enumeration, tables, suite plumbing."""

import pytest

from fpfilter.minifloat import TINY, FpFormat, FpVal, cmp_order, to_literal
from fpfilter.oracle import (
    PropertyReport,
    brute_ulpmax,
    enumerate_values,
    op_tables,
    run_property_suite,
)


class TestEnumeration:
    def test_tiny_census(self):
        """Two signs of (normals over six exponents plus 31 subnormals),
        two zeros, two infinities: 2*(32*6 + 31 + 1) + 2 = 450."""
        vals = enumerate_values(TINY)
        assert len(vals) == 450
        normals = sum(1 for v in vals if v.is_finite and not v.is_zero and not v.is_subnormal)
        subs = sum(1 for v in vals if v.is_subnormal)
        zeros = sum(1 for v in vals if v.is_zero)
        infs = sum(1 for v in vals if v.is_inf)
        assert (normals, subs, zeros, infs) == (2 * 32 * 6, 2 * 31, 2, 2)

    def test_sorted_and_duplicate_free(self):
        vals = enumerate_values(TINY)
        for a, b in zip(vals, vals[1:]):
            assert cmp_order(a, b) < 0

    def test_endpoints(self):
        vals = enumerate_values(TINY)
        assert vals[0] == FpVal.inf(TINY, True)
        assert vals[-1] == FpVal.inf(TINY)

    def test_refuses_large_formats(self):
        with pytest.raises(ValueError):
            enumerate_values(FpFormat(24, 127, -126))


class TestBruteTables:
    def test_add_zero_case(self):
        got = brute_ulpmax("add", FpVal.zero(TINY), TINY)
        assert got.is_zero and not got.neg

    def test_div_achievers_exist_up_to_one(self):
        # witnessed by y = +-f_max: (z * f_max) / f_max recovers z
        from fpfilter.minifloat import cmp_num

        for z in enumerate_values(TINY):
            if not z.is_finite or z.is_zero:
                continue
            if cmp_num(z.abs(), TINY.one()) <= 0:
                assert brute_ulpmax("div", z, TINY) is not None, to_literal(z)

    def test_independent_of_enumeration_order(self):
        # the table is a max over pairs; recomputing from a reversed scan
        # must agree on a sample of targets
        from fpfilter.minifloat import cmp_num, fp_mul

        vals = [v for v in enumerate_values(TINY) if v.is_finite]
        targets = [v for v in vals if not v.is_zero][::41]
        for z in targets:
            best = None
            for v in reversed(vals):
                for y in reversed(vals):
                    if fp_mul(v, y) == z:
                        if best is None or cmp_num(v, best) > 0:
                            best = v
            assert best == brute_ulpmax("mul", z, TINY)


class TestOpTables:
    def test_table_agrees_with_direct_evaluation(self):
        from fpfilter.minifloat import fp_op, ordinal

        tabs = op_tables(TINY)
        vals = enumerate_values(TINY)
        import random

        rng = random.Random(2)
        for _ in range(2000):
            i, j = rng.randrange(len(vals)), rng.randrange(len(vals))
            op = rng.choice(["add", "sub", "mul", "div"])
            r = fp_op(op, vals[i], vals[j])
            entry = tabs.tables[op][i * tabs.n + j]
            if r is None:
                assert entry == 1 << 30
            else:
                assert entry == ordinal(r) + tabs.base


class TestSuiteReporting:
    def test_report_lists_instance_counts(self):
        rep = run_property_suite(
            TINY, names=["split_halves_exactly", "operand_bounds_monotone"]
        )
        assert isinstance(rep, PropertyReport)
        assert all(r.instances > 0 for r in rep.results)
        assert rep.passed
        assert rep.fmt_name == "tiny"


class TestOtherFormats:
    """The operand-bound theorems hold beyond the default test format,
    including exponent ranges that break the usual emin = 1 - emax tie."""

    def test_general_exponent_relation(self):
        fmt = FpFormat(5, 3, -3)
        rep = run_property_suite(
            fmt,
            names=[
                "operand_bounds_attainable_and_correct",
                "interval_maximizer_dominates",
                "operand_bounds_monotone",
                "mul_div_by_fmax_identity",
                "divisor_ceiling_strict",
            ],
        )
        assert rep.passed, [
            (r.name, r.counterexample) for r in rep.results if not r.passed
        ]

    def test_narrow_exponent_range(self):
        # p > emax + 3: the dividend ceiling is checked as an upper bound
        fmt = FpFormat(7, 2, -2)
        rep = run_property_suite(
            fmt, names=["operand_bounds_attainable_and_correct"]
        )
        assert rep.passed, rep.results[0].counterexample
