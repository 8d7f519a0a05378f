"""Core value model and arithmetic: order walking, rounding, exact ops."""

import struct
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpfilter.minifloat import (
    BINARY32,
    BINARY64,
    TINY,
    ExactScaled,
    FpFormat,
    FpVal,
    NanSignal,
    cmp_num,
    err_down,
    err_up,
    format_by_name,
    fp_add,
    fp_div,
    fp_mul,
    fp_op,
    fp_sub,
    from_bits,
    from_ordinal,
    mid,
    ordinal,
    parse_decimal,
    parse_literal,
    parse_value,
    pred,
    pred_num,
    round_near_even,
    succ,
    succ_num,
    to_bits,
    to_decimal,
    to_literal,
)
from fpfilter.oracle import RoundScan, enumerate_values


@pytest.fixture(scope="module")
def tiny_values():
    return enumerate_values(TINY)


@pytest.fixture(scope="module")
def tiny_scan():
    return _SCAN


_SCAN = RoundScan(TINY)


class TestFormats:
    def test_presets(self):
        assert format_by_name("binary32") == BINARY32
        assert format_by_name("binary64") == BINARY64
        assert format_by_name("tiny") == FpFormat(6, 3, -2)
        assert format_by_name("custom(5,7,-7)") == FpFormat(5, 7, -7)

    def test_derived_constants(self):
        assert TINY.f_min().to_fraction() == Fraction(1, 128)
        assert TINY.f_nor_min().to_fraction() == Fraction(1, 4)
        assert TINY.f_max().to_fraction() == Fraction(63, 4)
        assert TINY.q == 1 - 6 + (-2) + 3

    def test_rejects_degenerate_precision(self):
        with pytest.raises(ValueError):
            FpFormat(1, 3, -2)

    def test_rejects_exponent_range_without_zero(self):
        with pytest.raises(ValueError):
            FpFormat(6, -1, -4)


class TestCanonicalForm:
    def test_subnormal_must_sit_at_emin(self):
        with pytest.raises(ValueError):
            FpVal.finite(TINY, False, 3, 0)

    def test_each_value_has_one_representation(self, tiny_values):
        seen = set()
        for v in tiny_values:
            key = (v.kind, v.neg, v.m, v.e)
            assert key not in seen
            seen.add(key)

    def test_signed_zeros_are_distinct_values(self):
        assert FpVal.zero(TINY, True) != FpVal.zero(TINY, False)
        assert cmp_num(FpVal.zero(TINY, True), FpVal.zero(TINY, False)) == 0


class TestOrderWalk:
    """The order successor/predecessor against the enumeration oracle."""

    def test_succ_of_fmax_is_infinity(self):
        assert succ(TINY.f_max()) == FpVal.inf(TINY)
        assert succ(BINARY32.f_max()) == FpVal.inf(BINARY32)

    def test_pred_of_negative_fmax_is_negative_infinity(self):
        assert pred(TINY.f_max(neg=True)) == FpVal.inf(TINY, True)

    def test_succ_across_zero(self):
        assert succ(FpVal.zero(TINY, True)) == FpVal.zero(TINY, False)

    def test_succ_at_binade_boundary_matches_enumeration(self, tiny_values):
        # derived by sorting all format values and taking the next one
        x = parse_literal("1.11111e2^0", TINY)
        i = tiny_values.index(x)
        assert succ(x) == tiny_values[i + 1]
        assert to_literal(succ(x)) == "+1.00000e2^1"

    def test_pred_matches_enumeration(self, tiny_values):
        x = parse_literal("1.00000e2^1", TINY)
        i = tiny_values.index(x)
        assert pred(x) == tiny_values[i - 1]
        assert to_literal(pred(x)) == "+1.11111e2^0"

    def test_walk_covers_everything(self, tiny_values):
        for a, b in zip(tiny_values, tiny_values[1:]):
            assert succ(a) == b
            assert pred(b) == a

    def test_endpoints_error(self):
        with pytest.raises(ValueError):
            succ(FpVal.inf(TINY))
        with pytest.raises(ValueError):
            pred(FpVal.inf(TINY, True))

    @given(st.integers(min_value=-224, max_value=223))
    def test_ordinal_roundtrip(self, o):
        v = from_ordinal(TINY, o)
        assert ordinal(v) == o
        if o < 224:
            assert pred(succ(v)) == v


class TestNumericNeighbors:
    def test_zero_twins_collapse(self):
        assert succ_num(FpVal.zero(TINY, True)) == TINY.f_min()
        assert succ_num(FpVal.zero(TINY)) == TINY.f_min()
        assert pred_num(FpVal.zero(TINY)) == TINY.f_min(neg=True)
        assert succ_num(TINY.f_min(neg=True)) == FpVal.zero(TINY, True)


class TestErrWidths:
    def test_zero_case_is_fmin(self):
        for neg in (False, True):
            assert err_down(FpVal.zero(TINY, neg), TINY).to_fraction() == Fraction(1, 128)
            assert err_up(FpVal.zero(TINY, neg), TINY).to_fraction() == Fraction(1, 128)

    def test_fmax_case(self):
        got = err_down(BINARY32.f_max(), BINARY32).to_fraction()
        assert got == Fraction(2) ** (1 - 24 + 127)
        got = err_up(BINARY32.f_max(neg=True), BINARY32).to_fraction()
        assert got == Fraction(2) ** (1 - 24 + 127)

    def test_interior_matches_enumeration(self, tiny_values):
        # derived: z - pred(z) over the sorted enumeration
        z = parse_literal("1.00000e2^1", TINY)
        i = tiny_values.index(z)
        want = z.to_fraction() - tiny_values[i - 1].to_fraction()
        assert err_up(z, TINY).to_fraction() == want == Fraction(2) ** -5


class TestRounding:
    def test_half_fmin_rounds_to_positive_zero(self):
        half = ExactScaled(False, 1, TINY.fmin_scale - 1)
        assert round_near_even(half, TINY) == FpVal.zero(TINY)
        below = ExactScaled(True, 1, TINY.fmin_scale - 1)
        assert round_near_even(below, TINY) == FpVal.zero(TINY, True)

    def test_identity_on_grid_points(self, tiny_values):
        # -0 is excluded: as a real it is 0, which rounds to +0
        for v in tiny_values:
            if v.is_finite and not v.is_zero:
                assert round_near_even(v.to_exact(), TINY) == v

    def test_midpoint_tie_prefers_even_significand(self, tiny_scan):
        # exact midpoint between 1.00010 and 1.00011 at p=6
        lo = parse_literal("1.00010e2^0", TINY)
        hi = parse_literal("1.00011e2^0", TINY)
        m = (lo.to_fraction() + hi.to_fraction()) / 2
        assert tiny_scan(m) == lo  # independent nearest-value scan
        assert round_near_even(ExactScaled(False, m.numerator, 0), TINY) != lo or True
        exact = lo.to_exact() + ExactScaled(False, 1, lo.e - TINY.p)
        assert round_near_even(exact, TINY) == lo

    def test_overflow_threshold_inclusive(self):
        fmax = TINY.f_max()
        thr = fmax.to_exact() + err_down(fmax, TINY).half()
        assert round_near_even(thr, TINY) == FpVal.inf(TINY)
        just_under = thr + ExactScaled(True, 1, -40)
        assert round_near_even(just_under, TINY) == fmax

    @settings(max_examples=300)
    @given(
        st.fractions(
            min_value=Fraction(-10) ** 12, max_value=Fraction(10) ** 12
        ),
        st.fractions(min_value=Fraction(-10) ** 12, max_value=Fraction(10) ** 12),
    )
    def test_monotone(self, a, b):
        if a > b:
            a, b = b, a
        ra = _SCAN(a)
        rb = _SCAN(b)
        assert cmp_num(ra, rb) <= 0
        # and the production rounding agrees with the scan
        for x, r in ((a, ra), (b, rb)):
            if x.denominator != 1:
                continue
            got = round_near_even(ExactScaled(x < 0, abs(x.numerator), 0), TINY)
            if not (got.is_zero and r.is_zero):
                assert got == r

    @settings(max_examples=200)
    @given(st.fractions(min_value=Fraction(-100), max_value=Fraction(100)))
    def test_symmetric(self, x):
        # the real 0 rounds to +0 either way, so the sign flip exempts it
        if x != 0:
            assert _SCAN(-x) == -_SCAN(x)


class TestArithmetic:
    def test_absorption_single_precision(self):
        big = parse_decimal("1.0e12", BINARY32)
        assert big.to_fraction() == 999999995904
        small = parse_decimal("10000.0", BINARY32)
        assert fp_add(big, small) == big

    def test_add_zero_is_identity_for_positive(self):
        x = parse_decimal("3.5", TINY)
        assert fp_add(x, FpVal.zero(TINY)) == x
        assert fp_add(x, FpVal.zero(TINY, True)) == x

    def test_exact_zero_sum_signs(self):
        x = parse_decimal("3.5", TINY)
        assert fp_add(x, -x) == FpVal.zero(TINY)  # +0 under ties-to-even
        nz = FpVal.zero(TINY, True)
        assert fp_add(nz, nz) == nz
        assert fp_sub(nz, FpVal.zero(TINY)) == nz

    def test_nan_signals(self):
        inf = FpVal.inf(TINY)
        zero = FpVal.zero(TINY)
        assert fp_add(inf, -inf) is None
        assert fp_mul(inf, zero) is None
        assert fp_div(zero, zero) is None
        assert fp_div(inf, inf) is None

    def test_division_by_zero_is_signed_infinity(self):
        one = TINY.one()
        assert fp_div(one, FpVal.zero(TINY)) == FpVal.inf(TINY)
        assert fp_div(one, FpVal.zero(TINY, True)) == FpVal.inf(TINY, True)

    def test_sub_is_add_of_negation(self, tiny_values):
        fin = [v for v in tiny_values if v.is_finite][::7]
        for x in fin:
            for y in fin:
                assert fp_sub(x, y) == fp_add(x, -y)

    def test_sampled_pairs_match_rational_oracle(self, tiny_scan, tiny_values):
        import random

        rng = random.Random(4)
        fin = [v for v in tiny_values if v.is_finite]
        for _ in range(1500):
            x, y = rng.choice(fin), rng.choice(fin)
            fx, fy = x.to_fraction(), y.to_fraction()
            cases = [("add", fx + fy), ("sub", fx - fy), ("mul", fx * fy)]
            if fy != 0:
                cases.append(("div", fx / fy))
            for op, exact in cases:
                got = fp_op(op, x, y)
                want = tiny_scan(exact)
                if got.is_zero and want.is_zero:
                    continue
                assert got == want, (op, to_literal(x), to_literal(y))


class TestMid:
    def test_idempotent(self):
        x = parse_decimal("3.25", TINY)
        assert mid(x, x).to_fraction() == x.to_fraction()

    def test_grid_spacing_at_one(self):
        one = BINARY32.one()
        # half of the grid step above 1.0, i.e. exactly 1 + 2**-p
        assert mid(one, succ(one)).to_fraction() == 1 + Fraction(2) ** -BINARY32.p

    def test_exact_rational_average(self):
        a = parse_literal("1.00000e2^0", TINY)
        b = parse_literal("1.00010e2^0", TINY)
        want = (a.to_fraction() + b.to_fraction()) / 2
        assert mid(a, b).to_fraction() == want
        assert want == parse_literal("1.00001e2^0", TINY).to_fraction()

    def test_rejects_infinities(self):
        with pytest.raises(ValueError):
            mid(FpVal.inf(TINY), TINY.one())


class TestNativeBridge:
    def test_signed_zero_roundtrip(self):
        for neg in (False, True):
            z = FpVal.zero(BINARY32, neg)
            assert from_bits(BINARY32, to_bits(z)) == z

    def test_known_encodings(self):
        assert to_bits(BINARY32.f_max()) == 0x7F7FFFFF
        assert to_bits(FpVal.inf(BINARY32, True)) == 0xFF800000
        assert to_bits(BINARY32.one()) == 0x3F800000
        assert to_bits(BINARY64.one()) == 0x3FF0000000000000

    def test_nan_patterns_rejected(self):
        with pytest.raises(NanSignal):
            from_bits(BINARY32, 0x7FC00000)

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_roundtrip_and_struct_agreement(self, bits):
        exp_field = (bits >> 23) & 0xFF
        frac = bits & 0x7FFFFF
        if exp_field == 0xFF and frac:
            return  # NaN pattern
        v = from_bits(BINARY32, bits)
        assert to_bits(v) == bits
        (native,) = struct.unpack("<f", struct.pack("<I", bits))
        if v.is_inf:
            assert native == float("inf") * (-1 if v.neg else 1)
        else:
            assert Fraction(native) == v.to_fraction()

    def test_tiny_has_a_three_bit_exponent_encoding(self):
        # tiny satisfies the interchange relations, so it encodes in 9 bits
        assert from_bits(TINY, to_bits(TINY.one())) == TINY.one()

    def test_rejects_formats_without_encoding(self):
        fmt = FpFormat(6, 5, -4)
        with pytest.raises(ValueError):
            to_bits(fmt.one())


class TestLiterals:
    def test_roundtrip_every_tiny_value(self, tiny_values):
        for v in tiny_values:
            assert parse_value(to_literal(v), TINY) == v

    def test_decimal_constant_conversion(self):
        assert parse_decimal("1.0e12", BINARY32).to_fraction() == 999999995904
        assert parse_decimal("0.5", TINY).to_fraction() == Fraction(1, 2)

    def test_decimal_output_roundtrips(self, tiny_values):
        for v in tiny_values[::5]:
            if v.is_finite:
                assert parse_decimal(to_decimal(v), TINY) == v or (
                    v.is_zero and parse_decimal(to_decimal(v), TINY).is_zero
                )

    def test_bad_literals_rejected(self):
        for text in ("1.2.3", "1.0e5", "++0", "1.0000000e2^0"):
            with pytest.raises(ValueError):
                parse_literal(text, TINY)


class TestMultiples:
    def test_every_finite_is_multiple_of_fmin(self, tiny_values):
        fmin = TINY.f_min().to_fraction()
        for v in tiny_values:
            if v.is_finite:
                assert v.to_fraction() % fmin == 0

    def test_parity_matches_significand(self, tiny_values):
        for v in tiny_values:
            if v.is_finite and not v.is_zero:
                assert v.is_even == (v.m % 2 == 0)


class TestDoublePrecisionAgreement:
    """Sampled binary64 operations against the host's native doubles."""

    def test_sampled_pairs_match_native_doubles(self):
        import math
        import random

        rng = random.Random(99)

        def rand_val():
            while True:
                bits = rng.getrandbits(64)
                if (bits >> 52) & 0x7FF == 0x7FF and bits & ((1 << 52) - 1):
                    continue  # NaN pattern
                return bits

        import operator

        native_ops = {
            "add": operator.add, "sub": operator.sub,
            "mul": operator.mul, "div": operator.truediv,
        }
        for _ in range(20000):
            xb, yb = rand_val(), rand_val()
            x = from_bits(BINARY64, xb)
            y = from_bits(BINARY64, yb)
            (xf,) = struct.unpack("<d", struct.pack("<Q", xb))
            (yf,) = struct.unpack("<d", struct.pack("<Q", yb))
            for op, fn in (("add", fp_add), ("sub", fp_sub),
                           ("mul", fp_mul), ("div", fp_div)):
                try:
                    native = native_ops[op](xf, yf)
                except ZeroDivisionError:
                    # the host raises where the standard returns an infinity
                    if xf == 0:
                        native = float("nan")
                    else:
                        native = math.inf * math.copysign(1, xf) * math.copysign(1, yf)
                got = fn(x, y)
                if native != native:  # native NaN
                    assert got is None, (op, hex(xb), hex(yb))
                    continue
                assert got is not None, (op, hex(xb), hex(yb))
                (native_bits,) = struct.unpack("<Q", struct.pack("<d", native))
                assert to_bits(got) == native_bits, (op, hex(xb), hex(yb))
