"""Bit-exact software model of binary floating-point values and arithmetic.

Values are (sign, significand, exponent) triples over Python integers, so
every format from tiny test formats (p=6) up to binary64 behaves identically.
All four arithmetic operations compute the exact result as an integer (or an
integer ratio, for division) and round once, to nearest with ties to even.
NaN is never a value: operations whose IEEE result would be NaN return None.

Two successor notions coexist and are both exposed:

* the *order* successor walks the total order
  -inf < -fmax < ... < -0 < +0 < ... < fmax < +inf
  (used for interval bookkeeping, where -0 and +0 are distinct points);
* the *numeric* successor treats -0 and +0 as the single real zero
  (used by all rounding-error and filter math).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class NanSignal(Exception):
    """Raised only by helpers that cannot report NaN out-of-band."""


@dataclass(frozen=True)
class FpFormat:
    """A binary floating-point format: precision and exponent range.

    ``p`` counts significand digits including the hidden bit.  When
    ``unbounded`` is set the exponent range is ignored and the format models
    the idealized set with unbounded exponents (no subnormals, no overflow).
    """

    p: int
    emax: int
    emin: int
    unbounded: bool = False

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError("precision must be at least 2")
        if not self.unbounded and not (self.emin <= 0 <= self.emax):
            raise ValueError("need emin <= 0 <= emax")

    # Derived constants ----------------------------------------------------

    @property
    def fmin_scale(self) -> int:
        """Exponent of the smallest subnormal: f_min = 2**fmin_scale."""
        return self.emin + 1 - self.p

    @property
    def q(self) -> int:
        """The quantum used by the division filter: q = 1 - p + emin + emax."""
        return 1 - self.p + self.emin + self.emax

    def f_min(self, neg: bool = False) -> "FpVal":
        return FpVal._mk(self, 0, neg, 1, self.emin)

    def f_nor_min(self, neg: bool = False) -> "FpVal":
        return FpVal._mk(self, 0, neg, 1 << (self.p - 1), self.emin)

    def f_max(self, neg: bool = False) -> "FpVal":
        return FpVal._mk(self, 0, neg, (1 << self.p) - 1, self.emax)

    def one(self, neg: bool = False) -> "FpVal":
        return FpVal._mk(self, 0, neg, 1 << (self.p - 1), 0)

    def pow2(self, e: int, neg: bool = False) -> "FpVal":
        """The value +-2**e, exact; subnormal form if e < emin."""
        if self.unbounded or e >= self.emin:
            return FpVal._mk(self, 0, neg, 1 << (self.p - 1), e)
        shift = self.emin - e
        if shift >= self.p:
            raise ValueError(f"2**{e} not representable")
        return FpVal._mk(self, 0, neg, 1 << (self.p - 1 - shift), self.emin)

    def unbounded_variant(self) -> "FpFormat":
        return FpFormat(self.p, 0, 0, unbounded=True)

    # Enumeration geometry --------------------------------------------------

    @property
    def finite_count_per_sign(self) -> int:
        """Number of finite values of one sign, the signed zero included."""
        if self.unbounded:
            raise ValueError("unbounded format is not enumerable")
        return (1 << self.p) + (self.emax - self.emin - 1) * (1 << (self.p - 1)) + (
            1 << (self.p - 1)
        )

    @property
    def total_count(self) -> int:
        """All non-NaN values: finites, two zeros, two infinities."""
        return 2 * (self.finite_count_per_sign + 1)


BINARY32 = FpFormat(24, 127, -126)
BINARY64 = FpFormat(53, 1023, -1022)
TINY = FpFormat(6, 3, -2)

_PRESETS = {"binary32": BINARY32, "binary64": BINARY64, "tiny": TINY}

_CUSTOM_RE = re.compile(r"^custom\(\s*(\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def format_by_name(name: str) -> FpFormat:
    """Resolve ``binary32``/``binary64``/``tiny`` or ``custom(p,emax,emin)``."""
    if name in _PRESETS:
        return _PRESETS[name]
    m = _CUSTOM_RE.match(name)
    if m:
        return FpFormat(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    raise ValueError(f"unknown format {name!r}")


_FINITE, _POSINF, _NEGINF = 0, 1, -1


class FpVal:
    """One floating-point datum: +-0, +-inf, or a finite (sign, m, e) triple.

    Finite values satisfy value = (-1)**neg * m * 2**(e + 1 - p) with
    m in [0, 2**p).  Canonical form: m >= 2**(p-1) is a normal at any legal
    exponent; smaller m (subnormals and the two zeros) forces e == emin.
    Equality and hashing are bitwise, so -0 != +0 here; use cmp_num for
    numeric comparison.
    """

    __slots__ = ("fmt", "kind", "neg", "m", "e")

    def __init__(self, fmt: FpFormat, kind: int, neg: bool, m: int, e: int):
        if kind == _FINITE:
            p = fmt.p
            if not 0 <= m < (1 << p):
                raise ValueError("significand out of range")
            if fmt.unbounded:
                if m != 0 and m < (1 << (p - 1)):
                    raise ValueError("unbounded format has no subnormals")
                if m == 0 and e != 0:
                    raise ValueError("zero is stored with exponent 0")
            else:
                if m < (1 << (p - 1)):
                    if e != fmt.emin:
                        raise ValueError("subnormal/zero must sit at emin")
                elif not fmt.emin <= e <= fmt.emax:
                    raise ValueError("exponent out of range")
        object.__setattr__(self, "fmt", fmt)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "neg", bool(neg))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e", e)

    @classmethod
    def _mk(cls, fmt: FpFormat, kind: int, neg: bool, m: int, e: int) -> "FpVal":
        v = object.__new__(cls)
        object.__setattr__(v, "fmt", fmt)
        object.__setattr__(v, "kind", kind)
        object.__setattr__(v, "neg", bool(neg))
        object.__setattr__(v, "m", m)
        object.__setattr__(v, "e", e)
        return v

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("FpVal is immutable")

    # Constructors ----------------------------------------------------------

    @classmethod
    def finite(cls, fmt: FpFormat, neg: bool, m: int, e: int) -> "FpVal":
        return cls(fmt, _FINITE, neg, m, e)

    @classmethod
    def zero(cls, fmt: FpFormat, neg: bool = False) -> "FpVal":
        return cls._mk(fmt, _FINITE, neg, 0, 0 if fmt.unbounded else fmt.emin)

    @classmethod
    def inf(cls, fmt: FpFormat, neg: bool = False) -> "FpVal":
        return cls._mk(fmt, _POSINF if not neg else _NEGINF, neg, 0, 0)

    # Predicates ------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == _FINITE

    @property
    def is_inf(self) -> bool:
        return self.kind != _FINITE

    @property
    def is_zero(self) -> bool:
        return self.kind == _FINITE and self.m == 0

    @property
    def is_subnormal(self) -> bool:
        return self.kind == _FINITE and 0 < self.m < (1 << (self.fmt.p - 1))

    @property
    def is_even(self) -> bool:
        """Parity of the significand's least digit (finite nonzero only)."""
        if not self.is_finite or self.is_zero:
            raise ValueError("parity is defined for finite nonzero values")
        return self.m % 2 == 0

    def exp_normalized(self) -> int:
        """Exponent of the leading significant bit (finite nonzero only)."""
        if not self.is_finite or self.is_zero:
            raise ValueError("normalized exponent needs a finite nonzero value")
        return self.e + self.m.bit_length() - self.fmt.p

    # Value views -----------------------------------------------------------

    def scaled(self) -> tuple[int, int]:
        """Signed integer significand and scale: value = sig * 2**scale."""
        sig = -self.m if self.neg else self.m
        return sig, self.e + 1 - self.fmt.p

    def to_fraction(self) -> Fraction:
        if self.is_inf:
            raise ValueError("infinite value has no rational form")
        sig, sc = self.scaled()
        return Fraction(sig) * Fraction(2) ** sc

    def to_exact(self) -> "ExactScaled":
        if self.is_inf:
            raise ValueError("infinite value has no exact scaled form")
        return ExactScaled(self.neg, self.m, self.e + 1 - self.fmt.p)

    def __neg__(self) -> "FpVal":
        if self.kind != _FINITE:
            return FpVal._mk(self.fmt, -self.kind, not self.neg, 0, 0)
        return FpVal._mk(self.fmt, 0, not self.neg, self.m, self.e)

    def abs(self) -> "FpVal":
        return -self if self.neg else self

    # Identity --------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpVal)
            and self.fmt == other.fmt
            and self.kind == other.kind
            and self.neg == other.neg
            and self.m == other.m
            and self.e == other.e
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.neg, self.m, self.e))

    def __repr__(self) -> str:
        return f"FpVal({to_literal(self)})"


@dataclass(frozen=True)
class ExactScaled:
    """An exact dyadic value: (-1)**neg * mag * 2**exp2, mag >= 0.

    Carrier for exact sums, differences and products before rounding; zero
    is canonicalized to (False, 0, 0).
    """

    neg: bool
    mag: int
    exp2: int

    def __post_init__(self) -> None:
        if self.mag < 0:
            raise ValueError("magnitude must be non-negative")
        if self.mag == 0 and (self.neg or self.exp2 != 0):
            object.__setattr__(self, "neg", False)
            object.__setattr__(self, "exp2", 0)

    def signed(self) -> int:
        return -self.mag if self.neg else self.mag

    def to_fraction(self) -> Fraction:
        return Fraction(self.signed()) * Fraction(2) ** self.exp2

    @classmethod
    def from_signed(cls, sig: int, exp2: int) -> "ExactScaled":
        return cls(sig < 0, abs(sig), exp2)

    def __add__(self, other: "ExactScaled") -> "ExactScaled":
        t = min(self.exp2, other.exp2)
        s = (self.signed() << (self.exp2 - t)) + (other.signed() << (other.exp2 - t))
        return ExactScaled.from_signed(s, t)

    def __sub__(self, other: "ExactScaled") -> "ExactScaled":
        return self + ExactScaled(not other.neg, other.mag, other.exp2)

    def __neg__(self) -> "ExactScaled":
        return ExactScaled(not self.neg, self.mag, self.exp2) if self.mag else self

    def half(self) -> "ExactScaled":
        return ExactScaled(self.neg, self.mag, self.exp2 - 1) if self.mag else self

    def cmp(self, other: "ExactScaled") -> int:
        t = min(self.exp2, other.exp2)
        a = self.signed() << (self.exp2 - t)
        b = other.signed() << (other.exp2 - t)
        return (a > b) - (a < b)


# ---------------------------------------------------------------------------
# Rounding kernel
# ---------------------------------------------------------------------------

def _round_int(fmt: FpFormat, neg: bool, num: int, exp2: int) -> FpVal:
    """Round the positive integer-scaled value num * 2**exp2 to nearest-even."""
    p = fmt.p
    t = num.bit_length() - p + exp2  # grid exponent for a normal result
    if not fmt.unbounded:
        fl = fmt.emin + 1 - p
        if t < fl:
            t = fl
    sh = exp2 - t
    if sh >= 0:
        q = num << sh
        r = 0
    else:
        mask = (1 << -sh) - 1
        q = num >> -sh
        r = num & mask
        if r:
            half = (mask + 1) >> 1
            if r > half or (r == half and q & 1):
                q += 1
    if q == 0:
        return FpVal.zero(fmt, neg)
    if q.bit_length() > p:
        q >>= 1
        t += 1
    if q.bit_length() == p:
        e_res = t + p - 1
        if not fmt.unbounded and e_res > fmt.emax:
            return FpVal.inf(fmt, neg)
        return FpVal._mk(fmt, 0, neg, q, e_res)
    return FpVal._mk(fmt, 0, neg, q, fmt.emin)


def _round_mag(fmt: FpFormat, neg: bool, num: int, den: int, exp2: int,
               mode: str) -> FpVal:
    """Round the positive value (num/den) * 2**exp2 into ``fmt``.

    mode 'ne' is round-to-nearest-ties-to-even; 'floor'/'ceil' round toward
    -inf/+inf respectively (used only by the interval filters).
    """
    p = fmt.p
    # Normalized exponent e with 2**e <= value < 2**(e+1).
    e = num.bit_length() - den.bit_length() + exp2
    k = e - exp2
    if (num >= den << k if k >= 0 else num << -k >= den):
        pass
    else:
        e -= 1
    # Quantization grid: normal spacing at e, floored at the subnormal grid.
    t = e + 1 - p
    if not fmt.unbounded and t < fmt.fmin_scale:
        t = fmt.fmin_scale
    sh = exp2 - t
    if sh >= 0:
        num_eff, den_eff = num << sh, den
    else:
        num_eff, den_eff = num, den << -sh
    q, r = divmod(num_eff, den_eff)
    if r:
        if mode == "ne":
            twice = r << 1
            if twice > den_eff or (twice == den_eff and q & 1):
                q += 1
        elif (mode == "ceil") != neg:
            # Rounding away from zero in magnitude.
            q += 1
    if q == 0:
        return FpVal.zero(fmt, neg)
    if q.bit_length() > p:
        q >>= 1
        t += 1
    if q.bit_length() == p:
        e_res = t + p - 1
        if not fmt.unbounded and e_res > fmt.emax:
            if mode == "ne" or (mode == "ceil") != neg:
                return FpVal.inf(fmt, neg)
            return fmt.f_max(neg)
        return FpVal._mk(fmt, 0, neg, q, e_res)
    # Subnormal result (bounded formats only; t is pinned to the grid floor).
    return FpVal._mk(fmt, 0, neg, q, fmt.emin)


def round_near_even(x: ExactScaled, fmt: FpFormat) -> FpVal:
    """Round an exact dyadic value to nearest, ties to even.

    Exact zero rounds to +0; signed-zero decisions for inexact operations
    belong to the operation layer, not here.
    """
    if x.mag == 0:
        return FpVal.zero(fmt, False)
    return _round_int(fmt, x.neg, x.mag, x.exp2)


def round_ratio(neg: bool, num: int, den: int, exp2: int, fmt: FpFormat) -> FpVal:
    """Round (+-num/den) * 2**exp2 to nearest-even without materializing it."""
    if num == 0:
        return FpVal.zero(fmt, neg)
    if den == 1:
        return _round_int(fmt, neg, num, exp2)
    return _round_mag(fmt, neg, num, den, exp2, "ne")


def round_directed(x: Fraction, fmt: FpFormat, toward_pos: bool) -> FpVal:
    """Round a rational toward +inf (or -inf) onto the format grid.

    Used for interval bounds: toward_pos tightens lower bounds, the other
    direction upper bounds.  A bound at exactly 0 therefore lands on the
    signed zero that keeps both zeros inside the interval.
    """
    if x == 0:
        return FpVal.zero(fmt, neg=toward_pos)
    neg = x < 0
    num, den = abs(x.numerator), x.denominator
    mode = "ceil" if toward_pos else "floor"
    return _round_mag(fmt, neg, num, den, 0, mode)


# ---------------------------------------------------------------------------
# Total order and the two successor notions
# ---------------------------------------------------------------------------

def ordinal(v: FpVal) -> int:
    """Signed rank in the total order; -0 -> -1, +0 -> 0."""
    fmt = v.fmt
    if fmt.unbounded:
        raise ValueError("ordinals need a bounded format")
    if v.kind == _POSINF:
        return fmt.finite_count_per_sign
    if v.kind == _NEGINF:
        return -fmt.finite_count_per_sign - 1
    if v.e == fmt.emin:
        idx = v.m
    else:
        idx = (1 << fmt.p) + (v.e - fmt.emin - 1) * (1 << (fmt.p - 1)) + (
            v.m - (1 << (fmt.p - 1))
        )
    return idx if not v.neg else -idx - 1


def from_ordinal(fmt: FpFormat, o: int) -> FpVal:
    n = fmt.finite_count_per_sign
    if o == n:
        return FpVal.inf(fmt, False)
    if o == -n - 1:
        return FpVal.inf(fmt, True)
    if not -n - 1 < o < n:
        raise ValueError("ordinal out of range")
    neg = o < 0
    idx = o if not neg else -o - 1
    if idx < (1 << fmt.p):
        return FpVal._mk(fmt, 0, neg, idx, fmt.emin)
    idx -= 1 << fmt.p
    half = 1 << (fmt.p - 1)
    e = fmt.emin + 1 + idx // half
    return FpVal._mk(fmt, 0, neg, half + idx % half, e)


def succ(v: FpVal) -> FpVal:
    """Order successor; errors on +inf."""
    if v.kind == _POSINF:
        raise ValueError("+inf has no successor")
    return from_ordinal(v.fmt, ordinal(v) + 1)


def pred(v: FpVal) -> FpVal:
    """Order predecessor; errors on -inf."""
    if v.kind == _NEGINF:
        raise ValueError("-inf has no predecessor")
    return from_ordinal(v.fmt, ordinal(v) - 1)


def succ_num(v: FpVal) -> FpVal:
    """Numeric successor: smallest value numerically greater than v.

    The zero twin is skipped, so succ_num(-0) = succ_num(+0) = f_min while
    succ_num(-f_min) = -0.
    """
    if v.is_zero:
        return v.fmt.f_min()
    return succ(v)


def pred_num(v: FpVal) -> FpVal:
    """Numeric predecessor; pred_num(+0) = pred_num(-0) = -f_min."""
    if v.is_zero:
        return v.fmt.f_min(neg=True)
    return pred(v)


def cmp_num(a: FpVal, b: FpVal) -> int:
    """Three-way numeric comparison; -0 and +0 compare equal."""
    if a.kind == _NEGINF:
        return 0 if b.kind == _NEGINF else -1
    if a.kind == _POSINF:
        return 0 if b.kind == _POSINF else 1
    if b.kind == _NEGINF:
        return 1
    if b.kind == _POSINF:
        return -1
    sa, ta = a.scaled()
    sb, tb = b.scaled()
    t = min(ta, tb)
    x = sa << (ta - t)
    y = sb << (tb - t)
    return (x > y) - (x < y)


def cmp_order(a: FpVal, b: FpVal) -> int:
    c = cmp_num(a, b)
    if c:
        return c
    if a.is_zero and b.is_zero and a.neg != b.neg:
        return -1 if a.neg else 1
    return 0


def min_order(a: FpVal, b: FpVal) -> FpVal:
    return a if cmp_order(a, b) <= 0 else b


def max_order(a: FpVal, b: FpVal) -> FpVal:
    return a if cmp_order(a, b) >= 0 else b


# ---------------------------------------------------------------------------
# Rounding-error widths (the distances to the numeric neighbors)
# ---------------------------------------------------------------------------

def err_down(z: FpVal, fmt: FpFormat) -> ExactScaled:
    """Distance from z up to its numeric successor; f_min at +-0."""
    if z.is_inf:
        raise ValueError("err_down needs a finite value")
    if not z.neg and z.m == (1 << fmt.p) - 1 and z.e == fmt.emax:
        return ExactScaled(False, 1, 1 - fmt.p + fmt.emax)
    if z.is_zero:
        return ExactScaled(False, 1, fmt.fmin_scale)
    return succ_num(z).to_exact() - z.to_exact()


def err_up(z: FpVal, fmt: FpFormat) -> ExactScaled:
    """Distance from z's numeric predecessor up to z; f_min at +-0."""
    if z.is_inf:
        raise ValueError("err_up needs a finite value")
    if z.neg and z.m == (1 << fmt.p) - 1 and z.e == fmt.emax:
        return ExactScaled(False, 1, 1 - fmt.p + fmt.emax)
    if z.is_zero:
        return ExactScaled(False, 1, fmt.fmin_scale)
    return z.to_exact() - pred_num(z).to_exact()


def mid(x: FpVal, y: FpVal) -> ExactScaled:
    """The exact halfway point (x + y) / 2."""
    if x.is_inf or y.is_inf:
        raise ValueError("mid needs finite endpoints")
    return (x.to_exact() + y.to_exact()).half()


# ---------------------------------------------------------------------------
# Arithmetic: exact compute, round once; NaN is reported as None
# ---------------------------------------------------------------------------

def fp_add(x: FpVal, y: FpVal) -> FpVal | None:
    fmt = x.fmt
    if x.kind or y.kind:
        if x.kind and y.kind:
            return x if x.kind == y.kind else None
        return x if x.kind else y
    tx = x.e + 1 - fmt.p
    ty = y.e + 1 - fmt.p
    t = min(tx, ty)
    s = ((-x.m if x.neg else x.m) << (tx - t)) + ((-y.m if y.neg else y.m) << (ty - t))
    if s == 0:
        # Exact zero sum: -0 only when both operands are negative(ly signed).
        return FpVal.zero(fmt, x.neg and y.neg)
    return _round_int(fmt, s < 0, abs(s), t)


def fp_sub(x: FpVal, y: FpVal) -> FpVal | None:
    return fp_add(x, -y)


def fp_mul(x: FpVal, y: FpVal) -> FpVal | None:
    fmt = x.fmt
    neg = x.neg != y.neg
    if x.kind or y.kind:
        if (x.kind and y.is_zero) or (y.kind and x.is_zero):
            return None
        return FpVal.inf(fmt, neg)
    if x.m == 0 or y.m == 0:
        return FpVal.zero(fmt, neg)
    return _round_int(fmt, neg, x.m * y.m, (x.e + 1 - fmt.p) + (y.e + 1 - fmt.p))


def fp_div(x: FpVal, y: FpVal) -> FpVal | None:
    fmt = x.fmt
    neg = x.neg != y.neg
    if x.kind or y.kind:
        if x.kind and y.kind:
            return None
        if x.kind:
            return FpVal.inf(fmt, neg)
        return FpVal.zero(fmt, neg)
    if y.m == 0:
        if x.m == 0:
            return None
        return FpVal.inf(fmt, neg)
    if x.m == 0:
        return FpVal.zero(fmt, neg)
    return _round_mag(fmt, neg, x.m, y.m, (x.e + 1 - fmt.p) - (y.e + 1 - fmt.p), "ne")


_OPS = {"add": fp_add, "sub": fp_sub, "mul": fp_mul, "div": fp_div}


def fp_op(op: str, x: FpVal, y: FpVal) -> FpVal | None:
    return _OPS[op](x, y)


# ---------------------------------------------------------------------------
# Hardware bridge for binary32/binary64 encodings
# ---------------------------------------------------------------------------

_width_cache: dict[FpFormat, int] = {}


def _encoding_width(fmt: FpFormat) -> int:
    w = _width_cache.get(fmt)
    if w is not None:
        return w
    w = (fmt.emax + 1).bit_length()
    if fmt.unbounded or fmt.emax != (1 << (w - 1)) - 1 or fmt.emin != 1 - fmt.emax:
        raise ValueError("format has no IEEE interchange encoding")
    _width_cache[fmt] = w
    return w


def to_bits(v: FpVal) -> int:
    """Encode a non-NaN value in the IEEE interchange bit pattern."""
    fmt = v.fmt
    w = _encoding_width(fmt)
    tbits = fmt.p - 1
    sign = int(v.neg) << (w + tbits)
    if v.is_inf:
        return sign | (((1 << w) - 1) << tbits)
    if v.m < (1 << tbits):
        return sign | v.m  # subnormal or zero: biased exponent field 0
    return sign | ((v.e + fmt.emax) << tbits) | (v.m - (1 << tbits))


def from_bits(fmt: FpFormat, bits: int) -> FpVal:
    """Decode an IEEE interchange bit pattern; NaN patterns are rejected."""
    w = _encoding_width(fmt)
    tbits = fmt.p - 1
    neg = bool(bits >> (w + tbits) & 1)
    ebits = (bits >> tbits) & ((1 << w) - 1)
    m = bits & ((1 << tbits) - 1)
    if ebits == (1 << w) - 1:
        if m:
            raise NanSignal("NaN bit pattern")
        return FpVal.inf(fmt, neg)
    if ebits == 0:
        return FpVal._mk(fmt, 0, neg, m, fmt.emin)
    return FpVal._mk(fmt, 0, neg, m | (1 << tbits), ebits - fmt.emax)


# ---------------------------------------------------------------------------
# Textual literals: sign, binary significand, power-of-two exponent
# ---------------------------------------------------------------------------

_LIT_RE = re.compile(r"^([+-]?)(?:(inf)|0|([01])\.([01]+)e2\^(-?\d+))$")
_DEC_RE = re.compile(r"^([+-]?)(\d+)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$")


def to_literal(v: FpVal) -> str:
    """Bit-exact text form, e.g. ``1.00110e2^5``, ``-0``, ``+inf``."""
    sign = "-" if v.neg else "+"
    if v.is_inf:
        return sign + "inf"
    if v.is_zero:
        return sign + "0"
    p = v.fmt.p
    lead = v.m >> (p - 1)
    frac = format(v.m & ((1 << (p - 1)) - 1), f"0{p - 1}b")
    return f"{sign}{lead}.{frac}e2^{v.e}"


def parse_literal(text: str, fmt: FpFormat) -> FpVal:
    """Parse the bit-exact literal syntax produced by :func:`to_literal`."""
    m = _LIT_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad float literal {text!r}")
    neg = m.group(1) == "-"
    if m.group(2):
        return FpVal.inf(fmt, neg)
    if m.group(3) is None:
        return FpVal.zero(fmt, neg)
    lead = int(m.group(3))
    frac = m.group(4)
    e = int(m.group(5))
    if len(frac) > fmt.p - 1:
        raise ValueError(f"literal {text!r} has more than p-1 fraction digits")
    frac = frac.ljust(fmt.p - 1, "0")
    sig = (lead << (fmt.p - 1)) | int(frac, 2)
    if sig == 0:
        raise ValueError(f"zero must be written as +0 or -0, not {text!r}")
    return FpVal.finite(fmt, neg, sig, e)


def parse_decimal(text: str, fmt: FpFormat) -> FpVal:
    """Convert a decimal constant to the nearest format value (ties to even)."""
    m = _DEC_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad decimal literal {text!r}")
    neg = m.group(1) == "-"
    intpart = m.group(2)
    frac = m.group(3) or ""
    exp10 = int(m.group(4) or 0) - len(frac)
    num = int(intpart + frac) if intpart + frac else 0
    den = 1
    if exp10 >= 0:
        num *= 10 ** exp10
    else:
        den = 10 ** -exp10
    return round_ratio(neg, num, den, 0, fmt)


def parse_value(text: str, fmt: FpFormat) -> FpVal:
    """Parse either literal syntax: bit-exact first, decimal as fallback."""
    t = text.strip()
    if _LIT_RE.match(t):
        return parse_literal(t, fmt)
    return parse_decimal(t, fmt)


def to_decimal(v: FpVal) -> str:
    """Shortest decimal string that round-trips through parse_decimal."""
    if v.is_inf:
        return "-inf" if v.neg else "+inf"
    if v.is_zero:
        return "-0.0" if v.neg else "0.0"
    frac = v.to_fraction()
    for digits in range(1, 40):
        s = _format_sig_digits(frac, digits)
        if parse_decimal(s, v.fmt) == v:
            return s
    raise AssertionError("no round-trip decimal found")  # pragma: no cover


def _format_sig_digits(x: Fraction, digits: int) -> str:
    neg = x < 0
    ax = -x if neg else x
    e10 = 0
    while ax >= 10:
        ax /= 10
        e10 += 1
    while ax < 1:
        ax *= 10
        e10 -= 1
    scaled = ax * 10 ** (digits - 1)
    n = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator - n * scaled.denominator) >= scaled.denominator:
        n += 1
    if n >= 10 ** digits:
        n //= 10
        e10 += 1
    ds = str(n)
    mant = ds[0] + "." + (ds[1:] or "0")
    return f"{'-' if neg else ''}{mant}e{e10}"
