"""Operand bounds from the distribution of floating-point numbers.

For z = x (op) y with the result interval known, the spacing of the value
grid bounds how large an operand can be.  For addition/subtraction the bound
comes from the trailing-zero structure of the result (the alpha/beta pair);
for multiplication the extreme partner is the smallest subnormal, and for
division the largest finite value.  This module implements the closed-form
operand bounds, the interval maximizers, and the dispatch that applies them
to a constraint's intervals.

Applicability is guarded, never assumed: result intervals must be zero-free,
sign-pure and finite where required, and a bound that does not fit the
working format disables the filter instead of erroring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .interval import FpInterval, intersect, make
from .minifloat import (
    FpFormat,
    FpVal,
    cmp_num,
    fp_add,
    fp_div,
    fp_mul,
    pred_num,
    succ,
)


class DomainError(ValueError):
    """The argument lies outside the operand-bound function's domain."""


# ---------------------------------------------------------------------------
# alpha/beta: the addition/subtraction operand ceiling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaBeta:
    """Operand ceilings for |z| = x - y: y <= alpha, x <= beta = alpha + z.

    alpha is the all-ones significand placed so that its grid step matches
    the lowest set bit of z; both values live in the unbounded-exponent
    variant of the working format.  k counts z's trailing zero bits.
    """

    alpha: FpVal
    beta: FpVal
    k: int


def alpha_beta(z: FpVal, fmt: FpFormat) -> AlphaBeta:
    """Construct the operand ceilings from |z|; z must be finite nonzero."""
    if z.is_inf or z.is_zero:
        raise DomainError("alpha/beta need a finite nonzero value")
    ufmt = fmt.unbounded_variant()
    k = (z.m & -z.m).bit_length() - 1  # trailing zeros of the significand
    alpha = FpVal.finite(ufmt, False, (1 << fmt.p) - 1, z.e + k)
    # |z| re-expressed with a normalized significand in the unbounded format
    shift = fmt.p - z.m.bit_length()
    zu = FpVal.finite(ufmt, False, z.m << shift, z.e - shift)
    beta = fp_add(alpha, zu)
    return AlphaBeta(alpha, beta, k)


def ulpmax_add(z: FpVal, fmt: FpFormat) -> FpVal:
    """Greatest left operand of an addition producing z (unbounded range)."""
    ufmt = fmt.unbounded_variant()
    if z.is_inf:
        return FpVal.inf(ufmt, False)
    if z.is_zero:
        return FpVal.zero(ufmt, False)
    ab = alpha_beta(z, fmt)
    return ab.beta if not z.neg else ab.alpha


def ulpmin_add(z: FpVal, fmt: FpFormat) -> FpVal:
    """Least left operand of an addition producing z."""
    return -ulpmax_add(-z, fmt)


# ---------------------------------------------------------------------------
# The interval maximizer for the addition bound
# ---------------------------------------------------------------------------

def mu_add(Z: FpInterval, fmt: FpFormat) -> FpVal | None:
    """Element of Z maximizing ulpmax_add, or None when Z is not sign-pure
    finite nonzero (no useful bound exists in those cases)."""
    lb, ub = Z.lb, Z.ub
    if lb.is_inf or ub.is_inf or lb.is_zero or ub.is_zero or lb.neg != ub.neg:
        return None
    if lb.neg:
        inner = mu_add(FpInterval(-ub, -lb), fmt)
        return None if inner is None else -inner
    if lb == ub:
        return lb
    if lb.e != ub.e:
        return FpVal.finite(fmt, False, 1 << (fmt.p - 1), ub.e)
    # Same stored exponent: keep the shared significand prefix, place one
    # bit at the first position where the bounds differ, zeros below.  The
    # bit is 0 exactly when that prefix-with-zeros is the lower bound itself.
    diff = lb.m ^ ub.m
    pos = diff.bit_length() - 1
    cand0 = ub.m & ~((1 << (pos + 1)) - 1)
    m = cand0 if cand0 == lb.m else cand0 | (1 << pos)
    return FpVal.finite(fmt, False, m, ub.e)


# ---------------------------------------------------------------------------
# Multiplication operand bound
# ---------------------------------------------------------------------------

def in_mul_domain(z: FpVal, fmt: FpFormat) -> bool:
    """|z| / f_min <= f_max, checked exactly."""
    if z.is_inf:
        return False
    # |z| = m * 2**(e+1-p) and f_max * f_min = (2**p - 1) * 2**(emax+emin+2-2p),
    # so the condition is m <= (2**p - 1) * 2**(emax+emin+1-p-e).
    shift = fmt.emax + fmt.emin + 1 - fmt.p - z.e
    ones = (1 << fmt.p) - 1
    if shift >= 0:
        return z.m <= ones << shift
    return z.m << -shift <= ones


def ulpmax_mul(z: FpVal, fmt: FpFormat) -> FpVal:
    """Greatest operand of a multiplication producing z.

    Defined for finite nonzero z with |z|/f_min <= f_max; raises DomainError
    otherwise.  The extreme partner is f_min, so the bound is an exact
    exponent shift, nudged by half for subnormal z where the grid step no
    longer scales with z.
    """
    if z.is_inf or z.is_zero or not in_mul_domain(z, fmt):
        raise DomainError("outside the multiplication bound's domain")
    az = z.abs()
    base = fp_div(az, fmt.f_min())
    if not az.is_subnormal:
        return base
    res = fp_add(base, fmt.pow2(-1))
    if z.m % 2 == 0:
        return res
    return pred_num(res)


def ulpmin_mul(z: FpVal, fmt: FpFormat) -> FpVal:
    return -ulpmax_mul(z, fmt)


# ---------------------------------------------------------------------------
# Division operand bounds
# ---------------------------------------------------------------------------

def in_div_domain(z: FpVal, fmt: FpFormat) -> bool:
    """|z| <= 1, equivalently |z| * f_max does not overflow."""
    return not z.is_inf and cmp_num(z.abs(), fmt.one()) <= 0


def ulpmax_div(z: FpVal, fmt: FpFormat) -> FpVal:
    """Greatest dividend x of x / y = z; domain is |z| <= 1.

    Normal z: |z| * f_max (the partner is y = f_max).  Subnormal z: the
    product is shy by up to a grid quantum 2**q, added back exactly; powers
    of two away from the subnormal threshold overshoot by one step.

    Exactly attainable on formats with p <= emax + 3 (all presets).  On
    narrower exponent ranges the value can exceed the tightest achiever by
    one grid step for deep subnormal z, but stays a correct upper bound.
    """
    if z.is_inf or not in_div_domain(z, fmt):
        raise DomainError("outside the division bound's domain")
    az = z.abs()
    base = fp_mul(az, fmt.f_max())
    if not az.is_zero and not az.is_subnormal:
        return base
    res = fp_add(base, fmt.pow2(fmt.q))
    if az.is_zero:
        return res
    power_of_two = (az.m & (az.m - 1)) == 0
    if not power_of_two or az.exp_normalized() == fmt.emin - 1:
        return res
    return pred_num(res)


def ulpmin_div(z: FpVal, fmt: FpFormat) -> FpVal:
    return -ulpmax_div(z, fmt)


def delta_div_second(z: FpVal, fmt: FpFormat) -> FpVal:
    """Cheap correct ceiling for the divisor y of x / y = z.

    f_max / |z|-- for 1+ < |z| <= f_max, where -- is the numeric predecessor
    applied twice; f_max otherwise.  Total on every non-NaN value.
    """
    one_plus = succ(fmt.one())
    az = z.abs()
    if z.is_inf or cmp_num(az, one_plus) <= 0 or cmp_num(az, fmt.f_max()) > 0:
        return fmt.f_max()
    return fp_div(fmt.f_max(), pred_num(pred_num(az)))


def delta_div_second_low(z: FpVal, fmt: FpFormat) -> FpVal:
    return -delta_div_second(z, fmt)


# ---------------------------------------------------------------------------
# Dispatch: apply the operand bounds to a ternary constraint's intervals
# ---------------------------------------------------------------------------

@dataclass
class MaxUlpOutcome:
    """Result of one dispatch: refined intervals (None means emptied) plus
    the name of the rule that fired, if any."""

    x: FpInterval | None
    y: FpInterval | None
    fired: str | None

    @property
    def empty(self) -> bool:
        return self.x is None or self.y is None


def _unbounded_to(fmt: FpFormat, v: FpVal) -> FpVal | None:
    """Cast an unbounded-format value into fmt; None when out of range."""
    if v.is_inf:
        return None
    if v.is_zero:
        return FpVal.zero(fmt, v.neg)
    if v.e > fmt.emax:
        return None
    if v.e >= fmt.emin:
        return FpVal.finite(fmt, v.neg, v.m, v.e)
    shift = fmt.emin - v.e
    if shift >= fmt.p or v.m & ((1 << shift) - 1):
        return None
    return FpVal.finite(fmt, v.neg, v.m >> shift, fmt.emin)


def _zero_free_sign(Z: FpInterval) -> int:
    """+1 for strictly positive, -1 for strictly negative, 0 otherwise."""
    zero = FpVal.zero(Z.fmt)
    if cmp_num(Z.lb, zero) > 0:
        return 1
    if cmp_num(Z.ub, zero) < 0:
        return -1
    return 0


def _addsub_bounds(Z: FpInterval, fmt: FpFormat) -> tuple[FpVal, FpVal] | None:
    """[ulpmin_add, ulpmax_add] over Z in fmt, or None if inapplicable."""
    sign = _zero_free_sign(Z)
    if sign == 0 or Z.lb.is_inf or Z.ub.is_inf:
        return None
    zeta = mu_add(Z if sign > 0 else FpInterval(-Z.ub, -Z.lb), fmt)
    if zeta is None:
        return None
    hi_u = ulpmax_add(zeta, fmt)
    lo_u = ulpmin_add(zeta, fmt)
    hi = _unbounded_to(fmt, hi_u)
    lo = _unbounded_to(fmt, lo_u)
    if hi is None or lo is None:
        return None  # bound does not fit the working format: skip the filter
    if sign > 0:
        return lo, hi
    return -hi, -lo


def apply_maxulp(op: str, Z: FpInterval, X: FpInterval, Y: FpInterval,
                 fmt: FpFormat) -> MaxUlpOutcome:
    """Refine X and Y from Z per the operand-bound synopsis.

    Returns the incoming intervals unchanged when no rule applies; empties
    are reported through the outcome, never raised.
    """
    if op in ("add", "sub"):
        bounds = _addsub_bounds(Z, fmt)
        if bounds is None:
            return MaxUlpOutcome(X, Y, None)
        lo, hi = bounds
        box = make(lo, hi)
        if box is None:
            return MaxUlpOutcome(None, None, op)
        x2 = intersect(X, box)
        if op == "add":
            y_box = box
        else:
            # y enters subtraction negated: flip the bound interval.
            y_box = make(-hi, -lo)
        y2 = intersect(Y, y_box) if y_box is not None else None
        sign = "+" if _zero_free_sign(Z) > 0 else "-"
        return MaxUlpOutcome(x2, y2, op + sign)
    if op == "mul":
        if _zero_free_sign(Z) == 0:
            return MaxUlpOutcome(X, Y, None)
        m = Z.lb.abs() if cmp_num(Z.lb.abs(), Z.ub.abs()) >= 0 else Z.ub.abs()
        if m.is_inf or not in_mul_domain(m, fmt):
            return MaxUlpOutcome(X, Y, None)
        hi = ulpmax_mul(m, fmt)
        box = make(-hi, hi)
        return MaxUlpOutcome(intersect(X, box), intersect(Y, box), "mul")
    if op == "div":
        if _zero_free_sign(Z) == 0:
            return MaxUlpOutcome(X, Y, None)
        abs_lb, abs_ub = Z.lb.abs(), Z.ub.abs()
        m = abs_lb if cmp_num(abs_lb, abs_ub) >= 0 else abs_ub
        n = abs_ub if cmp_num(abs_lb, abs_ub) >= 0 else abs_lb
        if in_div_domain(m, fmt):
            hi = ulpmax_div(m, fmt)
            x2 = intersect(X, make(-hi, hi))
            y2 = intersect(Y, make(fmt.f_max(neg=True), fmt.f_max()))
            return MaxUlpOutcome(x2, y2, "div1")
        if cmp_num(n, fmt.one()) > 0 and cmp_num(m, fmt.f_max()) <= 0:
            d = delta_div_second(n, fmt)
            y2 = intersect(Y, make(-d, d))
            return MaxUlpOutcome(X, y2, "div2")
        return MaxUlpOutcome(X, Y, None)
    raise ValueError(f"unknown operation {op!r}")
