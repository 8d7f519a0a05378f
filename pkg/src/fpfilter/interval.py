"""Floating-point interval domains under the solver's total order.

An interval is a pair of inclusive bounds with lb <= ub in the order
-inf < ... < -0 < +0 < ... < +inf.  [-0, +0] is the two-element domain
{-0, +0}; [+0, -0] is not an interval.  Emptiness is signalled by None,
never by a sentinel interval.
"""

from __future__ import annotations

from dataclasses import dataclass

from .minifloat import (
    FpFormat,
    FpVal,
    cmp_order,
    from_ordinal,
    max_order,
    min_order,
    ordinal,
    parse_value,
    succ,
    to_literal,
)


@dataclass(frozen=True)
class FpInterval:
    lb: FpVal
    ub: FpVal

    def __post_init__(self) -> None:
        if cmp_order(self.lb, self.ub) > 0:
            raise ValueError("interval bounds out of order")

    @property
    def fmt(self) -> FpFormat:
        return self.lb.fmt

    def __repr__(self) -> str:
        return f"FpInterval({to_text(self)})"


def make(lb: FpVal, ub: FpVal) -> FpInterval | None:
    """Validated interval, or None when lb > ub (this rejects [+0, -0])."""
    if cmp_order(lb, ub) > 0:
        return None
    return FpInterval(lb, ub)


def singleton(v: FpVal) -> FpInterval:
    return FpInterval(v, v)


def full(fmt: FpFormat) -> FpInterval:
    return FpInterval(FpVal.inf(fmt, True), FpVal.inf(fmt, False))


def intersect(a: FpInterval, b: FpInterval) -> FpInterval | None:
    return make(max_order(a.lb, b.lb), min_order(a.ub, b.ub))


def hull(a: FpInterval, b: FpInterval) -> FpInterval:
    """Convex union."""
    return FpInterval(min_order(a.lb, b.lb), max_order(a.ub, b.ub))


def contains(a: FpInterval, v: FpVal) -> bool:
    return cmp_order(a.lb, v) <= 0 and cmp_order(v, a.ub) <= 0


def count(a: FpInterval) -> int:
    """Number of format values inside the interval."""
    return ordinal(a.ub) - ordinal(a.lb) + 1


def is_singleton(a: FpInterval) -> bool:
    return a.lb == a.ub


def split(a: FpInterval) -> tuple[FpInterval, FpInterval]:
    """Two disjoint halves around the order-rank midpoint."""
    if is_singleton(a):
        raise ValueError("cannot split a singleton interval")
    m = from_ordinal(a.fmt, (ordinal(a.lb) + ordinal(a.ub)) // 2)
    return FpInterval(a.lb, m), FpInterval(succ(m), a.ub)


def to_text(a: FpInterval) -> str:
    return f"[{to_literal(a.lb)}, {to_literal(a.ub)}]"


def parse_text(text: str, fmt: FpFormat) -> FpInterval:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ValueError(f"bad interval {text!r}")
    lo, sep, hi = t[1:-1].partition(",")
    if not sep:
        raise ValueError(f"bad interval {text!r}")
    iv = make(parse_value(lo, fmt), parse_value(hi, fmt))
    if iv is None:
        raise ValueError(f"empty interval {text!r}")
    return iv
