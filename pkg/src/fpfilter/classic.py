"""Classical interval-consistency projections for z = x (op) y constraints.

Addition and subtraction use the textbook direct/indirect bound formulas:
an indirect bound is the exact halfway point between a result bound and its
numeric neighbor, shifted by the opposite operand bound and rounded once at
working precision.  Multiplication and division projections are conservative
and sound by construction: intervals are decomposed into sign-pure atoms
(zeros, infinities, finite ranges), bounds are computed on exact rationals
against the closed rounding pre-image of the result interval, and the real
bounds are rounded onto the format grid in the inward-safe direction (lower
bounds up, upper bounds down).  Every function returns None for an empty
result and never prunes a value that participates in a solution.
"""

from __future__ import annotations

from fractions import Fraction

from .interval import FpInterval, contains, full, hull, intersect, make
from .minifloat import (
    ExactScaled,
    FpFormat,
    FpVal,
    cmp_num,
    err_down,
    err_up,
    fp_op,
    max_order,
    min_order,
    pred_num,
    round_directed,
    round_near_even,
    succ_num,
)

# ---------------------------------------------------------------------------
# Rounding pre-images
# ---------------------------------------------------------------------------

def _overflow_threshold(fmt: FpFormat) -> ExactScaled:
    fmax = fmt.f_max()
    return fmax.to_exact() + err_down(fmax, fmt).half()


def _edge_hi(z: FpVal, fmt: FpFormat) -> ExactScaled | None:
    """Upper edge of the reals rounding to z; None encodes +infinity."""
    if z.is_inf:
        return None if not z.neg else -_overflow_threshold(fmt)
    if z.is_zero and z.neg:
        return ExactScaled(False, 0, 0)
    return z.to_exact() + err_down(z, fmt).half()


def _edge_lo(z: FpVal, fmt: FpFormat) -> ExactScaled | None:
    """Lower edge of the reals rounding to z; None encodes -infinity."""
    if z.is_inf:
        return None if z.neg else _overflow_threshold(fmt)
    if z.is_zero and not z.neg:
        return ExactScaled(False, 0, 0)
    return z.to_exact() - err_up(z, fmt).half()


def _preimage(Z: FpInterval, fmt: FpFormat) -> tuple[Fraction | None, Fraction | None]:
    """Closed rational hull of the reals rounding into Z; None means open end."""
    lo = _edge_lo(Z.lb, fmt)
    hi = _edge_hi(Z.ub, fmt)
    return (
        None if lo is None else lo.to_fraction(),
        None if hi is None else hi.to_fraction(),
    )


def _num_zero_in(Z: FpInterval) -> bool:
    z = FpVal.zero(Z.fmt)
    return cmp_num(Z.lb, z) <= 0 and cmp_num(z, Z.ub) <= 0


def _has_inf(Z: FpInterval, neg: bool) -> bool:
    b = Z.lb if neg else Z.ub
    return b.is_inf and b.neg == neg


# ---------------------------------------------------------------------------
# Direct projections
# ---------------------------------------------------------------------------

def _corner_hull(op: str, xs: tuple[FpVal, FpVal], ys: tuple[FpVal, FpVal]):
    lo = hi = None
    for x in xs:
        for y in ys:
            r = fp_op(op, x, y)
            if r is None:
                continue
            lo = r if lo is None else min_order(lo, r)
            hi = r if hi is None else max_order(hi, r)
    if lo is None:
        return None
    return FpInterval(lo, hi)


def direct_add(X: FpInterval, Y: FpInterval) -> FpInterval | None:
    """Result bounds of x + y; empty only if every corner is NaN."""
    return _corner_hull("add", (X.lb, X.ub), (Y.lb, Y.ub))


def direct_sub(X: FpInterval, Y: FpInterval) -> FpInterval | None:
    return _corner_hull("sub", (X.lb, X.ub), (Y.lb, Y.ub))


# Sign-pure decomposition used by the multiplicative projections.  An atom is
# ('ninf',) | ('pinf',) | ('zero', neg) | ('fin', loVal, hiVal) where a finite
# range excludes zeros and infinities and carries a single sign.

def _atoms(X: FpInterval) -> list[tuple]:
    fmt = X.fmt
    out: list[tuple] = []
    if X.lb.is_inf and X.lb.neg:
        out.append(("ninf",))
    neg = intersect(X, FpInterval(fmt.f_max(neg=True), fmt.f_min(neg=True)))
    if neg is not None:
        out.append(("fin", neg.lb, neg.ub))
    for z in (FpVal.zero(fmt, True), FpVal.zero(fmt, False)):
        if contains(X, z):
            out.append(("zero", z.neg))
    pos = intersect(X, FpInterval(fmt.f_min(), fmt.f_max()))
    if pos is not None:
        out.append(("fin", pos.lb, pos.ub))
    if X.ub.is_inf and not X.ub.neg:
        out.append(("pinf",))
    return out


def _atom_is_neg(atom: tuple) -> bool:
    kind = atom[0]
    if kind == "ninf":
        return True
    if kind == "pinf":
        return False
    if kind == "zero":
        return atom[1]
    return atom[1].neg


def _hull_all(pieces: list[FpInterval | None]) -> FpInterval | None:
    acc = None
    for piece in pieces:
        if piece is None:
            continue
        acc = piece if acc is None else hull(acc, piece)
    return acc


def direct_mul(X: FpInterval, Y: FpInterval) -> FpInterval | None:
    fmt = X.fmt
    pieces: list[FpInterval | None] = []
    for ax in _atoms(X):
        for ay in _atoms(Y):
            kx, ky = ax[0], ay[0]
            if kx == "fin" and ky == "fin":
                pieces.append(_corner_hull("mul", (ax[1], ax[2]), (ay[1], ay[2])))
                continue
            zx, zy = kx == "zero", ky == "zero"
            ix, iy = kx in ("ninf", "pinf"), ky in ("ninf", "pinf")
            if (zx and iy) or (zy and ix):
                continue  # 0 * inf has no value
            neg = _atom_is_neg(ax) != _atom_is_neg(ay)
            v = FpVal.inf(fmt, neg) if ix or iy else FpVal.zero(fmt, neg)
            pieces.append(FpInterval(v, v))
    return _hull_all(pieces)


def direct_div(X: FpInterval, Y: FpInterval) -> FpInterval | None:
    fmt = X.fmt
    pieces: list[FpInterval | None] = []
    for ax in _atoms(X):
        for ay in _atoms(Y):
            kx, ky = ax[0], ay[0]
            if kx == "fin" and ky == "fin":
                pieces.append(_corner_hull("div", (ax[1], ax[2]), (ay[1], ay[2])))
                continue
            zx, zy = kx == "zero", ky == "zero"
            ix, iy = kx in ("ninf", "pinf"), ky in ("ninf", "pinf")
            if (zx and zy) or (ix and iy):
                continue  # 0/0 and inf/inf have no value
            neg = _atom_is_neg(ax) != _atom_is_neg(ay)
            v = FpVal.inf(fmt, neg) if ix or zy else FpVal.zero(fmt, neg)
            pieces.append(FpInterval(v, v))
    return _hull_all(pieces)


_DIRECT = {"add": direct_add, "sub": direct_sub, "mul": direct_mul, "div": direct_div}


def direct(op: str, X: FpInterval, Y: FpInterval) -> FpInterval | None:
    return _DIRECT[op](X, Y)


# ---------------------------------------------------------------------------
# Indirect projections for addition/subtraction
# ---------------------------------------------------------------------------

def _edge_shift(edge: ExactScaled | None, edge_inf_neg: bool, other: FpVal,
                subtract: bool, fmt: FpFormat) -> FpVal:
    """Round(edge +- other).  A None edge is the infinity of the given sign;
    it dominates an infinite ``other`` because an unbounded result interval
    imposes no constraint on that side."""
    if edge is None:
        return FpVal.inf(fmt, edge_inf_neg)
    if other.is_inf:
        return FpVal.inf(fmt, other.neg != subtract)
    res = edge - other.to_exact() if subtract else edge + other.to_exact()
    return round_near_even(res, fmt)


def _other_minus_edge(other: FpVal, edge: ExactScaled | None, edge_inf_neg: bool,
                      fmt: FpFormat) -> FpVal:
    """Round(other - edge), with the same infinity conventions."""
    if edge is None:
        return FpVal.inf(fmt, not edge_inf_neg)
    if other.is_inf:
        return FpVal.inf(fmt, other.neg)
    return round_near_even(other.to_exact() - edge, fmt)


def indirect_add_x(Z: FpInterval, Y: FpInterval) -> FpInterval | None:
    """Values of x compatible with x + y in Z for some y in Y."""
    fmt = Z.fmt
    ub = _edge_shift(_edge_hi(Z.ub, fmt), False, Y.lb, True, fmt)
    lb = _edge_shift(_edge_lo(Z.lb, fmt), True, Y.ub, True, fmt)
    return make(lb, ub)


def indirect_add_y(Z: FpInterval, X: FpInterval) -> FpInterval | None:
    return indirect_add_x(Z, X)


def indirect_sub_x(Z: FpInterval, Y: FpInterval) -> FpInterval | None:
    """Values of x compatible with x - y in Z for some y in Y."""
    fmt = Z.fmt
    ub = _edge_shift(_edge_hi(Z.ub, fmt), False, Y.ub, False, fmt)
    lb = _edge_shift(_edge_lo(Z.lb, fmt), True, Y.lb, False, fmt)
    return make(lb, ub)


def indirect_sub_y(Z: FpInterval, X: FpInterval) -> FpInterval | None:
    """Values of y compatible with x - y in Z for some x in X."""
    fmt = Z.fmt
    ub = _other_minus_edge(X.ub, _edge_lo(Z.lb, fmt), True, fmt)
    lb = _other_minus_edge(X.lb, _edge_hi(Z.ub, fmt), False, fmt)
    return make(lb, ub)


# ---------------------------------------------------------------------------
# Indirect projections for multiplication/division
# ---------------------------------------------------------------------------

def _contains_zero(I: FpInterval) -> bool:
    return contains(I, FpVal.zero(I.fmt, True)) or contains(I, FpVal.zero(I.fmt))


def indirect_mul_x(Z: FpInterval, Y: FpInterval) -> FpInterval | None:
    """Values of x compatible with x * y in Z for some y in Y.

    Whole-interval quotient corners; a partner range touching zero yields no
    refinement, as in customary interval division.
    """
    fmt = Z.fmt
    if _contains_zero(Y):
        return full(fmt)
    plo, phi = _preimage(Z, fmt)
    lo = hi = None
    lo_inf = hi_inf = False
    for p, p_neg in ((plo, True), (phi, False)):
        for yv in (Y.lb, Y.ub):
            if p is None:
                # an unbounded pre-image edge divided by a signed operand
                if p_neg != yv.neg:
                    lo_inf = True
                else:
                    hi_inf = True
                continue
            q = Fraction(0) if yv.is_inf else p / yv.to_fraction()
            lo = q if lo is None or q < lo else lo
            hi = q if hi is None or q > hi else hi
    lb = FpVal.inf(fmt, True) if lo_inf else round_directed(lo, fmt, True)
    ub = FpVal.inf(fmt, False) if hi_inf else round_directed(hi, fmt, False)
    return make(lb, ub)


def indirect_mul_y(Z: FpInterval, X: FpInterval) -> FpInterval | None:
    return indirect_mul_x(Z, X)


def indirect_div_x(Z: FpInterval, Y: FpInterval) -> FpInterval | None:
    """Values of x compatible with x / y in Z for some y in Y.

    Whole-interval product corners; a divisor range reaching an infinity
    yields no refinement.
    """
    fmt = Z.fmt
    if Y.lb.is_inf or Y.ub.is_inf:
        return full(fmt)
    if _contains_zero(Y) and (_has_inf(Z, True) or _has_inf(Z, False)):
        return full(fmt)
    plo, phi = _preimage(Z, fmt)
    ya, yb = Y.lb.to_fraction(), Y.ub.to_fraction()
    pieces: list[FpInterval | None] = []
    if _num_zero_in(Z):
        # zero quotients pair any finite dividend with a huge divisor
        pieces.append(FpInterval(fmt.f_max(neg=True), fmt.f_max()))
    lo = hi = None
    lo_inf = hi_inf = False
    for p, p_neg_inf in ((plo, True), (phi, False)):
        for yv in (ya, yb):
            if p is None:
                if yv == 0:
                    continue  # excluded by the bail-out above
                if (yv > 0) == p_neg_inf:
                    lo_inf = True
                else:
                    hi_inf = True
                continue
            q = p * yv
            lo = q if lo is None or q < lo else lo
            hi = q if hi is None or q > hi else hi
    lb = FpVal.inf(fmt, True) if lo_inf else (
        None if lo is None else round_directed(lo, fmt, True)
    )
    ub = FpVal.inf(fmt, False) if hi_inf else (
        None if hi is None else round_directed(hi, fmt, False)
    )
    if lb is not None and ub is not None:
        pieces.append(make(lb, ub))
    return _hull_all(pieces)


def indirect_div_y(Z: FpInterval, X: FpInterval) -> FpInterval | None:
    """Values of y compatible with x / y in Z for some x in X.

    A dividend range reaching an infinity, or a result range containing a
    zero, yields no refinement.
    """
    fmt = Z.fmt
    if _num_zero_in(Z) or X.lb.is_inf or X.ub.is_inf:
        return full(fmt)
    plo, phi = _preimage(Z, fmt)
    xa, xb = X.lb.to_fraction(), X.ub.to_fraction()
    # Split the pre-image at zero; on each side y = x/q is monotone in both.
    parts: list[tuple[int, Fraction | None, Fraction | None]] = []
    if phi is None or phi > 0:
        c = plo if (plo is not None and plo > 0) else None  # None means 0+
        parts.append((1, c, phi))
    if plo is None or plo < 0:
        d = phi if (phi is not None and phi < 0) else None  # None means 0-
        parts.append((-1, plo, d))
    pieces: list[FpInterval | None] = []
    for side, c, d in parts:
        lo = hi = None
        lo_inf = hi_inf = False
        for xv in (xa, xb):
            for qv, near_zero in ((c, side > 0), (d, side < 0)):
                if qv is None:
                    if near_zero:
                        # q -> 0 from this side: x/q diverges unless x is 0
                        if xv == 0:
                            q = Fraction(0)
                        elif (xv > 0) == (side > 0):
                            hi_inf = True
                            continue
                        else:
                            lo_inf = True
                            continue
                    else:
                        q = Fraction(0)  # q -> +-infinity: quotient limit 0
                else:
                    q = xv / qv
                lo = q if lo is None or q < lo else lo
                hi = q if hi is None or q > hi else hi
        lb = FpVal.inf(fmt, True) if lo_inf else (
            None if lo is None else round_directed(lo, fmt, True)
        )
        ub = FpVal.inf(fmt, False) if hi_inf else (
            None if hi is None else round_directed(hi, fmt, False)
        )
        if lb is None and ub is None:
            continue
        if lb is None:
            lb = ub
        if ub is None:
            ub = lb
        pieces.append(make(lb, ub))
    return _hull_all(pieces)


_INDIRECT_X = {
    "add": indirect_add_x,
    "sub": indirect_sub_x,
    "mul": indirect_mul_x,
    "div": indirect_div_x,
}
_INDIRECT_Y = {
    "add": indirect_add_y,
    "sub": indirect_sub_y,
    "mul": indirect_mul_y,
    "div": indirect_div_y,
}


def indirect_x(op: str, Z: FpInterval, Y: FpInterval) -> FpInterval | None:
    return _INDIRECT_X[op](Z, Y)


def indirect_y(op: str, Z: FpInterval, X: FpInterval) -> FpInterval | None:
    return _INDIRECT_Y[op](Z, X)


# ---------------------------------------------------------------------------
# Comparison clipping
# ---------------------------------------------------------------------------

def _le_bound(c: FpVal) -> FpVal:
    """Weakest upper bound enforcing x <= c numerically."""
    return FpVal.zero(c.fmt, False) if c.is_zero else c


def _ge_bound(c: FpVal) -> FpVal:
    return FpVal.zero(c.fmt, True) if c.is_zero else c


def _lt_bound(c: FpVal) -> FpVal | None:
    """Weakest upper bound enforcing x < c numerically; None if impossible."""
    if c.is_inf and c.neg:
        return None
    return pred_num(c)


def _gt_bound(c: FpVal) -> FpVal | None:
    if c.is_inf and not c.neg:
        return None
    return succ_num(c)


def _clip_upper(X: FpInterval, b: FpVal | None) -> FpInterval | None:
    if b is None:
        return None
    return make(X.lb, min_order(X.ub, b))


def _clip_lower(X: FpInterval, b: FpVal | None) -> FpInterval | None:
    if b is None:
        return None
    return make(max_order(X.lb, b), X.ub)


def clip_compare(rel: str, X: FpInterval, Y: FpInterval
                 ) -> tuple[FpInterval, FpInterval] | None:
    """Refine both sides of a comparison; numeric order, so -0 equals +0."""
    if rel in ("ge", "gt"):
        res = clip_compare({"ge": "le", "gt": "lt"}[rel], Y, X)
        if res is None:
            return None
        Y2, X2 = res
        return X2, Y2
    if rel == "lt":
        X2 = _clip_upper(X, _lt_bound(Y.ub))
        Y2 = _clip_lower(Y, _gt_bound(X.lb))
    elif rel == "le":
        X2 = _clip_upper(X, _le_bound(Y.ub))
        Y2 = _clip_lower(Y, _ge_bound(X.lb))
    elif rel == "eq":
        X2 = _clip_lower(X, _ge_bound(Y.lb))
        if X2 is not None:
            X2 = _clip_upper(X2, _le_bound(Y.ub))
        Y2 = _clip_lower(Y, _ge_bound(X.lb))
        if Y2 is not None:
            Y2 = _clip_upper(Y2, _le_bound(X.ub))
    else:
        raise ValueError(f"unknown relation {rel!r}")
    if X2 is None or Y2 is None:
        return None
    return X2, Y2
