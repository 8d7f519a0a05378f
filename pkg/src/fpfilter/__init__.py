"""Constraint propagation over binary floating-point domains.

A softfloat core models any binary format bit-exactly under
round-to-nearest-even; interval projections (classical and maximum-ULP
operand bounds) narrow variable domains; a worklist engine drives them to a
fixpoint and a labeling search produces verified witnesses.
"""

from .minifloat import (
    BINARY32,
    BINARY64,
    TINY,
    ExactScaled,
    FpFormat,
    FpVal,
    NanSignal,
    cmp_num,
    cmp_order,
    format_by_name,
    fp_add,
    fp_div,
    fp_mul,
    fp_op,
    fp_sub,
    from_bits,
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
from .interval import FpInterval

__all__ = [
    "BINARY32",
    "BINARY64",
    "TINY",
    "ExactScaled",
    "FpFormat",
    "FpInterval",
    "FpVal",
    "NanSignal",
    "cmp_num",
    "cmp_order",
    "format_by_name",
    "fp_add",
    "fp_div",
    "fp_mul",
    "fp_op",
    "fp_sub",
    "from_bits",
    "parse_decimal",
    "parse_literal",
    "parse_value",
    "pred",
    "pred_num",
    "round_near_even",
    "succ",
    "succ_num",
    "to_bits",
    "to_decimal",
    "to_literal",
]
