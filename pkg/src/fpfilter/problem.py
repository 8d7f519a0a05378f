"""Constraint-problem files: parsing, canonical serialization, network build.

A problem file is line-oriented:

    # path conditions for the feasible branch
    format binary32
    var x
    var z in [-inf, +inf]
    const c = 1.0e12
    z = x add c
    x > 0.0
    z = c

Ternary constraints are in three-address form ``result = operand op
operand`` with named operands; comparisons accept a name or a constant
(decimal or bit-exact literal) on the right.  Decimal constants round to
the declared format under round-to-nearest-even.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .engine import ArithConstraint, CompareConstraint, Network
from .interval import FpInterval, full, parse_text as parse_interval, to_text
from .minifloat import FpFormat, FpVal, format_by_name, parse_value, to_literal

_OPS = ("add", "sub", "mul", "div")
_RELS = {"<": "lt", "<=": "le", "=": "eq", "==": "eq", ">=": "ge", ">": "gt"}
_REL_OUT = {"lt": "<", "le": "<=", "eq": "=", "ge": ">=", "gt": ">"}
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RESERVED = {"format", "var", "const", "in", "inf", *_OPS}


class ProblemError(ValueError):
    """A parse or semantic error, carrying the 1-based source line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class ProblemFile:
    fmt_name: str
    fmt: FpFormat
    variables: list[tuple[str, FpInterval | None]] = field(default_factory=list)
    constants: list[tuple[str, FpVal]] = field(default_factory=list)
    constraints: list[ArithConstraint | CompareConstraint] = field(
        default_factory=list
    )


def _check_name(name: str, line_no: int) -> str:
    if not _NAME_RE.match(name) or name in _RESERVED:
        raise ProblemError(line_no, f"bad identifier {name!r}")
    return name


def parse(text: str, force_format: str | None = None) -> ProblemFile:
    """Parse problem text; ``force_format`` overrides the file's format line
    (and allows files that omit it)."""
    pf: ProblemFile | None = None
    overridden = force_format is not None
    if overridden:
        pf = ProblemFile(force_format, format_by_name(force_format))
    names: set[str] = set()
    saw_decl = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "format" and overridden and not saw_decl:
            if len(parts) != 2:
                raise ProblemError(line_no, "expected 'format <name>'")
            continue  # the command line picked the format instead
        saw_decl = True
        if pf is None:
            if len(parts) != 2 or parts[0] != "format":
                raise ProblemError(line_no, "expected a 'format <name>' line first")
            try:
                fmt = format_by_name(parts[1])
            except ValueError as exc:
                raise ProblemError(line_no, str(exc)) from None
            pf = ProblemFile(parts[1], fmt)
            saw_decl = False
            continue
        tokens = line.split()
        if tokens[0] == "var":
            if len(tokens) == 2:
                name = _check_name(tokens[1], line_no)
                dom = None
            elif len(tokens) >= 4 and tokens[2] == "in":
                name = _check_name(tokens[1], line_no)
                try:
                    dom = parse_interval(" ".join(tokens[3:]), pf.fmt)
                except ValueError as exc:
                    raise ProblemError(line_no, str(exc)) from None
            else:
                raise ProblemError(line_no, "expected 'var <name> [in [lo, hi]]'")
            if name in names:
                raise ProblemError(line_no, f"duplicate name {name!r}")
            names.add(name)
            pf.variables.append((name, dom))
        elif tokens[0] == "const":
            if len(tokens) != 4 or tokens[2] != "=":
                raise ProblemError(line_no, "expected 'const <name> = <value>'")
            name = _check_name(tokens[1], line_no)
            if name in names:
                raise ProblemError(line_no, f"duplicate name {name!r}")
            try:
                value = parse_value(tokens[3], pf.fmt)
            except ValueError as exc:
                raise ProblemError(line_no, str(exc)) from None
            names.add(name)
            pf.constants.append((name, value))
        elif len(tokens) == 5 and tokens[1] == "=" and tokens[3] in _OPS:
            z, x, op, y = tokens[0], tokens[2], tokens[3], tokens[4]
            for n in (z, x, y):
                if n not in names:
                    raise ProblemError(line_no, f"unknown identifier {n!r}")
            pf.constraints.append(ArithConstraint(op, z, x, y))
        elif len(tokens) == 3 and tokens[1] in _RELS:
            lhs, rel, rhs = tokens[0], _RELS[tokens[1]], tokens[2]
            if lhs not in names:
                raise ProblemError(line_no, f"unknown identifier {lhs!r}")
            rhs_val: str | FpVal
            if rhs in names:
                rhs_val = rhs
            else:
                try:
                    rhs_val = parse_value(rhs, pf.fmt)
                except ValueError:
                    raise ProblemError(
                        line_no, f"unknown identifier or bad constant {rhs!r}"
                    ) from None
            pf.constraints.append(CompareConstraint(rel, lhs, rhs_val))
        else:
            raise ProblemError(line_no, f"cannot parse {line!r}")
    if pf is None:
        # an empty file is a valid, empty problem in the default format
        pf = ProblemFile("binary32", format_by_name("binary32"))
    return pf


def serialize(pf: ProblemFile) -> str:
    """Canonical text form; a fixpoint of parse followed by serialize."""
    out = [f"format {pf.fmt_name}"]
    for name, dom in pf.variables:
        if dom is None or dom == full(pf.fmt):
            out.append(f"var {name}")
        else:
            out.append(f"var {name} in {to_text(dom)}")
    for name, value in pf.constants:
        out.append(f"const {name} = {to_literal(value)}")
    for c in pf.constraints:
        if isinstance(c, ArithConstraint):
            out.append(f"{c.z} = {c.x} {c.op} {c.y}")
        else:
            rhs = c.rhs if isinstance(c.rhs, str) else to_literal(c.rhs)
            out.append(f"{c.lhs} {_REL_OUT[c.rel]} {rhs}")
    return "\n".join(out) + "\n"


def build_network(pf: ProblemFile) -> Network:
    net = Network(pf.fmt)
    for name, dom in pf.variables:
        net.add_variable(name, dom)
    for name, value in pf.constants:
        net.add_constant(name, value)
    for c in pf.constraints:
        net.add_constraint(c)
    return net
