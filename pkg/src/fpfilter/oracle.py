"""Brute-force ground truth on tiny formats.

Everything here is deliberately dumb: values are enumerated, reals are
Fractions, rounding is a nearest-neighbor scan over the enumeration, and
operand bounds are maxima over all pairs.  The only arithmetic shared with
the production code is the operations under test themselves; the rounding
scan below is an independent reimplementation used to validate them.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

from .minifloat import (
    FpFormat,
    FpVal,
    cmp_num,
    fp_add,
    fp_div,
    fp_mul,
    fp_op,
    from_ordinal,
    ordinal,
)

_MAX_ENUM = 1 << 20


def enumerate_values(fmt: FpFormat) -> list[FpVal]:
    """Every non-NaN value of a bounded format, strictly increasing."""
    if fmt.unbounded:
        raise ValueError("cannot enumerate an unbounded format")
    if fmt.total_count > _MAX_ENUM:
        raise ValueError(f"format too large to enumerate ({fmt.total_count} values)")
    n = fmt.finite_count_per_sign
    return [from_ordinal(fmt, o) for o in range(-n - 1, n + 1)]


def enumerate_finite(fmt: FpFormat) -> list[FpVal]:
    return [v for v in enumerate_values(fmt) if v.is_finite]


def positive_finites(fmt: FpFormat) -> list[FpVal]:
    """Finite values with m > 0 and sign +, ascending."""
    n = fmt.finite_count_per_sign
    return [from_ordinal(fmt, o) for o in range(1, n)]


def unbounded_window(fmt: FpFormat, lo_e: int | None = None,
                     hi_e: int | None = None) -> list[FpVal]:
    """Positive normal values of the unbounded-exponent variant of ``fmt``.

    The default exponent window [emin - p, emax + p] provably contains every
    achiever of the addition operand bounds for targets inside ``fmt``.
    """
    ufmt = fmt.unbounded_variant()
    lo_e = fmt.emin - fmt.p if lo_e is None else lo_e
    hi_e = fmt.emax + fmt.p if hi_e is None else hi_e
    half = 1 << (fmt.p - 1)
    out = []
    for e in range(lo_e, hi_e + 1):
        for m in range(half, 2 * half):
            out.append(FpVal.finite(ufmt, False, m, e))
    return out


# ---------------------------------------------------------------------------
# Independent rounding oracle: nearest-neighbor scan with ties to even
# ---------------------------------------------------------------------------

class RoundScan:
    """Round rationals by scanning the enumerated grid of a bounded format."""

    def __init__(self, fmt: FpFormat):
        self.fmt = fmt
        self.pos = positive_finites(fmt)
        self.fracs = [v.to_fraction() for v in self.pos]
        self.half_fmin = Fraction(1, 2) * Fraction(2) ** fmt.fmin_scale
        fmax = fmt.f_max()
        self.inf_threshold = fmax.to_fraction() + Fraction(2) ** (fmt.emax - fmt.p)

    def __call__(self, x: Fraction) -> FpVal:
        fmt = self.fmt
        if x < 0:
            return -self(-x)
        if x <= self.half_fmin:
            return FpVal.zero(fmt, neg=x < 0)
        if x >= self.inf_threshold:
            return FpVal.inf(fmt, False)
        i = bisect_left(self.fracs, x)
        if i == 0:
            return self.pos[0]
        if i == len(self.fracs):
            return self.pos[-1]
        lo, hi = self.pos[i - 1], self.pos[i]
        dlo = x - self.fracs[i - 1]
        dhi = self.fracs[i] - x
        if dlo < dhi:
            return lo
        if dhi < dlo:
            return hi
        return lo if lo.m % 2 == 0 else hi


# ---------------------------------------------------------------------------
# Brute-force operand bounds
# ---------------------------------------------------------------------------

def _to_bounded(v: FpVal, fmt: FpFormat) -> FpVal | None:
    """Re-express an unbounded-format value in ``fmt``, or None if off-grid."""
    if v.is_inf:
        return FpVal.inf(fmt, v.neg)
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


@dataclass
class _BruteTables:
    add_left_max: dict[FpVal, FpVal] = field(default_factory=dict)
    mul_left_max: dict[FpVal, FpVal] = field(default_factory=dict)
    div_left_max: dict[FpVal, FpVal] = field(default_factory=dict)
    div_right_max: dict[FpVal, FpVal] = field(default_factory=dict)


_table_cache: dict[FpFormat, _BruteTables] = {}


def _brute_tables(fmt: FpFormat) -> _BruteTables:
    tables = _table_cache.get(fmt)
    if tables is not None:
        return tables
    tables = _BruteTables()
    ufmt = fmt.unbounded_variant()

    # Addition: operands range over the idealized unbounded-exponent set,
    # restricted to a finite exponent window that contains all achievers.
    pos = unbounded_window(fmt)
    zeros = [FpVal.zero(ufmt, False), FpVal.zero(ufmt, True)]
    ys = [-v for v in pos] + zeros + pos
    vs = [zeros[0]] + pos  # the left-operand bound lives in the non-negative half
    amax = tables.add_left_max
    for v in vs:
        for y in ys:
            r = fp_add(v, y)
            if r is None:
                continue
            z = _to_bounded(r, fmt)
            if z is None:
                continue
            best = amax.get(z)
            if best is None or cmp_num(v, best) > 0:
                amax[z] = v

    # Multiplication and division: operands range over the full bounded set.
    values = enumerate_values(fmt)
    mmax = tables.mul_left_max
    dmax = tables.div_left_max
    dymax = tables.div_right_max
    for v in values:
        for y in values:
            r = fp_mul(v, y)
            if r is not None:
                best = mmax.get(r)
                if best is None or cmp_num(v, best) > 0:
                    mmax[r] = v
            r = fp_div(v, y)
            if r is not None:
                best = dmax.get(r)
                if best is None or cmp_num(v, best) > 0:
                    dmax[r] = v
                best = dymax.get(r)
                if best is None or cmp_num(y, best) > 0:
                    dymax[r] = y
    _table_cache[fmt] = tables
    return tables


def brute_ulpmax(op: str, z: FpVal, fmt: FpFormat) -> FpVal | None:
    """Greatest left operand that can produce z under ``op``, by brute force.

    For 'add' the operand universe is the non-negative unbounded-exponent
    window; for 'mul' and 'div' it is the whole bounded set.  Returns None
    when no operand achieves z.  At z = +-0 the addition achiever set is
    degenerate (any x pairs with -x), so the definitional zero case is
    returned instead of a window artifact.
    """
    if op == "add" and z.is_zero:
        return FpVal.zero(fmt.unbounded_variant())
    tables = _brute_tables(fmt)
    table = {
        "add": tables.add_left_max,
        "mul": tables.mul_left_max,
        "div": tables.div_left_max,
    }[op]
    return table.get(z)


def brute_div_divisor_max(z: FpVal, fmt: FpFormat) -> FpVal | None:
    """Greatest divisor y with x / y = z for some x, by brute force."""
    return _brute_tables(fmt).div_right_max.get(z)


# ---------------------------------------------------------------------------
# Ordinal-indexed operation tables (fast exhaustive system enumeration)
# ---------------------------------------------------------------------------

NAN_ORD = 1 << 30


class OpTables:
    """Flattened tables mapping operand ordinals to result ordinals.

    Ordinals are shifted to be zero-based; NaN results hold NAN_ORD.
    """

    def __init__(self, fmt: FpFormat):
        self.fmt = fmt
        vals = enumerate_values(fmt)
        self.n = len(vals)
        self.base = fmt.finite_count_per_sign + 1  # ordinal shift
        self.tables: dict[str, list[int]] = {}
        for op in ("add", "sub", "mul", "div"):
            t = [NAN_ORD] * (self.n * self.n)
            for i, x in enumerate(vals):
                row = i * self.n
                for j, y in enumerate(vals):
                    r = fp_op(op, x, y)
                    if r is not None:
                        t[row + j] = ordinal(r) + self.base
            self.tables[op] = t

    def shifted(self, v: FpVal) -> int:
        return ordinal(v) + self.base


_op_tables_cache: dict[FpFormat, OpTables] = {}


def op_tables(fmt: FpFormat) -> OpTables:
    t = _op_tables_cache.get(fmt)
    if t is None:
        t = OpTables(fmt)
        _op_tables_cache[fmt] = t
    return t


def nrank(shifted_ord: int, base: int) -> int:
    """Numeric rank from a shifted ordinal: the two zeros share one rank."""
    o = shifted_ord - base
    return o if o >= 0 else o + 1


# ---------------------------------------------------------------------------
# Seeded random constraint systems with exhaustively enumerable solutions
# ---------------------------------------------------------------------------

@dataclass
class RandomSystem:
    """A generated system in assignment-ordered form.

    Ternary constraints always define the highest-numbered variable from
    lower-numbered ones, so enumerating the free variables determines every
    other variable by evaluation.
    """

    fmt: FpFormat
    nvars: int
    domains: list  # initial FpInterval per variable
    arith: list[tuple[str, int, int, int]]  # (op, z, x, y), z > x, y
    compares: list[tuple[str, int, int | None, object]]  # (rel, lhs, rhs_var, rhs_const)
    free: list[int]


def random_system(fmt: FpFormat, rng, max_vars: int = 4,
                  max_constraints: int = 3, enum_cap: int = 2500) -> RandomSystem:
    from .interval import FpInterval, count
    from .minifloat import from_ordinal

    n_fin = fmt.finite_count_per_sign
    vals = enumerate_values(fmt)

    def rand_interval(max_width: int | None = None):
        lo = rng.randrange(-n_fin - 1, n_fin + 1)
        if max_width is None:
            hi = rng.randrange(lo, n_fin + 1)
        else:
            hi = min(lo + rng.randrange(1, max_width), n_fin)
        return FpInterval(from_ordinal(fmt, lo), from_ordinal(fmt, hi))

    nvars = rng.randint(2, max_vars)
    n_arith = rng.randint(1, min(max_constraints, nvars - 1))
    arith = []
    defined = set()
    for _ in range(n_arith):
        z = rng.randint(1, nvars - 1)
        tries = 0
        while z in defined and tries < 8:
            z = rng.randint(1, nvars - 1)
            tries += 1
        op = rng.choice(["add", "sub", "mul", "div"])
        x = rng.randrange(0, z)
        y = rng.randrange(0, z)
        arith.append((op, z, x, y))
        defined.add(z)
    arith.sort(key=lambda a: (a[1], a[2], a[3]))
    compares = []
    for _ in range(rng.randint(0, max_constraints - len(arith))):
        rel = rng.choice(["lt", "le", "eq", "ge", "gt"])
        lhs = rng.randrange(0, nvars)
        if rng.random() < 0.5:
            rhs_var, rhs_const = rng.randrange(0, nvars), None
        else:
            rhs_var, rhs_const = None, vals[rng.randrange(len(vals))]
        compares.append((rel, lhs, rhs_var, rhs_const))
    free = [v for v in range(nvars) if v not in {a[1] for a in arith}]
    domains = []
    for v in range(nvars):
        if rng.random() < 0.4:
            domains.append(FpInterval(from_ordinal(fmt, -n_fin - 1),
                                      from_ordinal(fmt, n_fin)))
        else:
            domains.append(rand_interval())
    # Cap the product of free-variable domain sizes so enumeration stays fast.
    while free:
        prod = 1
        for v in free:
            prod *= count(domains[v])
        if prod <= enum_cap:
            break
        widest = max(free, key=lambda v: count(domains[v]))
        w = max(2, enum_cap // max(1, prod // count(domains[widest])))
        domains[widest] = rand_interval(max_width=w)
    return RandomSystem(fmt, nvars, domains, arith, compares, free)


def enumerate_solutions(sys_: RandomSystem) -> list[set[int]]:
    """Exhaustive solution projection per variable, as shifted ordinals."""
    fmt = sys_.fmt
    tabs = op_tables(fmt)
    n = tabs.n
    base = tabs.base
    dom_ranges = [
        (ordinal(d.lb) + base, ordinal(d.ub) + base) for d in sys_.domains
    ]
    sols: list[set[int]] = [set() for _ in range(sys_.nvars)]
    free = sys_.free
    ranges = [range(dom_ranges[v][0], dom_ranges[v][1] + 1) for v in free]

    def rec(idx: int, assign: list[int | None]):
        if idx < len(free):
            v = free[idx]
            for o in ranges[idx]:
                assign[v] = o
                rec(idx + 1, assign)
            assign[v] = None
            return
        # evaluate ternaries in ascending-z order
        vals_o = assign[:]
        for op, z, x, y in sys_.arith:
            r = tabs.tables[op][(vals_o[x]) * n + (vals_o[y])]
            if r == NAN_ORD:
                return
            if vals_o[z] is None:
                lo, hi = dom_ranges[z]
                if not lo <= r <= hi:
                    return
                vals_o[z] = r
            elif vals_o[z] != r:
                return
        for rel, lhs, rhs_var, rhs_const in sys_.compares:
            a = nrank(vals_o[lhs], base)
            b = (
                nrank(vals_o[rhs_var], base)
                if rhs_var is not None
                else nrank(tabs.shifted(rhs_const), base)
            )
            ok = {
                "lt": a < b, "le": a <= b, "eq": a == b,
                "ge": a >= b, "gt": a > b,
            }[rel]
            if not ok:
                return
        for v in range(sys_.nvars):
            sols[v].add(vals_o[v])
        return

    rec(0, [None] * sys_.nvars)
    return sols


def build_network(sys_: RandomSystem):
    from .engine import ArithConstraint, CompareConstraint, Network

    net = Network(sys_.fmt)
    for v in range(sys_.nvars):
        net.add_variable(f"v{v}", sys_.domains[v])
    for op, z, x, y in sys_.arith:
        net.add_constraint(ArithConstraint(op, f"v{z}", f"v{x}", f"v{y}"))
    for rel, lhs, rhs_var, rhs_const in sys_.compares:
        rhs = f"v{rhs_var}" if rhs_var is not None else rhs_const
        net.add_constraint(CompareConstraint(rel, f"v{lhs}", rhs))
    return net


# ---------------------------------------------------------------------------
# Property suite: every exhaustive invariant, with counterexample reporting
# ---------------------------------------------------------------------------

@dataclass
class PropertyResult:
    name: str
    instances: int
    failures: int
    counterexample: str | None
    seconds: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class PropertyReport:
    fmt_name: str
    results: list[PropertyResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _prop_order_walk(fmt: FpFormat) -> tuple[int, int, str | None]:
    from .minifloat import pred, succ, to_literal

    vals = enumerate_values(fmt)
    fails, ce, n = 0, None, 0
    for a, b in zip(vals, vals[1:]):
        n += 1
        if succ(a) != b or pred(b) != a:
            fails += 1
            ce = ce or f"succ/pred broken between {to_literal(a)} and {to_literal(b)}"
    return n, fails, ce


def _prop_ops_vs_rational(fmt: FpFormat) -> tuple[int, int, str | None]:
    """All pairs, all four operations, against scan-rounded exact rationals."""
    from .minifloat import fp_op, to_literal

    scan = RoundScan(fmt)
    fin = enumerate_finite(fmt)
    fails, ce, n = 0, None, 0
    for x in fin:
        fx = x.to_fraction()
        for y in fin:
            fy = y.to_fraction()
            for op in ("add", "sub", "mul", "div"):
                if op == "div" and fy == 0:
                    continue
                exact = {
                    "add": fx + fy, "sub": fx - fy,
                    "mul": fx * fy, "div": fy and fx / fy,
                }[op]
                got = fp_op(op, x, y)
                n += 1
                if got.is_zero:
                    # zero signs follow the operation sign rules, not rounding
                    want_nonzero = not scan(exact).is_zero
                    bad = want_nonzero
                    if op in ("add", "sub") and exact == 0:
                        neg = {
                            "add": x.neg and y.neg,
                            "sub": x.neg and not y.neg,
                        }[op]
                        bad = bad or got.neg != neg
                    elif op in ("mul", "div") and not bad:
                        bad = got.neg != (x.neg != y.neg)
                else:
                    bad = got != scan(exact)
                if bad:
                    fails += 1
                    ce = ce or f"{to_literal(x)} {op} {to_literal(y)} -> {to_literal(got)}"
    return n, fails, ce


def _prop_multiple_of_fmin(fmt: FpFormat) -> tuple[int, int, str | None]:
    from fractions import Fraction

    fmin = Fraction(2) ** fmt.fmin_scale
    fails, ce, n = 0, None, 0
    for v in enumerate_finite(fmt):
        n += 1
        if v.to_fraction() % fmin != 0:
            fails += 1
            ce = ce or repr(v)
    return n, fails, ce


def _prop_interval_lattice(fmt: FpFormat) -> tuple[int, int, str | None]:
    from .interval import FpInterval, contains, hull, intersect

    vals = enumerate_values(fmt)
    step = max(1, len(vals) // 40)
    points = vals[::step]
    ivs = [
        FpInterval(points[i], points[j])
        for i in range(len(points))
        for j in range(i, len(points))
    ]
    fails, ce, n = 0, None, 0
    for a in ivs[:: max(1, len(ivs) // 120)]:
        for b in ivs[:: max(1, len(ivs) // 120)]:
            n += 1
            both = intersect(a, b)
            h = hull(a, b)
            for v in points:
                in_a, in_b = contains(a, v), contains(b, v)
                if (in_a and in_b) != (both is not None and contains(both, v)):
                    fails += 1
                    ce = ce or f"intersect wrong at {v!r}"
                if (in_a or in_b) and not contains(h, v):
                    fails += 1
                    ce = ce or f"hull wrong at {v!r}"
    return n, fails, ce


def _prop_split_halves(fmt: FpFormat) -> tuple[int, int, str | None]:
    from .interval import FpInterval, count, split

    vals = enumerate_values(fmt)
    last = len(vals) - 1
    rngs = {(0, last), (min(3, last - 1), min(17, last)),
            (min(100, last - 1), min(101, last)), (min(5, last - 1), last // 2 + 1)}
    fails, ce, n = 0, None, 0
    for i, j in rngs:
        if i >= j:
            continue
        a = FpInterval(vals[i], vals[j])
        left, right = split(a)
        n += 1
        if count(left) + count(right) != count(a) or abs(count(left) - count(right)) > 1:
            fails += 1
            ce = ce or f"split broken on {a!r}"
    return n, fails, ce


def _prop_classic_sound(fmt: FpFormat, trials: int = 250, seed: int = 9
                        ) -> tuple[int, int, str | None]:
    import random

    from . import classic
    from .interval import FpInterval, contains
    from .minifloat import fp_op, to_literal

    vals = enumerate_values(fmt)
    rng = random.Random(seed)
    fails, ce, n = 0, None, 0

    def rand_iv():
        i = rng.randrange(len(vals))
        j = rng.randrange(i, len(vals))
        return FpInterval(vals[i], vals[j])

    for _ in range(trials):
        X, Y, Z = rand_iv(), rand_iv(), rand_iv()
        op = rng.choice(["add", "sub", "mul", "div"])
        xs = [v for v in vals if contains(X, v)]
        ys = [v for v in vals if contains(Y, v)]
        if len(xs) * len(ys) > 25000:
            continue
        n += 1
        D = classic.direct(op, X, Y)
        IX = classic.indirect_x(op, Z, Y)
        IY = classic.indirect_y(op, Z, X)
        for x in xs:
            for y in ys:
                z = fp_op(op, x, y)
                if z is None:
                    continue
                if D is None or not contains(D, z):
                    fails += 1
                    ce = ce or f"direct {op} prunes {to_literal(z)}"
                if contains(Z, z):
                    if IX is None or not contains(IX, x):
                        fails += 1
                        ce = ce or f"indirect_x {op} prunes {to_literal(x)}"
                    if IY is None or not contains(IY, y):
                        fails += 1
                        ce = ce or f"indirect_y {op} prunes {to_literal(y)}"
    return n, fails, ce


def _prop_projections_idempotent(fmt: FpFormat, trials: int = 150, seed: int = 5
                                 ) -> tuple[int, int, str | None]:
    import random

    from . import classic
    from .interval import FpInterval, intersect

    vals = enumerate_values(fmt)
    rng = random.Random(seed)
    fails, ce, n = 0, None, 0
    for _ in range(trials):
        i = rng.randrange(len(vals)); j = rng.randrange(i, len(vals))
        k = rng.randrange(len(vals)); l = rng.randrange(k, len(vals))
        m = rng.randrange(len(vals)); o = rng.randrange(m, len(vals))
        X, Y, Z = FpInterval(vals[i], vals[j]), FpInterval(vals[k], vals[l]), FpInterval(vals[m], vals[o])
        op = rng.choice(["add", "sub", "mul", "div"])
        n += 1
        b1 = classic.direct(op, X, Y)
        z1 = intersect(Z, b1) if b1 is not None else None
        if z1 is not None:
            b2 = classic.direct(op, X, Y)
            z2 = intersect(z1, b2) if b2 is not None else None
            if z2 != z1:
                fails += 1
                ce = ce or f"direct {op} not idempotent"
        bx = classic.indirect_x(op, Z, Y)
        x1 = intersect(X, bx) if bx is not None else None
        if x1 is not None:
            bx2 = classic.indirect_x(op, Z, Y)
            x2 = intersect(x1, bx2) if bx2 is not None else None
            if x2 != x1:
                fails += 1
                ce = ce or f"indirect_x {op} not idempotent"
    return n, fails, ce


def _prop_figure_formulas(fmt: FpFormat) -> tuple[int, int, str | None]:
    """Direct add/sub bounds equal the corner formulas on finite intervals."""
    import random

    from . import classic
    from .interval import FpInterval
    from .minifloat import fp_add, fp_sub

    fin = enumerate_finite(fmt)
    rng = random.Random(3)
    fails, ce, n = 0, None, 0
    for _ in range(400):
        i = rng.randrange(len(fin)); j = rng.randrange(i, len(fin))
        k = rng.randrange(len(fin)); l = rng.randrange(k, len(fin))
        X, Y = FpInterval(fin[i], fin[j]), FpInterval(fin[k], fin[l])
        n += 1
        D = classic.direct_add(X, Y)
        if D.ub != fp_add(X.ub, Y.ub) or D.lb != fp_add(X.lb, Y.lb):
            fails += 1
            ce = ce or f"direct add formula mismatch on {X!r} {Y!r}"
        D = classic.direct_sub(X, Y)
        if D.ub != fp_sub(X.ub, Y.lb) or D.lb != fp_sub(X.lb, Y.ub):
            fails += 1
            ce = ce or f"direct sub formula mismatch on {X!r} {Y!r}"
    return n, fails, ce


def _prop_bounds_attainable_correct(fmt: FpFormat) -> tuple[int, int, str | None]:
    from . import maxulp
    from .minifloat import cmp_num, to_literal

    # The dividend ceiling is exactly attainable when p <= emax + 3.  Past
    # that, a non-power-of-two subnormal target scaled by the largest finite
    # value is itself subnormal, and the closed form overshoots the tightest
    # achiever by one grid step; it must then still be a correct upper bound,
    # which is all the filter relies on.
    div_exact = fmt.p <= fmt.emax + 3
    fails, ce, n = 0, None, 0
    for z in enumerate_finite(fmt):
        if z.is_zero:
            continue
        n += 1
        got = maxulp.ulpmax_add(z, fmt)
        want = brute_ulpmax("add", z, fmt)
        if want is None or (got.kind, got.neg, got.m, got.e) != (
            want.kind, want.neg, want.m, want.e
        ):
            fails += 1
            ce = ce or f"add bound at {to_literal(z)}"
        if maxulp.in_mul_domain(z, fmt):
            n += 1
            if maxulp.ulpmax_mul(z, fmt) != brute_ulpmax("mul", z, fmt):
                fails += 1
                ce = ce or f"mul bound at {to_literal(z)}"
        if maxulp.in_div_domain(z, fmt):
            n += 1
            got = maxulp.ulpmax_div(z, fmt)
            want = brute_ulpmax("div", z, fmt)
            bad = (
                want is None
                or (got != want if div_exact else cmp_num(want, got) > 0)
            )
            if bad:
                fails += 1
                ce = ce or f"div bound at {to_literal(z)}"
    return n, fails, ce


def _prop_mu_maximizes(fmt: FpFormat, mu_fn=None) -> tuple[int, int, str | None]:
    from . import maxulp
    from .interval import FpInterval

    mu_fn = mu_fn or maxulp.mu_add
    pos = positive_finites(fmt)
    uf = [maxulp.ulpmax_add(z, fmt).to_fraction() for z in pos]
    fails, ce, n = 0, None, 0
    for i in range(len(pos)):
        running = uf[i]
        for j in range(i, len(pos)):
            running = max(running, uf[j])
            n += 1
            mu = mu_fn(FpInterval(pos[i], pos[j]), fmt)
            if mu is None or maxulp.ulpmax_add(mu, fmt).to_fraction() < running:
                fails += 1
                ce = ce or (
                    f"interval [{pos[i]!r}, {pos[j]!r}] maximizer misses the max"
                )
                if fails > 3:
                    return n, fails, ce
    return n, fails, ce


def _prop_bounds_monotone(fmt: FpFormat) -> tuple[int, int, str | None]:
    from . import maxulp
    from .minifloat import cmp_num

    pos = positive_finites(fmt)
    fails, ce, n = 0, None, 0
    prev_mul = prev_div = None
    for z in pos:
        if maxulp.in_mul_domain(z, fmt):
            v = maxulp.ulpmax_mul(z, fmt)
            n += 1
            if prev_mul is not None and cmp_num(v, prev_mul) < 0:
                fails += 1
                ce = ce or f"mul bound decreases at {z!r}"
            prev_mul = v
        if maxulp.in_div_domain(z, fmt):
            v = maxulp.ulpmax_div(z, fmt)
            n += 1
            if prev_div is not None and cmp_num(v, prev_div) < 0:
                fails += 1
                ce = ce or f"div bound decreases at {z!r}"
            prev_div = v
    return n, fails, ce


def _prop_mul_div_fmax_identity(fmt: FpFormat) -> tuple[int, int, str | None]:
    from .minifloat import cmp_num, fp_div, fp_mul

    fmax = fmt.f_max()
    one = fmt.one()
    fails, ce, n = 0, None, 0
    for z in enumerate_finite(fmt):
        if cmp_num(z.abs(), one) > 0:
            continue
        n += 1
        r = fp_div(fp_mul(z, fmax), fmax)
        if r != z:
            fails += 1
            ce = ce or f"identity broken at {z!r}"
    return n, fails, ce


def _prop_divisor_ceiling_strict(fmt: FpFormat) -> tuple[int, int, str | None]:
    from . import maxulp
    from .minifloat import cmp_num, succ

    one_plus = succ(fmt.one())
    fails, ce, n = 0, None, 0
    for z in enumerate_finite(fmt):
        az = z.abs()
        if z.is_zero or cmp_num(az, one_plus) <= 0 or cmp_num(az, fmt.f_max()) > 0:
            continue
        w = brute_div_divisor_max(z, fmt)
        if w is None:
            continue
        n += 1
        if not cmp_num(w, maxulp.delta_div_second(z, fmt)) < 0:
            fails += 1
            ce = ce or f"divisor ceiling not strict at {z!r}"
    return n, fails, ce


def _prop_maxulp_sound(fmt: FpFormat, trials: int = 400, seed: int = 21
                       ) -> tuple[int, int, str | None]:
    import random

    from . import maxulp
    from .interval import FpInterval, full
    from .minifloat import ordinal

    vals = enumerate_values(fmt)
    tabs = op_tables(fmt)
    nvals, base = tabs.n, tabs.base
    rng = random.Random(seed)
    fails, ce, n = 0, None, 0
    # bias half the draws into the small-magnitude zone where the
    # multiplicative bounds are applicable
    small = [
        k for k, v in enumerate(vals)
        if v.is_finite and not v.is_zero and maxulp.in_mul_domain(v, fmt)
    ]
    for t in range(trials):
        pool = small if t % 2 == 0 and small else range(len(vals))
        a, b = rng.choice(pool), rng.choice(pool)
        i, j = min(a, b), max(a, b)
        Z = FpInterval(vals[i], vals[j])
        op = rng.choice(["add", "sub", "mul", "div"])
        out = maxulp.apply_maxulp(op, Z, full(fmt), full(fmt), fmt)
        if out.fired is None:
            continue
        n += 1
        lo_z, hi_z = ordinal(Z.lb) + base, ordinal(Z.ub) + base
        if out.empty:
            xr = yr = None
        else:
            xr = (ordinal(out.x.lb) + base, ordinal(out.x.ub) + base)
            yr = (ordinal(out.y.lb) + base, ordinal(out.y.ub) + base)
        table = tabs.tables[op]
        done = False
        for xi in range(nvals):
            row = xi * nvals
            for yi in range(nvals):
                r = table[row + yi]
                if r == NAN_ORD or not lo_z <= r <= hi_z:
                    continue
                if (
                    xr is None
                    or not xr[0] <= xi <= xr[1]
                    or not yr[0] <= yi <= yr[1]
                ):
                    fails += 1
                    ce = ce or f"{op} filter prunes a solution pair for {Z!r}"
                    done = True
                    break
            if done:
                break
    return n, fails, ce


def _prop_mutual_exclusivity(fmt: FpFormat, trials: int = 300, seed: int = 33
                             ) -> tuple[int, int, str | None]:
    """Where the mul operand bound narrows a full domain, the classical
    indirect projection against a zero-containing partner cannot."""
    import random

    from . import classic, maxulp
    from .interval import FpInterval, contains, count, full, intersect
    from .minifloat import FpVal

    vals = enumerate_values(fmt)
    rng = random.Random(seed)
    fails, ce, n = 0, None, 0
    small = [
        k for k, v in enumerate(vals)
        if v.is_finite and not v.is_zero and maxulp.in_mul_domain(v, fmt)
    ]
    for _ in range(trials):
        a, b = rng.choice(small), rng.choice(small)
        i, j = min(a, b), max(a, b)
        Z = FpInterval(vals[i], vals[j])
        k = rng.randrange(len(vals)); l = rng.randrange(k, len(vals))
        Y = FpInterval(vals[k], vals[l])
        if not contains(Y, FpVal.zero(fmt)) and not contains(Y, FpVal.zero(fmt, True)):
            continue
        out = maxulp.apply_maxulp("mul", Z, full(fmt), full(fmt), fmt)
        if out.fired is None or out.empty or count(out.x) >= count(full(fmt)):
            continue
        n += 1
        bound = classic.indirect_mul_x(Z, Y)
        refined = intersect(full(fmt), bound) if bound is not None else None
        if refined is not None and count(refined) < count(full(fmt)):
            fails += 1
            ce = ce or f"classical narrowed against zero-containing {Y!r}"
    return n, fails, ce


def _prop_engine_sound(fmt: FpFormat, systems: int = 150, seed: int = 77
                       ) -> tuple[int, int, str | None]:
    import random

    from .engine import SolveConfig
    from .minifloat import ordinal

    rng = random.Random(seed)
    base = op_tables(fmt).base
    fails, ce, n = 0, None, 0
    for t in range(systems):
        s = random_system(fmt, rng)
        sols = enumerate_solutions(s)
        anysol = any(sols[v] for v in range(s.nvars))
        net = build_network(s)
        st = net.propagate()
        n += 1
        if st == "FAILED":
            if anysol:
                fails += 1
                ce = ce or f"system {t}: propagation refuted a satisfiable system"
                continue
        else:
            for v in range(s.nvars):
                d = net.domains[f"v{v}"]
                lo, hi = ordinal(d.lb) + base, ordinal(d.ub) + base
                if any(not lo <= o <= hi for o in sols[v]):
                    fails += 1
                    ce = ce or f"system {t}: fixpoint pruned a solution of v{v}"
                    break
        res = net.solve(SolveConfig(node_limit=200000, time_limit=30.0))
        if res.verdict == "UNKNOWN":
            continue  # budget exhaustion makes no claim to compare against
        if (res.verdict == "SAT") != anysol:
            fails += 1
            ce = ce or f"system {t}: verdict {res.verdict} vs enumeration {anysol}"
    return n, fails, ce


def _prop_solver_deterministic(fmt: FpFormat) -> tuple[int, int, str | None]:
    import random

    rng = random.Random(123)
    fails, ce, n = 0, None, 0
    for t in range(20):
        s = random_system(fmt, rng)
        runs = []
        for _ in range(2):
            net = build_network(s)
            res = net.solve()
            wit = (
                None
                if res.witness is None
                else tuple(sorted((k, repr(v)) for k, v in res.witness.items()))
            )
            runs.append((res.verdict, wit))
        n += 1
        if runs[0] != runs[1]:
            fails += 1
            ce = ce or f"system {t} not deterministic"
    return n, fails, ce


_SUITE = [
    ("order_walk_matches_enumeration", _prop_order_walk),
    ("arithmetic_matches_rational_rounding", _prop_ops_vs_rational),
    ("finites_are_multiples_of_fmin", _prop_multiple_of_fmin),
    ("interval_lattice_glb_lub", _prop_interval_lattice),
    ("split_halves_exactly", _prop_split_halves),
    ("classical_projections_sound", _prop_classic_sound),
    ("projections_idempotent", _prop_projections_idempotent),
    ("direct_addsub_corner_formulas", _prop_figure_formulas),
    ("operand_bounds_attainable_and_correct", _prop_bounds_attainable_correct),
    ("interval_maximizer_dominates", _prop_mu_maximizes),
    ("operand_bounds_monotone", _prop_bounds_monotone),
    ("mul_div_by_fmax_identity", _prop_mul_div_fmax_identity),
    ("divisor_ceiling_strict", _prop_divisor_ceiling_strict),
    ("maxulp_filter_sound", _prop_maxulp_sound),
    ("maxulp_classical_mutually_exclusive", _prop_mutual_exclusivity),
    ("propagation_preserves_solutions", _prop_engine_sound),
    ("solver_deterministic", _prop_solver_deterministic),
]


def run_property_suite(fmt: FpFormat, names: list[str] | None = None
                       ) -> PropertyReport:
    """Execute the exhaustive invariants on a small bounded format."""
    import time as _time

    if fmt.total_count > _MAX_ENUM:
        raise ValueError("property suite needs an enumerable format")
    results = []
    for name, fn in _SUITE:
        if names is not None and name not in names:
            continue
        t0 = _time.perf_counter()
        n, fails, ce = fn(fmt)
        results.append(
            PropertyResult(name, n, fails, ce, _time.perf_counter() - t0)
        )
    from .minifloat import _PRESETS

    fmt_name = next(
        (nm for nm, preset in _PRESETS.items() if preset == fmt),
        f"custom({fmt.p},{fmt.emax},{fmt.emin})",
    )
    return PropertyReport(fmt_name, results)
