"""Constraint network, fixpoint propagation, and labeling search.

Constraints are ternary arithmetic relations z = x (op) y over named
domains, plus order comparisons.  A worklist of (constraint, projection)
items drives classical projections and, when enabled, the max-ULP operand
bounds to a fixpoint; a depth-first labeling search with first-fail variable
selection and order-midpoint splitting produces witnesses, each re-checked
bit-exactly before it is returned.  Runs are deterministic for a given
insertion order.
"""

from __future__ import annotations

import time
from collections import Counter, deque
from dataclasses import dataclass, field

from . import classic, maxulp
from .interval import FpInterval, count, full, intersect, is_singleton, split, to_text
from .minifloat import FpFormat, FpVal, cmp_num, fp_op, to_literal


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class ArithConstraint:
    """z = x (op) y with op one of add/sub/mul/div; operands are entry names."""

    op: str
    z: str
    x: str
    y: str

    def __str__(self) -> str:
        return f"{self.z} = {self.x} {self.op} {self.y}"


_REL_TEXT = {"lt": "<", "le": "<=", "eq": "=", "ge": ">=", "gt": ">"}


@dataclass(frozen=True)
class CompareConstraint:
    """lhs (rel) rhs; rhs is an entry name or an inline constant value."""

    rel: str
    lhs: str
    rhs: str | FpVal

    def __str__(self) -> str:
        rhs = self.rhs if isinstance(self.rhs, str) else to_literal(self.rhs)
        return f"{self.lhs} {_REL_TEXT[self.rel]} {rhs}"


Constraint = ArithConstraint | CompareConstraint


@dataclass
class Stats:
    fires: Counter = field(default_factory=Counter)
    prunings: Counter = field(default_factory=Counter)
    maxulp_rules: Counter = field(default_factory=Counter)

    def as_dict(self) -> dict:
        return {
            "fires": dict(self.fires),
            "prunings": dict(self.prunings),
            "maxulp_rules": dict(self.maxulp_rules),
        }


@dataclass
class SolveConfig:
    node_limit: int = 10 ** 6
    time_limit: float = 60.0
    use_maxulp: bool = True
    maximize: str | None = None


@dataclass
class SolveResult:
    verdict: str  # SAT | UNSAT | UNKNOWN
    witness: dict[str, FpVal] | None
    residues: list[dict]
    stats: Stats
    nodes: int
    elapsed: float


# Projection work-item tags per constraint kind.
_ARITH_TAGS = ("direct", "ind_x", "ind_y", "maxulp")


class Network:
    """Variables, domains, constraints, and the propagation worklist."""

    def __init__(self, fmt: FpFormat):
        self.fmt = fmt
        self.domains: dict[str, FpInterval] = {}
        self.constants: set[str] = set()
        self.constraints: list[Constraint] = []
        self.stats = Stats()
        self.failed_constraint: str | None = None
        self.trace: list[dict] | None = None
        self._queue: deque[tuple[int, str]] = deque()
        self._queued: set[tuple[int, str]] = set()
        self._watchers: dict[str, list[tuple[int, str]]] = {}

    # Construction ----------------------------------------------------------

    def add_variable(self, name: str, domain: FpInterval | None = None) -> str:
        if name in self.domains:
            raise NetworkError(f"duplicate name {name!r}")
        self.domains[name] = domain if domain is not None else full(self.fmt)
        return name

    def add_constant(self, name: str, value: FpVal) -> str:
        self.add_variable(name, FpInterval(value, value))
        self.constants.add(name)
        return name

    def variable_names(self) -> list[str]:
        return [n for n in self.domains if n not in self.constants]

    def _check_name(self, name: str) -> None:
        if name not in self.domains:
            raise NetworkError(f"unknown name {name!r}")

    def add_constraint(self, c: Constraint) -> int:
        if isinstance(c, ArithConstraint):
            if c.op not in ("add", "sub", "mul", "div"):
                raise NetworkError(f"unknown operation {c.op!r}")
            names = (c.z, c.x, c.y)
        else:
            if c.rel not in _REL_TEXT:
                raise NetworkError(f"unknown relation {c.rel!r}")
            names = (c.lhs,) + ((c.rhs,) if isinstance(c.rhs, str) else ())
        for n in names:
            self._check_name(n)
        ci = len(self.constraints)
        self.constraints.append(c)
        if isinstance(c, ArithConstraint):
            watch = {
                c.z: ("ind_x", "ind_y", "maxulp"),
                c.x: ("direct", "ind_y"),
                c.y: ("direct", "ind_x"),
            }
            merged: dict[str, set[str]] = {}
            for name, tags in watch.items():
                merged.setdefault(name, set()).update(tags)
            for name, tags in merged.items():
                self._watchers.setdefault(name, []).extend(
                    (ci, t) for t in _ARITH_TAGS if t in tags
                )
            for tag in _ARITH_TAGS:
                self._push(ci, tag)
        else:
            for n in names:
                self._watchers.setdefault(n, []).append((ci, "compare"))
            self._push(ci, "compare")
        return ci

    # Worklist --------------------------------------------------------------

    def _push(self, ci: int, tag: str) -> None:
        item = (ci, tag)
        if item not in self._queued:
            self._queued.add(item)
            self._queue.append(item)

    def _touch(self, name: str) -> None:
        for ci, tag in self._watchers.get(name, ()):
            self._push(ci, tag)

    def _narrow(self, name: str, bound: FpInterval | None, kind: str,
                label: str) -> bool:
        """Intersect a domain with a projection bound; False when it empties.

        Intersecting against the current domain here keeps narrowing
        monotone even when one variable plays several roles in a constraint.
        """
        if bound is None:
            self.failed_constraint = label
            return False
        old = self.domains[name]
        new = intersect(old, bound)
        if new is None:
            self.failed_constraint = label
            return False
        if new == old:
            return True
        self.domains[name] = new
        self.stats.prunings[kind] += 1
        if self.trace is not None:
            self.trace.append(
                {
                    "constraint": label,
                    "filter": kind,
                    "variable": name,
                    "before": to_text(old),
                    "after": to_text(new),
                }
            )
        self._touch(name)
        return True

    # Propagation -----------------------------------------------------------

    def propagate(self, use_maxulp: bool = True) -> str:
        """Drain the worklist; returns 'FIXPOINT' or 'FAILED'."""
        while self._queue:
            ci, tag = self._queue.popleft()
            self._queued.discard((ci, tag))
            c = self.constraints[ci]
            label = str(c)
            if isinstance(c, CompareConstraint):
                X = self.domains[c.lhs]
                Y = (
                    self.domains[c.rhs]
                    if isinstance(c.rhs, str)
                    else FpInterval(c.rhs, c.rhs)
                )
                self.stats.fires["compare"] += 1
                res = classic.clip_compare(c.rel, X, Y)
                if res is None:
                    self.failed_constraint = label
                    return self._fail()
                X2, Y2 = res
                if not self._narrow(c.lhs, X2, "compare", label):
                    return self._fail()
                if isinstance(c.rhs, str):
                    if not self._narrow(c.rhs, Y2, "compare", label):
                        return self._fail()
                continue
            Z = self.domains[c.z]
            X = self.domains[c.x]
            Y = self.domains[c.y]
            if tag == "direct":
                self.stats.fires["classical"] += 1
                if not self._narrow(c.z, classic.direct(c.op, X, Y), "classical", label):
                    return self._fail()
            elif tag == "ind_x":
                self.stats.fires["classical"] += 1
                bound = classic.indirect_x(c.op, Z, Y)
                if not self._narrow(c.x, bound, "classical", label):
                    return self._fail()
            elif tag == "ind_y":
                self.stats.fires["classical"] += 1
                bound = classic.indirect_y(c.op, Z, X)
                if not self._narrow(c.y, bound, "classical", label):
                    return self._fail()
            elif tag == "maxulp":
                if not use_maxulp:
                    continue
                out = maxulp.apply_maxulp(c.op, Z, X, Y, self.fmt)
                if out.fired is None:
                    continue
                self.stats.fires["maxulp"] += 1
                self.stats.maxulp_rules[out.fired] += 1
                if not self._narrow(c.x, out.x, "maxulp", label):
                    return self._fail()
                if not self._narrow(c.y, out.y, "maxulp", label):
                    return self._fail()
        return "FIXPOINT"

    def _fail(self) -> str:
        self._queue.clear()
        self._queued.clear()
        return "FAILED"

    def enqueue_all(self) -> None:
        for ci, c in enumerate(self.constraints):
            if isinstance(c, ArithConstraint):
                for tag in _ARITH_TAGS:
                    self._push(ci, tag)
            else:
                self._push(ci, "compare")

    # Witness checking ------------------------------------------------------

    def evaluate_witness(self, witness: dict[str, FpVal]) -> tuple[bool, list[dict]]:
        """Bit-exact re-evaluation of every constraint at a point."""
        ok = True
        residues = []
        for c in self.constraints:
            if isinstance(c, ArithConstraint):
                r = fp_op(c.op, witness[c.x], witness[c.y])
                match = r is not None and r == witness[c.z]
                residues.append(
                    {
                        "constraint": str(c),
                        "computed": "NaN" if r is None else to_literal(r),
                        "stored": to_literal(witness[c.z]),
                        "match": match,
                    }
                )
            else:
                rhs = witness[c.rhs] if isinstance(c.rhs, str) else c.rhs
                d = cmp_num(witness[c.lhs], rhs)
                match = {
                    "lt": d < 0,
                    "le": d <= 0,
                    "eq": d == 0,
                    "ge": d >= 0,
                    "gt": d > 0,
                }[c.rel]
                residues.append(
                    {
                        "constraint": str(c),
                        "computed": to_literal(witness[c.lhs]),
                        "stored": to_literal(rhs),
                        "match": match,
                    }
                )
            ok = ok and match
        return ok, residues

    # Search ----------------------------------------------------------------

    def _select_variable(self, maximize: str | None) -> str | None:
        if maximize is not None and not is_singleton(self.domains[maximize]):
            return maximize
        best = None
        best_count = None
        for name, dom in self.domains.items():
            if name in self.constants or is_singleton(dom):
                continue
            c = count(dom)
            if best_count is None or c < best_count:
                best, best_count = name, c
        return best

    def solve(self, config: SolveConfig | None = None) -> SolveResult:
        """Depth-first labeling over the propagated network.

        The network's domains are restored on return, so repeated solves
        start from the same state.
        """
        config = config or SolveConfig()
        entry_domains = dict(self.domains)
        try:
            return self._search(config)
        finally:
            self.domains = entry_domains

    def _search(self, config: SolveConfig) -> SolveResult:
        t0 = time.perf_counter()
        nodes = 0
        stack: list[tuple[dict[str, FpInterval], str | None]] = [
            (dict(self.domains), None)
        ]
        while stack:
            if nodes >= config.node_limit or time.perf_counter() - t0 > config.time_limit:
                return SolveResult(
                    "UNKNOWN", None, [], self.stats, nodes,
                    time.perf_counter() - t0,
                )
            self.domains, seed = stack.pop()
            nodes += 1
            if seed is None:
                self.enqueue_all()
            else:
                self._touch(seed)
            if self.propagate(use_maxulp=config.use_maxulp) == "FAILED":
                continue
            var = self._select_variable(config.maximize)
            if var is None:
                witness = {name: dom.lb for name, dom in self.domains.items()}
                ok, residues = self.evaluate_witness(witness)
                if not ok:
                    continue
                return SolveResult(
                    "SAT", witness, residues, self.stats, nodes,
                    time.perf_counter() - t0,
                )
            lo_half, hi_half = split(self.domains[var])
            halves = [lo_half, hi_half]
            if config.maximize == var:
                halves.reverse()
            # push the second choice first so the first choice pops first
            for half in reversed(halves):
                child = dict(self.domains)
                child[var] = half
                stack.append((child, var))
        return SolveResult(
            "UNSAT", None, [], self.stats, nodes, time.perf_counter() - t0
        )
