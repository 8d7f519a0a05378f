"""Network construction, propagation to fixpoint, and labeling search."""

import random

import pytest

from fpfilter.engine import (
    ArithConstraint,
    CompareConstraint,
    Network,
    NetworkError,
    SolveConfig,
)
from fpfilter.interval import FpInterval, count, full, singleton
from fpfilter.minifloat import (
    BINARY32,
    TINY,
    FpVal,
    cmp_num,
    fp_add,
    ordinal,
    parse_decimal,
    pred,
)
from fpfilter.oracle import (
    build_network,
    enumerate_solutions,
    op_tables,
    random_system,
)

BIG = parse_decimal("1.0e12", BINARY32)


def _f1() -> Network:
    net = Network(BINARY32)
    net.add_variable("x")
    net.add_variable("z")
    net.add_constant("c", BIG)
    net.add_constraint(ArithConstraint("add", "z", "x", "c"))
    net.add_constraint(CompareConstraint("lt", "x", parse_decimal("10000.0", BINARY32)))
    net.add_constraint(CompareConstraint("gt", "z", "c"))
    return net


def _f2() -> Network:
    # the equality with the constant is carried by z's initial domain,
    # leaving two constraints over two variables and one constant
    net = Network(BINARY32)
    net.add_variable("x")
    net.add_variable("z", singleton(BIG))
    net.add_constant("c", BIG)
    net.add_constraint(ArithConstraint("add", "z", "x", "c"))
    net.add_constraint(CompareConstraint("gt", "x", FpVal.zero(BINARY32)))
    return net


class TestConstruction:
    def test_fresh_variable_gets_full_domain(self):
        net = Network(TINY)
        net.add_variable("x")
        assert net.domains["x"] == full(TINY)

    def test_duplicate_name_rejected(self):
        net = Network(TINY)
        net.add_variable("x")
        with pytest.raises(NetworkError):
            net.add_variable("x")

    def test_dangling_reference_rejected(self):
        net = Network(TINY)
        net.add_variable("z")
        net.add_variable("y")
        with pytest.raises(NetworkError):
            net.add_constraint(ArithConstraint("add", "z", "x", "y"))

    def test_feasible_branch_shape(self):
        net = _f2()
        assert len(net.constraints) == 2
        assert net.variable_names() == ["x", "z"]
        assert net.constants == {"c"}


class TestPropagate:
    def test_infeasible_branch_refuted_at_fixpoint(self):
        net = _f1()
        assert net.propagate() == "FAILED"
        assert net.failed_constraint is not None

    def test_empty_network_is_a_fixpoint(self):
        net = Network(TINY)
        net.add_variable("x")
        before = dict(net.domains)
        assert net.propagate() == "FIXPOINT"
        assert net.domains == before

    def test_fixpoint_contains_all_solutions(self):
        rng = random.Random(5)
        base = op_tables(TINY).base
        for _ in range(60):
            s = random_system(TINY, rng)
            sols = enumerate_solutions(s)
            net = build_network(s)
            status = net.propagate()
            if status == "FAILED":
                assert not any(sols[v] for v in range(s.nvars))
                continue
            for v in range(s.nvars):
                dom = net.domains[f"v{v}"]
                lo = ordinal(dom.lb) + base
                hi = ordinal(dom.ub) + base
                assert all(lo <= o <= hi for o in sols[v])

    def test_domains_only_shrink(self):
        net = _f2()
        before = {n: count(d) for n, d in net.domains.items()}
        net.propagate()
        after = {n: count(d) for n, d in net.domains.items()}
        assert all(after[n] <= before[n] for n in before)


class TestSolve:
    def test_feasible_branch_has_verified_witness(self):
        res = _f2().solve()
        assert res.verdict == "SAT"
        x = res.witness["x"]
        assert cmp_num(x, FpVal.zero(BINARY32)) > 0
        assert fp_add(x, BIG) == BIG
        assert all(r["match"] for r in res.residues)

    def test_one_is_a_valid_witness(self):
        net = _f2()
        ok, residues = net.evaluate_witness(
            {"x": BINARY32.one(), "z": BIG, "c": BIG}
        )
        assert ok

    def test_self_subtraction_never_reaches_one(self):
        net = Network(BINARY32)
        net.add_variable("x", FpInterval(BINARY32.one(), parse_decimal("2.0", BINARY32)))
        net.add_variable("z")
        net.add_constraint(ArithConstraint("sub", "z", "x", "x"))
        net.add_constraint(CompareConstraint("eq", "z", BINARY32.one()))
        assert net.solve().verdict == "UNSAT"

    def test_maximize_finds_the_boundary(self):
        res = _f2().solve(SolveConfig(maximize="x"))
        assert res.verdict == "SAT"
        assert res.witness["x"] == pred(parse_decimal("32768.0", BINARY32))

    def test_budget_exhaustion_is_unknown(self):
        net = Network(TINY)
        net.add_variable("x")
        net.add_variable("y")
        net.add_variable("z", singleton(parse_decimal("3.0", TINY)))
        net.add_constraint(ArithConstraint("mul", "z", "x", "y"))
        res = net.solve(SolveConfig(node_limit=2))
        assert res.verdict == "UNKNOWN"

    def test_verdicts_match_enumeration(self):
        rng = random.Random(6)
        for _ in range(40):
            s = random_system(TINY, rng)
            anysol = any(enumerate_solutions(s))
            res = build_network(s).solve()
            assert res.verdict == ("SAT" if anysol else "UNSAT")

    def test_deterministic_replay(self):
        rng = random.Random(7)
        for _ in range(10):
            s = random_system(TINY, rng)
            first = build_network(s).solve()
            second = build_network(s).solve()
            assert first.verdict == second.verdict
            assert first.witness == second.witness
            assert first.nodes == second.nodes

    def test_resolving_the_same_network_is_stable(self):
        net = _f2()
        first = net.solve(SolveConfig(maximize="x"))
        second = net.solve(SolveConfig(maximize="x"))
        assert first.witness == second.witness
        assert first.nodes == second.nodes


class TestStats:
    def test_filter_attribution_is_exposed(self):
        net = _f2()
        net.solve()
        stats = net.stats.as_dict()
        assert set(stats) == {"fires", "prunings", "maxulp_rules"}
        assert stats["fires"].get("classical", 0) > 0

    def test_trace_records_narrowings(self):
        net = _f1()
        net.trace = []
        net.propagate()
        assert net.trace
        step = net.trace[0]
        assert {"constraint", "filter", "variable", "before", "after"} <= set(step)
