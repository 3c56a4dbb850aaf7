"""Acceptance gate: one test per required behavior of the engine.

Each test drives a complete scenario or a machine-checked property
battery; the verbose pytest line of each test is its pass/fail record.
"""

from rpn.dsl import parse_net, print_net, state_json
from rpn.equivalence import history_equiv
from rpn.explorer import (
    check_property,
    check_theorem_main,
    check_theorem_second,
    explore,
    find_state,
    generate_net,
)
from rpn.semantics import (
    bt_enabled,
    co_enabled,
    enabled_sets,
    execute,
    initial_state,
    o_enabled,
)
from rpn.session import Session, parse_trace, run_trace

from helpers import ALL_NETS, marking

from test_dsl import bundled_text


def run(name: str, trace: str):
    net, m0 = ALL_NETS[name]()
    return net, m0, execute(net, m0, parse_trace(trace))


### worked scenarios

def test_catalyst_returns_while_bond_stays():
    # catalysis, out of causal order: undoing the bonding transition
    # sends the catalyst home but leaves the a-b bond where it is
    net, m0, state = run("catalysis", "t1,t2,~t1:o")
    assert state.marking == marking(net, u="c", y=("ab", [("a", "b")]))
    assert state.history["t1"] is None
    assert isinstance(state.history["t2"], int)


def test_backtracking_is_last_in_first_out():
    net, m0, state = run("catalysis", "t1,t2")
    assert enabled_sets(net, state)["bt"] == ["t2"]
    net, m0, state = run("catalysis", "t1,t2,~t2:bt,~t1:bt")
    assert state == initial_state(net, m0)  # marking and history, exactly


def test_causal_order_frees_independent_transitions():
    net, m0, state = run("parallel", "t1,t2,t3")
    assert enabled_sets(net, state)["co"] == ["t3"]
    net, m0, state = run("parallel", "t1,t2,t3,~t3:co")
    assert enabled_sets(net, state)["co"] == ["t1", "t2"]
    net, m0, one = run("parallel", "t1,t2,t3,~t3:co,~t1:co,~t2:co")
    net, m0, two = run("parallel", "t1,t2,t3,~t3:co,~t2:co,~t1:co")
    assert one.marking == m0 and two.marking == m0
    assert set(one.history.values()) == {None}
    assert history_equiv(one.history, two.history)


def test_out_of_causal_order_relocates_components():
    # polymer: undo the first bonding inside a larger complex, then the
    # others; split-off pieces land at the maker's out-place or at home
    net, m0, state = run("polymer", "t1,t2,t3,~t1:o")
    assert state.marking == marking(
        net, y=("bc", [("b", "c")]), z=("ad", [("a", "d")])
    )
    net, m0, state = run("polymer", "t1,t2,t3,~t1:o,~t2:o")
    assert state.marking == marking(net, ub="b", uc="c", z=("ad", [("a", "d")]))
    net, m0, state = run("polymer", "t1,t2,t3,~t1:o,~t2:o,~t3:o")
    assert state.marking == m0
    assert set(state.history.values()) == {None}


def test_transaction_compensation_scenario():
    # commit (c) is blocked while the agent token sits in the chain;
    # out-of-causal-order repair frees it, and f goes home at the end
    net, m0, state = run("transaction", "a,f1,f2")
    assert state.marking == marking(
        net,
        u=("iaf", [("i", "a"), ("a", "f"), ("i", "f")]),
        ps="s",
        pc="c",
    )
    assert "c" not in enabled_sets(net, state)["forward"]

    net, m0, state = run("transaction", "a,f1,f2,~a:o,~f1:o")
    assert state.marking == marking(
        net, u=("if", [("i", "f")]), pa="a", ps="s", pc="c"
    )
    assert "c" in enabled_sets(net, state)["forward"]

    net, m0, state = run("transaction", "a,f1,f2,~a:o,~f1:o,c")
    assert state.marking == marking(
        net, z=("icf", [("i", "c"), ("i", "f")]), pa="a", ps="s"
    )

    net, m0, state = run("transaction", "a,f1,f2,~a:o,~f1:o,c,~f2:o")
    assert state.marking == marking(
        net, z=("ic", [("i", "c")]), pa="a", pf="f", ps="s"
    )


### machine-checked properties at scale

BATTERY = (
    ("forward", ("preservation", "prop4", "inclusions")),
    ("bt", ("preservation", "loop", "prop4", "inclusions")),
    ("co", ("preservation", "loop", "prop4", "inclusions")),
    ("o", ("preservation", "inclusions")),
)


def test_property_battery_on_five_hundred_generated_nets():
    for seed in range(500):
        net, m0 = generate_net(seed, max_bases=6, max_transitions=5)
        for mode, props in BATTERY:
            space = explore(net, m0, mode, depth=6)
            for prop in props:
                report = check_property(space, prop)
                assert report.ok, f"seed {seed} mode {mode}: {report}"


def test_trace_equivalence_matches_outcome_equality():
    # all co-mode trace pairs up to length 4: rewriting-search verdict
    # must coincide with (final marking, surviving transitions) equality
    net, m0 = ALL_NETS["parallel"]()
    report = check_theorem_main(net, m0, max_len=4)
    assert report.ok, report.detail
    assert report.checked > 100
    for seed in range(50):
        net, m0 = generate_net(seed, max_bases=6, max_transitions=5)
        report = check_theorem_main(net, m0, max_len=4)
        assert report.ok, f"seed {seed}: {report.detail}"
        assert report.checked > 0


def test_component_equivalence_matches_component_fate():
    # all o-mode trace pairs up to length 4, every shared component of
    # their final markings: per-component trace equivalence must agree
    # with where the component actually ended up
    for name in ("catalysis", "polymer"):
        net, m0 = ALL_NETS[name]()
        report = check_theorem_second(net, m0, max_len=4)
        assert report.ok, f"{name}: {report.detail}"
        assert report.checked > 0


def test_strictness_witnesses_found_by_explorer():
    # a state where t1 is co- but not bt-reversible
    net, m0 = ALL_NETS["parallel"]()
    space = explore(net, m0, "co", depth=6)
    witness = find_state(
        space,
        lambda n, s: co_enabled(n, s, "t1") and not bt_enabled(n, s, "t1"),
    )
    assert witness is not None

    # a state where t1 is o- but not co-reversible
    net, m0 = ALL_NETS["catalysis"]()
    space = explore(net, m0, "o", depth=6)
    witness = find_state(
        space,
        lambda n, s: o_enabled(n, s, "t1") and not co_enabled(n, s, "t1"),
    )
    assert witness is not None


### concrete syntax

def test_bundled_nets_round_trip_through_the_printer():
    for name in sorted(ALL_NETS):
        net, m0 = parse_net(bundled_text(name))
        text = print_net(net, m0)
        assert parse_net(text) == (net, m0)
        assert print_net(*parse_net(text)) == text


def test_state_serialization_is_byte_stable():
    net, m0 = ALL_NETS["catalysis"]()
    once = state_json(net, execute(net, m0, parse_trace("t1,t2")))
    again = state_json(net, execute(net, m0, parse_trace("t1,t2")))
    assert once == again

    session = Session.open(net, m0)
    run_trace(session, "t1,t2")
    assert state_json(net, session.current) == once
