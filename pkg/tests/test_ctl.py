import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from oracles import forward_closure
from pnverify.ctl import (
    AG,
    EF,
    FALSE,
    TRUE,
    Binary,
    Deadlock,
    Enabled,
    Not,
    Tokens,
    Unary,
    Until,
    check,
    check_liveness_query,
    holds_at,
    parse_formula,
)
from pnverify.errors import ParseError, TruncatedError, UnknownNodeError
from pnverify.generators import bounded_random_nets
from pnverify.net import Net, fire
from pnverify.statespace import explore, liveness

ROUND_TRIP = [
    "AG !deadlock",
    "AG (tokens(user_informed) >= 1 -> enabled(act))",
    "EF tokens(p2) = 1",
    "true",
    "!false",
    "tokens(x) < 2 & tokens(y) <= 3 | tokens(z) > 0",
    "tokens(x) = 0 -> tokens(y) = 0 -> deadlock",
    "(tokens(x) = 0 -> tokens(y) = 0) -> deadlock",
    "tokens(a) = 1 & (tokens(b) = 1 | tokens(c) = 1)",
    "!(enabled(a) & enabled(b))",
    "EX AX EG AF enabled(t)",
    "E[tokens(p) >= 1 U deadlock]",
    "A[!enabled(act) U enabled(switch_off)]",
    "AG EF enabled(t) & AG EF enabled(u)",
    "tokens(counter') = 3",
    "  EF\n\ttokens(p)=1 ",
    "((((true))))",
]


def test_parse_examples():
    assert parse_formula("AG !deadlock") == AG(Not(Deadlock()))
    f = parse_formula("AG (tokens(user_informed) >= 1 -> enabled(act))")
    assert f == AG(Binary("->", Tokens("user_informed", ">=", 1), Enabled("act")))
    assert parse_formula("EF tokens(p2) = 1") == EF(Tokens("p2", "=", 1))


def test_precedence():
    assert parse_formula("!tokens(p) = 1") == Not(Tokens("p", "=", 1))
    f = parse_formula("true | false & deadlock -> true")
    assert f == Binary("->", Binary("|", TRUE, Binary("&", FALSE, Deadlock())), TRUE)
    f = parse_formula("EF true & deadlock")
    assert f == Binary("&", Unary("EF", TRUE), Deadlock())
    f = parse_formula("E[true U deadlock]")
    assert isinstance(f, Until) and f.quantifier == "E"


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(str(f)) == f


@pytest.mark.parametrize(
    "text, column",
    [
        ("AG", 3),
        ("tokens(p) == 1", 12),
        ("enabled(3)", 9),
        ("E[true deadlock]", 8),
        ("true &", 7),
        ("(true", 6),
        ("true)", 5),
        ("tokens(p) >= x", 14),
        ("AG $", 4),
        ("foo", 1),
    ],
)
def test_parse_errors(text, column):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert info.value.column == column


def test_unknown_names_at_check_time(fig1):
    g = explore(fig1)
    f = parse_formula("EF tokens(nope) = 1")
    with pytest.raises(UnknownNodeError):
        check(fig1, g, f)


def test_check_scenario(scenario_net):
    g = explore(scenario_net)
    assert check(scenario_net, g, "AG !deadlock").holds
    assert check(scenario_net, g, "AG (enabled(switch_off) -> tokens(counter') = 3)").holds
    v = check(scenario_net, g, "EF tokens(p2) = 1")
    assert v.holds and v.trace_kind == "witness"
    assert v.trace[-1] == "switch_off"


def test_check_fig3b_dead_t4(fig3b):
    g = explore(fig3b)
    v = check(fig3b, g, "EF enabled(t4)")
    assert not v.holds and v.trace is None


def test_liveness_queries(fig3a, fig3b, scenario_net):
    g = explore(scenario_net)
    assert check_liveness_query(scenario_net, g, "act").holds
    assert check_liveness_query(scenario_net, g, "ignore").holds
    gb = explore(fig3b)
    v = check_liveness_query(fig3b, gb, "t1")
    assert not v.holds and v.trace_kind == "counterexample"
    ga = explore(fig3a)
    for t in fig3a.transitions:
        assert check_liveness_query(fig3a, ga, t).holds


def test_liveness_query_equals_classification(fixture_net):
    g = explore(fixture_net)
    report = liveness(g)
    for t in fixture_net.transitions:
        assert check_liveness_query(fixture_net, g, t).holds == (report.classification[t] == "live")


def test_liveness_counterexample_ends_in_deadlock(fig3b):
    g = explore(fig3b)
    v = check(fig3b, g, "AG EF enabled(t4)")
    m = fig3b.initial_marking
    for t in v.trace:
        m = fire(fig3b, m, t)
    assert m in (fig3b.marking(p4=1), fig3b.marking(p6=1))


def test_deadlock_conventions(fig3b):
    g = explore(fig3b)
    p4 = fig3b.marking(p4=1)
    s = g.states.index(p4)
    sat = lambda text: check(fig3b, g, text, labels=True).satisfying  # noqa: E731
    assert s not in sat("EX true")
    assert s in sat("AX false")
    assert s in sat("EG tokens(p4) = 1")
    assert s not in sat("AF tokens(p5) = 1")
    assert s in sat("A[true U tokens(p4) = 1]")


DUALS = [
    ("AG tokens(p1) = 0", "!EF !(tokens(p1) = 0)"),
    ("AF deadlock", "!EG !deadlock"),
    ("AX tokens(p2) >= 1", "!EX !(tokens(p2) >= 1)"),
    ("EF enabled(t1)", "E[true U enabled(t1)]"),
    ("AF enabled(t5)", "A[true U enabled(t5)]"),
    ("A[tokens(p1) = 1 U tokens(p2) = 1]",
     "!(E[!(tokens(p2) = 1) U !(tokens(p1) = 1) & !(tokens(p2) = 1)] | EG !(tokens(p2) = 1))"),
]


@pytest.mark.parametrize("left, right", DUALS)
def test_dualities_on_fixtures(left, right):
    for name in ("fig3a", "fig3b"):
        net = load(name)
        g = explore(net)
        a = check(net, g, left, labels=True).satisfying
        b = check(net, g, right, labels=True).satisfying
        assert a == b, (name, left)


def test_dualities_on_scenario(scenario_net):
    g = explore(scenario_net)
    pairs = [
        ("AG tokens(p2) = 0", "!EF tokens(p2) >= 1"),
        ("AF tokens(p2) = 1", "!EG tokens(p2) = 0"),
        ("AX enabled(act)", "!EX !enabled(act)"),
    ]
    for left, right in pairs:
        assert check(scenario_net, g, left, labels=True).satisfying == check(
            scenario_net, g, right, labels=True
        ).satisfying


def _replay(net, trace):
    m = net.initial_marking
    for t in trace:
        m = fire(net, m, t)
    return m


@pytest.mark.parametrize(
    "text, final",
    [
        ("EF tokens(p6) = 1", "tokens(p6) = 1"),
        ("EX tokens(p2) = 1", "tokens(p2) = 1"),
        ("E[tokens(p6) = 0 U tokens(p5) = 1]", "tokens(p5) = 1"),
    ],
)
def test_witnesses_replay(fig3a, text, final):
    g = explore(fig3a)
    v = check(fig3a, g, text)
    assert v.holds and v.trace_kind == "witness"
    assert holds_at(fig3a, _replay(fig3a, v.trace), parse_formula(final))


def test_eg_witness(fig3a, fig3b):
    # every run of fig3a eventually marks p6
    assert not check(fig3a, explore(fig3a), "EG tokens(p6) = 0").holds
    v = check(fig3b, explore(fig3b), "EG tokens(p3) = 0")
    assert v.holds and v.trace == ("t1", "t3")


@pytest.mark.parametrize(
    "text, final_violates",
    [
        ("AG tokens(p6) = 0", "tokens(p6) = 0"),
        ("AX tokens(p3) = 1", "tokens(p3) = 1"),
        ("AF tokens(p5) = 1", "tokens(p5) = 1"),
        ("A[tokens(p1) = 1 U tokens(p2) = 1]", "tokens(p2) = 1"),
    ],
)
def test_counterexamples_replay(fig3b, text, final_violates):
    g = explore(fig3b)
    v = check(fig3b, g, text)
    assert not v.holds and v.trace_kind == "counterexample"
    assert not holds_at(fig3b, _replay(fig3b, v.trace), parse_formula(final_violates))


def test_truncated_graph():
    net = Net.build({"p": 0}, ["src"], [("src", "p")])
    g = explore(net, limit=10)
    v = check(net, g, "EF tokens(p) = 5")
    assert v.holds and v.trace == ("src",) * 5
    with pytest.raises(TruncatedError):
        check(net, g, "EF tokens(p) = 50")
    with pytest.raises(TruncatedError):
        check(net, g, "AG tokens(p) < 50")
    assert check(net, g, "tokens(p) = 0").holds


# -- brute-force oracle ---------------------------------------------------------


def _atoms(net, rng):
    p = rng.choice(net.places)
    t = rng.choice(net.transitions)
    return [
        Tokens(p, rng.choice(["<", "<=", "=", ">=", ">"]), rng.randint(0, 3)),
        Enabled(t),
        Deadlock(),
    ]


@pytest.mark.parametrize("seed", range(60))
def test_ef_ag_against_closure(seed):
    rng = random.Random(1000 + seed)
    (net,) = bounded_random_nets(seed, 1)
    g = explore(net)
    reach = forward_closure(net, net.initial_marking)
    closures = {m: forward_closure(net, m) for m in reach}
    for atom in _atoms(net, rng):
        ok = lambda m: holds_at(net, m, atom)  # noqa: E731
        assert check(net, g, EF(atom)).holds == any(ok(m) for m in reach)
        assert check(net, g, AG(atom)).holds == all(ok(m) for m in reach)
        assert check(net, g, AG(EF(atom))).holds == all(any(ok(x) for x in closures[m]) for m in reach)
        assert check(net, g, EF(AG(atom))).holds == any(all(ok(x) for x in closures[m]) for m in reach)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_witness_validity_random(seed, atom_seed):
    (net,) = bounded_random_nets(seed, 1, state_limit=100)
    g = explore(net)
    atom = random.Random(atom_seed).choice(_atoms(net, random.Random(atom_seed)))
    v = check(net, g, EF(atom))
    if v.holds:
        assert holds_at(net, _replay(net, v.trace), atom)
    v = check(net, g, AG(atom))
    if not v.holds:
        assert not holds_at(net, _replay(net, v.trace), atom)
