import pytest

from conftest import FIXTURES
from pnverify.dsl import format_marking, parse_net, serialize_net
from pnverify.errors import NetStructureError
from pnverify.net import enabled_set
from pnverify.scenario import (
    CONTEXTS,
    EXPLAIN,
    ROBOT_STATES,
    ScenarioConfig,
    build_scenario,
    idle_witness,
    property_file,
    property_suite,
    run_suite,
    scenario_statespace_census,
)
from pnverify.statespace import explore


def test_default_structure():
    net = build_scenario()
    assert len(net.places) == 9
    assert len(net.transitions) == 14
    assert enabled_set(net, net.initial_marking) == {"error_action", "lose_attention", "leave_attentive"}
    assert format_marking(net.initial_marking, net) == "{normal, attention, 3 counter}"


@pytest.mark.parametrize("budget", [0, -1, True, 2.5])
def test_bad_budget(budget):
    with pytest.raises(NetStructureError):
        ScenarioConfig("attention", budget)


def test_bad_context():
    with pytest.raises(NetStructureError):
        ScenarioConfig("asleep")


def test_suite_shape():
    suite = property_suite()
    assert len(suite) == 13
    assert len({c.name for c in suite}) == 13
    assert all(c.expected for c in suite)


@pytest.mark.parametrize("context", CONTEXTS)
@pytest.mark.parametrize("budget", [1, 2, 3, 4])
def test_suite_holds(context, budget):
    results = run_suite(ScenarioConfig(context, budget))
    failing = [(r.check.name, r.detail) for r in results if not r.passed]
    assert failing == []


def test_verdicts_identical_across_contexts():
    verdicts = {ctx: [r.holds for r in run_suite(ScenarioConfig(ctx))] for ctx in CONTEXTS}
    assert len({tuple(v) for v in verdicts.values()}) == 1


def test_census():
    states, edges = scenario_statespace_census()
    assert states < 100
    # robot state x context x counter split, counted by hand:
    # normal 4 + error_occurred 4 + user_informed 3 + idle 1 = 12 per context
    assert states == 36
    assert edges == 105
    assert scenario_statespace_census(ScenarioConfig("attention", 1))[0] < states
    assert scenario_statespace_census() == (states, edges)


@pytest.mark.parametrize("context", CONTEXTS)
def test_state_invariants(context):
    net = build_scenario(ScenarioConfig(context))
    g = explore(net)
    idx = net.place_index
    for m in g.states:
        assert sum(m[idx(p)] for p in ROBOT_STATES) == 1
        assert sum(m[idx(p)] for p in CONTEXTS) == 1
        assert m[idx("counter")] + m[idx("counter'")] == 3


@pytest.mark.parametrize("context", CONTEXTS)
def test_idle_witness_explains_three_times(context):
    trace = idle_witness(ScenarioConfig(context))
    before = trace[: trace.index("switch_off")]
    assert sum(t in EXPLAIN for t in before) >= 3
    assert before.count("ignore") >= 3
    assert trace[-1] == "switch_off"


def test_fixture_files_match_generator():
    assert (FIXTURES / "scenario.pn").read_text() == serialize_net(build_scenario())
    assert (FIXTURES / "scenario.props").read_text() == property_file()
    assert parse_net((FIXTURES / "scenario.pn").read_text()) == build_scenario()


def test_counter_is_not_read_by_context_changes():
    # context transitions never touch the robot or the counter
    net = build_scenario()
    for t in ("lose_attention", "gain_attention", "leave_attentive", "leave_inattentive", "arrive"):
        assert net.preset(t) | net.postset(t) <= set(CONTEXTS)
