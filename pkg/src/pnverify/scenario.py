"""Error-explanation scenario: a robot fails, explains the error in a modality
chosen by the user's context, and shuts down after too many ignored
explanations.

Robot states are ``normal``, ``error_occurred``, ``user_informed`` and ``p2``
(idle, after shutdown). Exactly one of the context places ``attention``,
``no_attention`` and ``not_present`` is marked; it selects the explanation
transition through a read arc:

=================  ========================
context            explanation transition
=================  ========================
``attention``      ``explain_speech_light``
``no_attention``   ``explain_speech_sound``
``not_present``    ``explain_speech``
=================  ========================

Each explanation moves one token from ``counter`` to ``counter'``. Once the
budget is used up, ``switch_off`` is the only way forward for the robot;
it returns the budget to ``counter``. ``reset`` drains ``counter'`` back
while the robot is in ``normal`` so each error cycle starts with a full
budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ctl import Verdict, check, parse_formula
from .dsl import format_property_file
from .errors import NetStructureError
from .net import Net
from .statespace import ReachabilityGraph, explore, liveness, place_bounds, reachable
from .structural import InvariantVector, check_p_invariant, p_invariants

CONTEXTS = ("attention", "no_attention", "not_present")
MODALITY = {
    "attention": "explain_speech_light",
    "no_attention": "explain_speech_sound",
    "not_present": "explain_speech",
}
EXPLAIN = ("explain_speech", "explain_speech_light", "explain_speech_sound")
ROBOT_STATES = ("normal", "error_occurred", "user_informed", "p2")


@dataclass(frozen=True)
class ScenarioConfig:
    initial_context: str = "attention"
    explanation_budget: int = 3

    def __post_init__(self):
        if self.initial_context not in CONTEXTS:
            raise NetStructureError(
                f"initial context must be one of {', '.join(CONTEXTS)}, got {self.initial_context!r}"
            )
        b = self.explanation_budget
        if not isinstance(b, int) or isinstance(b, bool) or b < 1:
            raise NetStructureError(f"explanation budget must be a positive integer, got {b!r}")


def build_scenario(cfg: ScenarioConfig = ScenarioConfig()) -> Net:
    b = cfg.explanation_budget
    places = {
        "normal": 1,
        "error_occurred": 0,
        "user_informed": 0,
        "p2": 0,
        "attention": 0,
        "no_attention": 0,
        "not_present": 0,
        "counter": b,
        "counter'": 0,
    }
    places[cfg.initial_context] = 1
    transitions = [
        "error_action",
        "explain_speech",
        "explain_speech_light",
        "explain_speech_sound",
        "act",
        "ignore",
        "switch_off",
        "restart",
        "reset",
        "lose_attention",
        "gain_attention",
        "leave_attentive",
        "leave_inattentive",
        "arrive",
    ]
    arcs = [
        ("normal", "error_action"),
        ("error_action", "error_occurred"),
        ("act", "normal"),
        ("user_informed", "act"),
        ("user_informed", "ignore"),
        ("ignore", "error_occurred"),
        ("error_occurred", "switch_off"),
        ("counter'", "switch_off", b),
        ("switch_off", "p2"),
        ("switch_off", "counter", b),
        ("p2", "restart"),
        ("restart", "normal"),
        ("counter'", "reset"),
        ("reset", "counter"),
        ("attention", "lose_attention"),
        ("lose_attention", "no_attention"),
        ("no_attention", "gain_attention"),
        ("gain_attention", "attention"),
        ("attention", "leave_attentive"),
        ("leave_attentive", "not_present"),
        ("no_attention", "leave_inattentive"),
        ("leave_inattentive", "not_present"),
        ("not_present", "arrive"),
        ("arrive", "no_attention"),
    ]
    reads = [("counter", "error_action", b), ("normal", "reset")]
    for context, explain in MODALITY.items():
        arcs += [
            ("error_occurred", explain),
            ("counter", explain),
            (explain, "user_informed"),
            (explain, "counter'"),
        ]
        reads.append((context, explain))
    return Net.build(places, transitions, arcs, reads, name="robot_explanation")


# -- property suite -------------------------------------------------------------


@dataclass(frozen=True)
class PropertyCheck:
    """One named claim about the scenario.

    ``kind`` is ``"ctl"`` (``formula`` is checked directly), ``"bound"``,
    ``"liveness"`` or ``"p_invariant"`` (structural/graph checks, see
    ``run_check``). ``formula`` is always a CTL rendering of the claim so the
    whole suite can be shipped as a property file.
    """

    name: str
    description: str
    kind: str
    formula: str
    expected: bool = True
    params: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CheckResult:
    check: PropertyCheck
    holds: bool
    trace: tuple[str, ...] | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.holds == self.check.expected


def _conj(parts):
    return " & ".join(f"({p})" if len(parts) > 1 else p for p in parts)


def _exactly_one(places):
    options = []
    for p in places:
        options.append(" & ".join(f"tokens({q}) = {int(q == p)}" for q in places))
    return " | ".join(f"({o})" for o in options)


def _split(b):
    return " | ".join(f"(tokens(counter) = {b - k} & tokens(counter') = {k})" for k in range(b + 1))


def property_suite(cfg: ScenarioConfig = ScenarioConfig()) -> list[PropertyCheck]:
    b = cfg.explanation_budget
    pairs = [(EXPLAIN[i], EXPLAIN[j]) for i in range(3) for j in range(i + 1, 3)]
    explain_off = " & ".join(f"!enabled({t})" for t in EXPLAIN)
    return [
        PropertyCheck(
            "deadlock_free",
            "every reachable marking enables some transition",
            "ctl",
            "AG !deadlock",
        ),
        PropertyCheck("idle_reachable", "the idle (shutdown) state is reachable", "ctl", "EF tokens(p2) = 1"),
        PropertyCheck(
            "restartable",
            "from the idle state the robot can return to normal operation",
            "ctl",
            "AG (tokens(p2) = 1 -> EF tokens(normal) = 1)",
        ),
        PropertyCheck(
            "counter_bounded",
            f"counter' never exceeds the explanation budget {b}",
            "bound",
            f"AG tokens(counter') <= {b}",
            params={"place": "counter'", "bound": b},
        ),
        PropertyCheck(
            "fairness",
            "whenever the user is informed, act is enabled",
            "ctl",
            "AG (tokens(user_informed) >= 1 -> enabled(act))",
        ),
        PropertyCheck(
            "safety_no_premature_shutdown",
            "switch_off is only enabled once the budget is used up",
            "ctl",
            f"AG (enabled(switch_off) -> tokens(counter') = {b})",
        ),
        PropertyCheck(
            "modality_attention",
            "speech and light needs attention and a present user",
            "ctl",
            "AG (enabled(explain_speech_light) -> (tokens(attention) = 1 & tokens(not_present) = 0))",
        ),
        PropertyCheck(
            "modality_exclusive",
            "no two explanation modalities are enabled together",
            "ctl",
            _conj([f"AG !(enabled({s}) & enabled({t}))" for s, t in pairs]),
        ),
        PropertyCheck(
            "modality_reachable",
            "every explanation modality can become enabled",
            "ctl",
            _conj([f"EF enabled({t})" for t in EXPLAIN]),
        ),
        PropertyCheck(
            "act_ignore_live",
            "act and ignore are live",
            "liveness",
            "(AG EF enabled(act)) & (AG EF enabled(ignore))",
            params={"transitions": ("act", "ignore")},
        ),
        PropertyCheck(
            "context_invariant",
            "exactly one context place is marked",
            "p_invariant",
            f"AG ({_exactly_one(CONTEXTS)})",
            params={"weights": {c: 1 for c in CONTEXTS}, "constant": 1},
        ),
        PropertyCheck(
            "counter_invariant",
            f"counter + counter' is always {b}",
            "p_invariant",
            f"AG ({_split(b)})",
            params={"weights": {"counter": 1, "counter'": 1}, "constant": b},
        ),
        PropertyCheck(
            "shutdown_forced",
            "with the budget used up, switch_off is enabled and no explanation is",
            "ctl",
            f"AG ((tokens(error_occurred) = 1 & tokens(counter') = {b}) -> (enabled(switch_off) & {explain_off}))",
        ),
    ]


def property_file(cfg: ScenarioConfig = ScenarioConfig()) -> str:
    return format_property_file((c.name, c.formula) for c in property_suite(cfg))


def run_check(net: Net, g: ReachabilityGraph, c: PropertyCheck) -> CheckResult:
    if c.kind == "ctl":
        v: Verdict = check(net, g, parse_formula(c.formula))
        return CheckResult(c, v.holds, v.trace)
    if c.kind == "bound":
        got = place_bounds(g)[c.params["place"]]
        return CheckResult(c, got <= c.params["bound"], detail=f"bound {got}")
    if c.kind == "liveness":
        report = liveness(g)
        classes = {t: report.classification[t] for t in c.params["transitions"]}
        holds = all(v == "live" for v in classes.values())
        return CheckResult(c, holds, detail=", ".join(f"{t}: {k}" for t, k in classes.items()))
    if c.kind == "p_invariant":
        v = InvariantVector.from_dict(net, c.params["weights"])
        generated = v in p_invariants(net)
        res = check_p_invariant(net, v, g)
        holds = generated and res.holds and res.constant == c.params["constant"]
        detail = f"generated={generated} constant={res.constant}"
        return CheckResult(c, holds, detail=detail)
    raise ValueError(f"unknown check kind {c.kind!r}")


def run_suite(cfg: ScenarioConfig = ScenarioConfig(), net: Net | None = None) -> list[CheckResult]:
    net = build_scenario(cfg) if net is None else net
    g = explore(net)
    g.require_complete("the scenario suite")
    return [run_check(net, g, c) for c in property_suite(cfg)]


def scenario_statespace_census(cfg: ScenarioConfig = ScenarioConfig()) -> tuple[int, int]:
    """Number of reachable states and edges."""
    g = explore(build_scenario(cfg))
    g.require_complete("the census")
    return len(g.states), len(g.edges)


def idle_witness(cfg: ScenarioConfig = ScenarioConfig()) -> tuple[str, ...]:
    """Shortest firing sequence that shuts the robot down."""
    net = build_scenario(cfg)
    idle = net.place_index("p2")
    found = reachable(net, lambda m: m[idle] == 1)
    return found.witness

