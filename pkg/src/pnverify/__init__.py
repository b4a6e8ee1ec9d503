"""Petri nets with weighted and read arcs: semantics, state-space analysis,
invariants and CTL model checking."""

from .ctl import Verdict, check, check_liveness_query, holds_at, parse_formula
from .dsl import format_marking, parse_marking, parse_net, serialize_net, to_dot
from .errors import (
    AnalysisError,
    ConsistencyError,
    NetStructureError,
    NotEnabledError,
    ParseError,
    PetriNetError,
    TruncatedError,
    UnknownNodeError,
)
from .net import (
    Arc,
    Marking,
    Net,
    are_concurrent,
    enabled_set,
    fire,
    fire_step,
    in_conflict,
    is_enabled,
    step_enabled,
)
from .scenario import (
    CONTEXTS,
    ScenarioConfig,
    build_scenario,
    idle_witness,
    property_suite,
    run_suite,
    scenario_statespace_census,
)
from .statespace import (
    OMEGA,
    ReachabilityGraph,
    causally_dependent,
    dead_transitions,
    deadlocks,
    explore,
    karp_miller,
    liveness,
    place_bounds,
    reachable,
)
from .structural import (
    InvariantVector,
    check_p_invariant,
    incidence,
    p_invariants,
    t_invariants,
)

__version__ = "0.1.0"
