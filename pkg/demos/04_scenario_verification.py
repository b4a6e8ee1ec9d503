"""
Verifying the explanation robot
===============================

Build the robot model for each user context and run the whole property
suite. Then look at one route to shutdown.
"""

from pnverify import (
    CONTEXTS,
    ScenarioConfig,
    build_scenario,
    format_marking,
    idle_witness,
    run_suite,
    scenario_statespace_census,
)

net = build_scenario()
print(net.name, f"{len(net.places)} places, {len(net.transitions)} transitions")
print("m0 =", format_marking(net.initial_marking, net))

for ctx in CONTEXTS:
    cfg = ScenarioConfig(ctx)
    results = run_suite(cfg)
    states, edges = scenario_statespace_census(cfg)
    held = sum(r.holds for r in results)
    print(f"\n{ctx}: {held}/{len(results)} hold ({states} states, {edges} edges)")
    for r in results:
        print(f"  {'ok ' if r.passed else 'BAD'} {r.check.name}")

# the robot explains three times before it gives up
print("\nshortest route to idle:", " ".join(idle_witness()))

# a smaller budget shrinks the state space
for b in (1, 2, 3, 4):
    print(f"budget {b}:", scenario_statespace_census(ScenarioConfig("attention", b)))
