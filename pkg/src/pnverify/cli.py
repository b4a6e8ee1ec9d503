"""``pnverify`` command line.

Exit codes: 0 everything holds, 1 some property refuted (or goal
unreachable), 2 usage/parse/file errors, 3 state limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import ctl
from .dsl import format_marking, parse_marking, parse_net, parse_property_file, serialize_net, to_dot
from .errors import PetriNetError, TruncatedError
from .net import Net
from .scenario import CONTEXTS, ScenarioConfig, build_scenario, property_file
from .simulate import TokenGame, run_session
from .statespace import (
    dead_transitions,
    deadlocks,
    default_limit,
    explore,
    liveness,
    place_bounds,
    reachable,
)
from .structural import p_invariants

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2
EXIT_LIMIT = 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Usage(f"{path}: {e.strerror}") from None


def _load_net(path: str) -> Net:
    try:
        return parse_net(_read(path))
    except PetriNetError as e:
        raise _Usage(f"{path}:{e}") from None


def _emit(args, report: dict, human: list[str]) -> None:
    if args.json:
        report = {"schema_version": SCHEMA_VERSION, **report}
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    elif not args.quiet:
        sys.stdout.write("\n".join(human) + "\n")


def _limit(args) -> int:
    return args.limit if args.limit is not None else default_limit()


def cmd_check(args) -> int:
    net = _load_net(args.net)
    try:
        props = parse_property_file(_read(args.props))
        formulas = [(name, ctl.parse_formula(text)) for name, text in props]
    except PetriNetError as e:
        raise _Usage(f"{args.props}:{e}") from None
    for name, f in formulas:
        try:
            ctl.resolve(net, f)
        except PetriNetError as e:
            raise _Usage(f"{args.props}: property {name}: {e}") from None
    g = explore(net, _limit(args))
    results = []
    human = []
    for name, f in formulas:
        v = ctl.check(net, g, f)
        results.append(
            {
                "name": name,
                "formula": str(f),
                "holds": v.holds,
                "trace": list(v.trace) if v.trace is not None else None,
                "trace_kind": v.trace_kind,
            }
        )
        line = f"{'HOLDS  ' if v.holds else 'REFUTED'} {name}: {f}"
        if v.trace is not None:
            line += f"\n        {v.trace_kind}: {' '.join(v.trace) or '(empty)'}"
        human.append(line)
    held = sum(r["holds"] for r in results)
    human.append(f"{held}/{len(results)} properties hold ({len(g.states)} states, {g.status})")
    ok = held == len(results)
    _emit(
        args,
        {
            "command": "check",
            "net": net.name,
            "states": len(g.states),
            "graph": g.status,
            "results": results,
            "all_hold": ok,
        },
        human,
    )
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_analyze(args) -> int:
    net = _load_net(args.net)
    g = explore(net, _limit(args))
    g.require_complete("analyze")
    dl = [format_marking(m, net) for m in deadlocks(g)]
    dead = sorted(dead_transitions(g), key=net.transition_index)
    live = liveness(g).classification
    bounds = place_bounds(g)
    invs = [v.as_dict() for v in p_invariants(net)]
    human = [
        f"net {net.name}: {len(g.states)} states, {len(g.edges)} edges",
        "deadlock-free" if not dl else "deadlocks: " + " ".join(dl),
        "dead transitions: " + (" ".join(dead) if dead else "none"),
        "liveness: " + ", ".join(f"{t} {c}" for t, c in live.items()),
        "bounds: " + ", ".join(f"{p}={b}" for p, b in bounds.items()),
        "p-invariants:",
    ]
    human += ["  " + " + ".join(f"{w}*{p}" if w > 1 else p for p, w in inv.items()) for inv in invs] or ["  none"]
    _emit(
        args,
        {
            "command": "analyze",
            "net": net.name,
            "states": len(g.states),
            "edges": len(g.edges),
            "deadlock_free": not dl,
            "deadlocks": dl,
            "dead_transitions": dead,
            "liveness": live,
            "bounds": bounds,
            "p_invariants": invs,
        },
        human,
    )
    return EXIT_OK


def _goal(net: Net, text: str):
    text = text.strip()
    try:
        if text.startswith("{"):
            return parse_marking(text, net)
        f = ctl.parse_formula(text)
        ctl.resolve(net, f)
    except PetriNetError as e:
        raise _Usage(f"goal: {e}") from None
    if not f.is_state_formula():
        raise _Usage("goal: temporal operators are not allowed in a reachability goal")
    return lambda m: ctl.holds_at(net, m, f)


def cmd_reach(args) -> int:
    net = _load_net(args.net)
    res = reachable(net, _goal(net, args.goal), _limit(args))
    if res.status == "reachable":
        human = [
            "reachable",
            "witness: " + (" ".join(res.witness) if res.witness else "(empty)"),
            "marking: " + format_marking(res.marking, net),
        ]
    elif res.status == "unreachable":
        human = ["unreachable"]
    else:
        human = [f"unknown: state limit {_limit(args)} reached"]
    _emit(
        args,
        {
            "command": "reach",
            "net": net.name,
            "goal": args.goal,
            "status": res.status,
            "witness": list(res.witness) if res.witness is not None else None,
            "marking": format_marking(res.marking, net) if res.marking is not None else None,
        },
        human,
    )
    return {"reachable": EXIT_OK, "unreachable": EXIT_REFUTED}.get(res.status, EXIT_LIMIT)


def cmd_simulate(args) -> int:
    net = _load_net(args.net)
    if args.random is not None:
        game = TokenGame(net, args.random)
        fired = game.auto(args.steps)
        final = format_marking(game.marking, net)
        human = [f"seed: {args.random}", "trace: " + (" ".join(fired) or "(empty)"), f"marking: {final}"]
        if not game.enabled():
            human.append("deadlock: no enabled transitions")
        _emit(
            args,
            {
                "command": "simulate",
                "net": net.name,
                "seed": args.random,
                "trace": fired,
                "marking": final,
                "deadlock": not game.enabled(),
            },
            human,
        )
        return EXIT_OK
    if args.net == "-":
        raise _Usage("interactive simulation reads commands from stdin; pass the net as a file")
    game = TokenGame(net, args.seed)
    run_session(game, sys.stdin, sys.stdout, prompt="" if sys.stdin.isatty() else "> ")
    return EXIT_OK


def cmd_dot(args) -> int:
    net = _load_net(args.net)
    m = None
    if args.marking is not None:
        try:
            m = parse_marking(args.marking, net)
        except PetriNetError as e:
            raise _Usage(f"--marking: {e}") from None
    sys.stdout.write(to_dot(net, m))
    return EXIT_OK


def cmd_scenario(args) -> int:
    try:
        cfg = ScenarioConfig(args.context, args.budget)
    except PetriNetError as e:
        raise _Usage(str(e)) from None
    if args.emit == "net":
        sys.stdout.write(serialize_net(build_scenario(cfg)))
    else:
        sys.stdout.write(property_file(cfg))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, default=None, help="maximum number of states to explore")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="no human-readable output")

    parser = argparse.ArgumentParser(prog="pnverify", description="Petri net verification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check a property file against a net")
    p.add_argument("net")
    p.add_argument("props")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", parents=[common], help="deadlocks, liveness, bounds, invariants")
    p.add_argument("net")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reach", parents=[common], help="search for a marking or state formula")
    p.add_argument("net")
    p.add_argument("goal", help="marking literal like '{p2}' or a state formula like 'tokens(p2) = 1'")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("simulate", parents=[common], help="token game")
    p.add_argument("net")
    p.add_argument("--random", nargs="?", type=int, const=0, default=None, metavar="SEED",
                   help="fire random transitions non-interactively")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="seed for 'auto' in interactive mode")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dot", parents=[common], help="Graphviz export")
    p.add_argument("net")
    p.add_argument("--marking", default=None)
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("scenario", parents=[common], help="emit the robot explanation scenario")
    p.add_argument("--context", choices=CONTEXTS, default="attention")
    p.add_argument("--budget", type=int, default=3)
    p.add_argument("--emit", choices=("net", "props"), default="net")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    if args.limit is not None and args.limit < 1:
        sys.stderr.write("pnverify: --limit must be positive\n")
        return EXIT_ERROR
    try:
        return args.func(args)
    except _Usage as e:
        sys.stderr.write(f"pnverify: {e}\n")
        return EXIT_ERROR
    except TruncatedError as e:
        sys.stderr.write(f"pnverify: {e}\n")
        return EXIT_LIMIT
    except PetriNetError as e:
        sys.stderr.write(f"pnverify: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
