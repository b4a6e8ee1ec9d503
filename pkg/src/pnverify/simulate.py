"""Token game: step through a net by hand or at random."""

from __future__ import annotations

import random
from typing import Iterable, TextIO

from .dsl import format_marking
from .errors import PetriNetError
from .net import Marking, Net, enabled_indices, fire

HELP = "commands: <transition name or number>, undo, reset, auto K, help, quit"


class TokenGame:
    """Marking stack plus a seeded generator for random firings.

    ``undo`` pops exactly one firing; the net itself is never modified.
    """

    def __init__(self, net: Net, seed: int = 0):
        self.net = net
        self.seed = seed
        self.rng = random.Random(seed)
        self.history: list[Marking] = [net.initial_marking]
        self.trace: list[str] = []

    @property
    def marking(self) -> Marking:
        return self.history[-1]

    def enabled(self) -> list[str]:
        return [self.net.transitions[i] for i in enabled_indices(self.net, self.marking)]

    def fire(self, t: str) -> Marking:
        m = fire(self.net, self.marking, t)
        self.history.append(m)
        self.trace.append(self.net.transitions[self.net.transition_index(t)])
        return m

    def undo(self) -> bool:
        if len(self.history) == 1:
            return False
        self.history.pop()
        self.trace.pop()
        return True

    def reset(self) -> None:
        del self.history[1:]
        self.trace.clear()

    def auto(self, k: int) -> list[str]:
        """Fire up to ``k`` uniformly chosen enabled transitions."""
        fired = []
        for _ in range(k):
            choices = self.enabled()
            if not choices:
                break
            t = self.rng.choice(choices)
            self.fire(t)
            fired.append(t)
        return fired

    def describe(self) -> str:
        lines = [f"marking: {format_marking(self.marking, self.net)}"]
        enabled = self.enabled()
        if enabled:
            lines.append("enabled: " + "  ".join(f"[{i}] {t}" for i, t in enumerate(enabled, 1)))
        else:
            lines.append("deadlock: no enabled transitions")
        return "\n".join(lines)


def run_session(game: TokenGame, commands: Iterable[str], out: TextIO, prompt: str = "> ") -> None:
    """Drive ``game`` with text commands, writing responses to ``out``."""
    out.write(f"seed: {game.seed}\n{game.describe()}\n")
    for raw in commands:
        cmd = raw.strip()
        if not cmd:
            continue
        if prompt:
            out.write(f"{prompt}{cmd}\n")
        word, _, arg = cmd.partition(" ")
        if word in ("quit", "exit"):
            break
        if word == "help":
            out.write(HELP + "\n")
            continue
        if word == "undo":
            if not game.undo():
                out.write("nothing to undo\n")
        elif word == "reset":
            game.reset()
        elif word == "auto":
            try:
                k = int(arg or "1")
            except ValueError:
                out.write(f"auto needs a number, got {arg!r}\n")
                continue
            fired = game.auto(k)
            out.write(f"fired: {' '.join(fired) if fired else '(nothing)'}\n")
        else:
            enabled = game.enabled()
            name = cmd
            if cmd.isdigit():
                i = int(cmd)
                if not 1 <= i <= len(enabled):
                    out.write(f"no enabled transition numbered {i}\n")
                    continue
                name = enabled[i - 1]
            try:
                game.fire(name)
            except PetriNetError as e:
                out.write(f"{e}\n")
                continue
        out.write(game.describe() + "\n")
