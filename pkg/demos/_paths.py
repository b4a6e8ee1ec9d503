from pathlib import Path

from pnverify import parse_net

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return parse_net((FIXTURES / f"{name}.pn").read_text())
