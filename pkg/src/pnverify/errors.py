"""Exception hierarchy shared by every pnverify module."""


class PetriNetError(Exception):
    """Base class for all errors raised by pnverify."""


class NetStructureError(PetriNetError, ValueError):
    """A net (or marking) violates a structural rule at construction time."""


class UnknownNodeError(PetriNetError, KeyError):
    """A place or transition name/index does not exist in the net."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown node"


class NotEnabledError(PetriNetError):
    """Attempt to fire a transition (or step) that is not enabled."""


class ParseError(PetriNetError, ValueError):
    """Syntax or validation error in net text, marking literals or formulas."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column}: {self.message}"


class AnalysisError(PetriNetError):
    """An analysis cannot be answered, typically because the graph is truncated."""


class TruncatedError(AnalysisError):
    """The state space was cut off at the exploration limit."""


class ConsistencyError(PetriNetError):
    """Two independent computations of the same fact disagree."""
