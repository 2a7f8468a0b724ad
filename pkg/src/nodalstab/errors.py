"""Exception hierarchy."""


class NodalStabError(Exception):
    pass


class GraphError(NodalStabError, ValueError):
    """Malformed graph, or a graph that fails a structural precondition."""


class AssumptionError(NodalStabError, ValueError):
    """A standing assumption on the dual graph is violated.

    ``label`` is one of ``"i"``, ``"ii"``, ``"iii"`` (rational components
    meet the rest in two points, no self-loops, no disconnecting edges),
    or ``"genus"`` for the requirement g >= 1.
    """

    def __init__(self, label, message):
        super().__init__(f"assumption ({label}) violated: {message}")
        self.label = label


class EnumerationCapError(NodalStabError):
    """Exhaustive enumeration requested beyond the configured vertex cap."""
