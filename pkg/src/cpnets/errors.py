"""Shared exception types."""


class CPNetError(Exception):
    """Base class for errors raised by this package."""


class CycleError(CPNetError):
    """The dependency graph of a net contains a directed cycle."""


class StateBudgetExceeded(CPNetError):
    """A flip search visited more outcomes than its configured budget.

    Dominance testing is exact but worst-case exponential, so running out
    of budget is an expected, first-class answer rather than a crash.
    """

    def __init__(self, visited: int, budget: int):
        super().__init__(
            f"state budget exceeded: visited {visited} outcomes (budget {budget})"
        )
        self.visited = visited
        self.budget = budget


class InstanceTooLarge(CPNetError):
    """The instance exceeds the configured exhaustive-search bound."""
