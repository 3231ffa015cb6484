"""Exception hierarchy shared by every module."""


class TreeMinorError(Exception):
    """Base class for all errors raised by treeminor."""


class NotATree(TreeMinorError, ValueError):
    """Edge list has the wrong size, a cycle, or is disconnected."""


class VertexOutOfRange(TreeMinorError, ValueError):
    pass


class ValueOutOfRange(TreeMinorError, ValueError):
    """A Prüfer sequence entry lies outside 1..n."""


class InvalidSubset(TreeMinorError, ValueError):
    """Repeated vertices in a vertex subset."""


class SubsetTooSmall(TreeMinorError, ValueError):
    pass


class WrongForestClass(TreeMinorError, ValueError):
    pass


class NotZeroSum(TreeMinorError, ValueError):
    pass


class NotQuotientable(TreeMinorError, ValueError):
    pass


class ClassificationImpossible(TreeMinorError, RuntimeError):
    """An arrowflow fits no class. Only reachable through a bug."""


class BudgetExceeded(TreeMinorError):
    """Brute-force work estimate is above the allowed budget.

    ``estimate`` is the exact work count when ``exact`` is true, otherwise a
    proven lower bound.
    """

    def __init__(self, estimate: int, budget: int, exact: bool = True):
        self.estimate = estimate
        self.budget = budget
        self.exact = exact
        bound = "" if exact else "at least "
        super().__init__(f"work estimate {bound}{estimate} exceeds budget {budget}")
