"""Exception hierarchy shared by every module."""


class CsrError(Exception):
    """Base class for all solver errors."""


class MalformedInstance(CsrError, ValueError):
    """An instance, constraint or file violates its structural invariants."""


class MalformedAssignment(MalformedInstance):
    """An assignment is partial where it must be total, or uses unknown values."""


class NotBinary(CsrError, ValueError):
    """A hyperedge of size greater than two was found where arity <= 2 is required."""


class BudgetExceeded(CsrError):
    """An explicit search budget was exhausted; results are never truncated."""


class WrongAlgorithm(CsrError):
    """An algorithm was selected whose preconditions the instance violates."""


class InvalidWalk(CsrError, ValueError):
    """A claimed reconfiguration sequence is not a walk in the solution graph."""


class NotIdentical(CsrError):
    """Two vertex sets fail the identical-subhypergraph test.

    ``condition`` names the failed check: ``"neighborhood"``, ``"1"``, ``"2"``,
    ``"3"`` or ``"4"``.
    """

    def __init__(self, condition, message):
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition


class GenerationFailed(CsrError):
    """The random generator hit its retry cap without finding a solvable instance."""
