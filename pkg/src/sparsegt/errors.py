"""Exception types shared across the package."""


class GroupTestingError(Exception):
    """Base class for all errors raised by sparsegt."""


class NotPrimePower(GroupTestingError, ValueError):
    pass


class DivisionByZero(GroupTestingError, ZeroDivisionError):
    pass


class IndexOutOfRange(GroupTestingError, IndexError):
    pass


class SelfInSet(GroupTestingError, ValueError):
    pass


class GTMFormatError(GroupTestingError, ValueError):
    """Malformed GTM1 matrix or outcome file."""


class MalformedHeader(GTMFormatError):
    pass


class RaggedRow(GTMFormatError):
    pass


class InvalidCharacter(GTMFormatError):
    pass


class RowCountMismatch(GTMFormatError):
    pass


class BlockLengthExceedsField(GroupTestingError, ValueError):
    pass


class TooManyColumns(GroupTestingError, ValueError):
    pass


class WeightExceedsLength(GroupTestingError, ValueError):
    pass


class DegenerateParameters(GroupTestingError, ValueError):
    """A bound formula is undefined (or vacuous) at the requested parameters."""


class WorkBudgetExceeded(GroupTestingError, RuntimeError):
    """An exhaustive search would exceed its configured budget.

    ``progress`` carries whatever partial information the search collected.
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


class LengthMismatch(GroupTestingError, ValueError):
    pass


class PlanMismatch(GroupTestingError, ValueError):
    pass


class GuaranteeExceeded(UserWarning):
    """Simulation noise exceeds what the selected decoder is guaranteed to correct."""
