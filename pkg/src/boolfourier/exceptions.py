"""Exception types shared across the package."""


class BoolFourierError(Exception):
    """Base class for all package errors."""


class InputError(BoolFourierError, ValueError):
    """Invalid argument: bad mask, wrong length, degree or symmetry violation."""


class ResourceError(BoolFourierError):
    """A request exceeds a configured enumeration or memory cap."""


class ParseError(InputError):
    """Malformed truth-table or generators file."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class BudgetExceededError(BoolFourierError):
    """A learner would need more membership queries than its budget allows."""

    def __init__(self, message, queries_used=0, budget=None):
        super().__init__(message)
        self.queries_used = queries_used
        self.budget = budget
