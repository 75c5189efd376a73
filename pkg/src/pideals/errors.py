"""Exception types shared by the library and the command line."""


class SpecError(ValueError):
    """A malformed or unsupported input (set, measure, sequence, config)."""


class BudgetExceeded(RuntimeError):
    """An enumeration or brute-force sweep needed more steps than allowed."""

    def __init__(self, message, partial=None, required=None):
        super().__init__(message)
        self.partial = partial
        self.required = required
