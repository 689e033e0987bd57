"""Exception hierarchy shared by all coxlab modules."""


class CoxlabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CoxlabError):
    """Malformed or invalid user input (matrices, words, options)."""


class BudgetError(CoxlabError):
    """A configured search/size budget was exhausted before completion."""


class FieldError(CoxlabError):
    """An algebraic value was requested outside the session field."""


class ConsistencyError(CoxlabError):
    """An internal invariant failed; carries a reproduction payload."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class PreconditionError(CoxlabError):
    """An operation's stated precondition does not hold for the arguments."""
