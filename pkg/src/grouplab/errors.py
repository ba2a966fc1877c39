"""Exception types shared across the toolkit."""


class GroupLabError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GroupLabError):
    """An input violates a structural requirement (bad table, non-hom, ...)."""


class CapExceeded(GroupLabError):
    """A configured size cap was exceeded.

    Raised instead of silently sampling; callers that can fall back to a
    cheaper strategy should catch this.
    """

    def __init__(self, cap_name: str, limit: int, actual: int, detail: str = ""):
        self.cap_name = cap_name
        self.limit = limit
        self.actual = actual
        message = f"cap '{cap_name}' exceeded: {actual} > {limit}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class NilpotentElementError(GroupLabError):
    """A ring expected to be nilpotent-free contains a nilpotent element."""

    def __init__(self, witness: int, detail: str = ""):
        self.witness = witness
        message = f"nonzero nilpotent element found: id {witness}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
