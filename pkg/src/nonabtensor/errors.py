"""Exception types shared across the package."""


class GroupError(ValueError):
    """Invalid group data (bad table, bad index, failed invariant)."""


class ResourceLimitError(RuntimeError):
    """A construction exceeded the coset limit or the order cap."""

    def __init__(self, message: str, *, kind: str = "order", limit: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.limit = limit


class IncompatibleActionsError(GroupError):
    """Mutual actions fail the compatibility equations."""


class EngineError(RuntimeError):
    """An internal verification failed; indicates a bug, not bad input."""
