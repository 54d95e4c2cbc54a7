"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Raised when a graph6 or edge-list input cannot be decoded."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class EmptyGraphError(ValueError):
    """Raised by clique and homotopy operations given the graph on zero vertices."""


class IsomorphismTooLarge(ValueError):
    """Raised when exact isomorphism is requested beyond the size guard."""


class InvariantViolation(RuntimeError):
    """A structural fact proven for low degree graphs failed to hold.

    Reaching this means either a bug or a counterexample, so it is never
    swallowed by library code.
    """


class InvalidCertificate(ValueError):
    """A domination certificate for a retraction does not check out."""


class TraceCorruptionError(ValueError):
    """A recorded reduction move no longer applies when replayed."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index}: {reason}")
        self.index = index


class SimplexBudgetExceeded(RuntimeError):
    """The clique complex would exceed the configured simplex budget."""
