"""Exception taxonomy shared across the engine.

Exit-code mapping used by the CLI: DomainError/DatumError/InvalidScalarError
are caller mistakes (exit 1), BudgetError/InconclusiveError mean a check could
not be completed within the configured bounds (exit 2), ConsistencyError
signals an internal invariant violation and should never be caught silently.
"""


class EngineError(Exception):
    pass


class InvalidScalarError(EngineError):
    """Zero denominator or malformed scalar input."""


class DomainError(EngineError):
    """Arguments outside an operation's stated hypothesis."""


class DatumError(EngineError):
    """A Borcherds-Cartan datum violates one of its invariants.

    ``invariant`` names the violated invariant so configs can be fixed.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class BudgetError(EngineError):
    """A height/depth/window budget was exceeded; carries the needed budget."""

    def __init__(self, message: str, needed: int | None = None):
        super().__init__(message)
        self.needed = needed


class DegeneracyError(EngineError):
    """A linear solve met a singular block (degenerate form)."""


class InconclusiveError(EngineError):
    """Verification ran out of budget before reaching a verdict."""

    def __init__(self, message: str, needed: int | None = None):
        super().__init__(message)
        self.needed = needed


class ConsistencyError(EngineError):
    """An internal cross-check failed; indicates a bug, not bad input."""
