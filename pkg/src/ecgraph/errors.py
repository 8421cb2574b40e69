from __future__ import annotations


class EcGraphError(RuntimeError):
    """A safe, user-facing error string that can be shown on the command line."""


class BudgetExceededError(EcGraphError):
    """Exhaustive search refused because its cost bound exceeds the budget."""


class SizeCapError(EcGraphError):
    """An exhaustive or dense oracle refused a graph above its size cap."""


class ReportWriteError(EcGraphError):
    """Writing a report or export failed; the message carries the path."""
