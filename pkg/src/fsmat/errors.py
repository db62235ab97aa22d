"""Exception types shared across the package."""
from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ParseError(ValueError):
    """Malformed family / matrix text. ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotSimpleError(ValueError):
    """A matrix with repeated columns was passed where a simple one is required."""


class BudgetExhausted(RuntimeError):
    """Exact search ran out of nodes before certifying optimality."""

    def __init__(self, lower: int, upper: int, nodes: int, witness=None):
        self.lower = lower
        self.upper = upper
        self.nodes = nodes
        self.witness = witness
        super().__init__(f"node budget exhausted after {nodes} nodes; {lower} <= fs <= {upper}")


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not settle within ``max_iter`` steps."""

    def __init__(self, message: str, state=None):
        self.state = state
        super().__init__(message)
