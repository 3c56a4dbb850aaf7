"""Executable engine for nets with named tokens, bonds, and reversible transitions."""

from .model import (
    Action,
    ArcLabel,
    Bond,
    Contents,
    Marking,
    Net,
    State,
    ValidationReport,
    Violation,
    forward,
    initial_history,
    reverse,
    transition_views,
    validate,
)

__all__ = [
    "Action",
    "ArcLabel",
    "Bond",
    "Contents",
    "Marking",
    "Net",
    "State",
    "ValidationReport",
    "Violation",
    "forward",
    "initial_history",
    "reverse",
    "transition_views",
    "validate",
]
