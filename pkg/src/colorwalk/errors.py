"""Shared exception types."""

from __future__ import annotations


class ColorwalkError(Exception):
    """Base class for all package-specific failures."""


class InfeasibleError(ColorwalkError):
    """Requested parameters admit no valid object (partition, edge count, ...)."""


class FormatError(ColorwalkError):
    """A text input file violates its format contract."""

    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class PaletteError(ColorwalkError):
    """A recoloring run ran out of usable colors.

    ``rounds_completed`` reports how far the greedy phase got before failing.
    """

    def __init__(self, message: str, rounds_completed: int | None = None):
        self.rounds_completed = rounds_completed
        super().__init__(message)


class FreshColorError(ColorwalkError):
    """Residual recoloring was given an unusable fresh-color budget."""


class CapError(ColorwalkError):
    """An exhaustive computation exceeded its configured size cap."""


class InternalInvariantError(ColorwalkError):
    """A condition the construction guarantees was observed to fail."""
