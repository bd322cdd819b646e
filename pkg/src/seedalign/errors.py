"""Exception hierarchy shared by every stage of the toolkit."""

from __future__ import annotations


class SeedAlignError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SeedAlignError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(SeedAlignError, ValueError):
    pass


class DomainError(SeedAlignError, ValueError):
    """An argument lies outside the domain of the operation."""


class TrainingError(SeedAlignError, RuntimeError):
    pass


class StageError(SeedAlignError):
    """A pipeline stage failed; ``stage`` names the stage for the CLI."""

    def __init__(self, stage: str, message: str) -> None:
        self.stage = stage
        super().__init__(f"[{stage}] {message}")
