"""Exception hierarchy shared by all rankstats modules."""

from __future__ import annotations


class RankstatsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RankstatsError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateDataError(RankstatsError, ValueError):
    """The data make the statistic undefined (e.g. zero variance, empty marginal)."""


class UnattainablePowerError(DomainError):
    """No finite sample size reaches the requested power."""


class NotFoundError(RankstatsError, KeyError):
    """A referenced institution does not exist in the dataset."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParseError(RankstatsError, ValueError):
    """Malformed CSV input. Carries the 1-based line number and offending field."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DuplicateIdError(ParseError):
    """The same institution id appears twice."""
