"""Exception hierarchy shared across the toolkit.

Two families matter for the CLI exit code: ``DataError`` covers everything
wrong with inputs (parsing, schema, invariant violations, bad graph
queries) and maps to exit code 1; ``EstimationError`` covers failures in
model fitting and maps to exit code 2.
"""

from __future__ import annotations


class NobelnetError(Exception):
    """Base class for all toolkit errors."""


class DataError(NobelnetError):
    """Invalid input data or an invalid query against it."""


class EstimationError(NobelnetError):
    """Model estimation could not be carried out."""


# ---- data / graph errors -------------------------------------------------


class ValidationError(DataError):
    """A record violates one of its invariants."""


class ParseError(DataError):
    """A file could not be parsed; carries file and line context."""

    def __init__(self, path: str, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class SchemaError(DataError):
    """A file's header does not match the expected schema."""


class DuplicateIdError(ValidationError):
    """Two scholar records share the same id."""


class UnknownEndpointError(ValidationError):
    """A mentor edge names a scholar id that is not in the register."""


class CycleDetectedError(ValidationError):
    """The mentor edges contain a directed cycle."""

    def __init__(self, cycle: list[str]) -> None:
        super().__init__("mentor edges contain a cycle: " + " -> ".join(cycle))
        self.cycle = cycle


class UnknownNodeError(DataError):
    """A query names a scholar id that is not in the graph."""


class SameNodeError(DataError):
    """A pairwise query was given the same scholar twice."""


class EmptyInputError(DataError):
    """An operation that needs at least one value received none."""


class InvalidFilterError(DataError):
    """A candidate-source filter would remove the laureates themselves."""


# ---- estimation errors ---------------------------------------------------


class RankDeficientError(EstimationError):
    """The design matrix does not have full column rank."""


class PerfectSeparationError(EstimationError):
    """The likelihood is maximised at infinite coefficients."""

    def __init__(self, columns: list[str]) -> None:
        super().__init__(
            "perfect separation; diverging coefficients: " + ", ".join(columns)
        )
        self.columns = columns


class AllRowsDroppedError(EstimationError):
    """Separation handling removed every observation."""


class DegenerateDesignError(EstimationError):
    """A regression cannot be identified from the given observations."""


class UnknownCovariateError(EstimationError):
    """A prediction was asked for a covariate the fit does not contain."""
