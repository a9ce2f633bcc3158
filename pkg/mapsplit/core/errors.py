"""
Exception hierarchy for mapsplit

Every failure a command can report maps to one of these classes. The CLI turns
``exit_code`` into the process exit status:

- 2: bad or inconsistent input data
- 3: invalid configuration or constraints
- 1: anything else
"""

from typing import Iterable, List, Sequence


class MapsplitError(Exception):
    """Base class for all mapsplit errors."""

    exit_code = 1


# ============================================================================
# Data errors (exit 2)
# ============================================================================


class DataError(MapsplitError):
    """Input data is missing, malformed or inconsistent."""

    exit_code = 2


class SchemaError(DataError):
    """A required column is missing from an input table."""

    def __init__(self, column: str, source: str):
        super().__init__(f"{source}: missing required column '{column}'")
        self.column = column
        self.source = source


class ParseError(DataError):
    """A field could not be parsed."""

    def __init__(self, source: str, row: int, column: str, value: str):
        super().__init__(f"{source}: row {row}: cannot parse {column}={value!r}")
        self.row = row
        self.column = column


class DuplicateUnitError(DataError):
    """Two rows share a unit_id."""

    def __init__(self, unit_id: str, source: str):
        super().__init__(f"{source}: duplicate unit_id '{unit_id}'")
        self.unit_id = unit_id


class UnknownUnitError(DataError):
    """An adjacency or assignment row names a unit that was never loaded."""

    def __init__(self, unit_id: str, source: str = "adjacency"):
        super().__init__(f"{source}: unknown unit '{unit_id}'")
        self.unit_id = unit_id


class GeometryError(DataError):
    """Unit geometry attributes produce an invalid shape measure."""

    pass


class UndefinedMetricError(DataError):
    """A metric has a zero denominator (no population, no votes)."""

    pass


class StructureError(DataError):
    """The graph does not have the structure an operation needs."""

    pass


class PruningError(StructureError):
    """Pruning short borders would disconnect the graph."""

    def __init__(self, components: Sequence[Iterable[str]]):
        self.components: List[List[str]] = [sorted(c) for c in components]
        detached = "; ".join("{" + ", ".join(c) + "}" for c in self.components[1:])
        super().__init__(f"pruning disconnects the graph; cut-off unit sets: {detached}")


class PlanFileError(DataError):
    """A plan file is malformed or belongs to another graph."""

    pass


# ============================================================================
# Configuration errors (exit 3)
# ============================================================================


class ConfigError(MapsplitError):
    """Run configuration is invalid."""

    exit_code = 3


class ConstraintError(ConfigError):
    """A constraint value is out of range, or a seed plan violates it."""

    pass


class EmptyEnsembleError(ConfigError):
    """An operation received no plans."""

    def __init__(self, message: str = "empty ensemble"):
        super().__init__(message)


class DomainError(ConfigError):
    """An operation is undefined on the given support set."""

    pass


class SizeError(ConfigError):
    """A graph is too large for an exhaustive operation."""

    pass


# ============================================================================
# Runtime errors
# ============================================================================


class SinkError(MapsplitError):
    """A plan consumer failed during enumeration."""

    def __init__(self, emitted: int, cause: BaseException):
        super().__init__(f"plan sink failed after {emitted} plans: {cause}")
        self.emitted = emitted


class OutputError(SinkError):
    """A result file could not be written."""

    def __init__(self, path, cause: BaseException):
        MapsplitError.__init__(self, f"cannot write {path}: {cause}")
        self.emitted = 0
        self.path = str(path)
