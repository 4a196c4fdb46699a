"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class FlowlogError(Exception):
    """Base class. ``exit_code`` is what the CLI returns for this error."""

    exit_code = 1


class DatalogSyntaxError(FlowlogError):
    exit_code = 3

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class ValidationError(FlowlogError):
    """A syntactically valid program that violates a static rule."""

    exit_code = 4

    def __init__(self, message: str, rule_id: int | None = None, line: int = 0):
        self.rule_id = rule_id
        self.line = line
        prefix = ""
        if line:
            prefix += f"{line}: "
        if rule_id is not None:
            prefix += f"rule r{rule_id}: "
        super().__init__(prefix + message)


class ArityMismatch(ValidationError):
    pass


class UndeclaredRelation(ValidationError):
    pass


class UnsafeRule(ValidationError):
    pass


class UnstratifiableProgram(FlowlogError):
    exit_code = 5


class SearchSpaceExceeded(FlowlogError):
    exit_code = 9


class NotApplicable(FlowlogError):
    exit_code = 10


class MonoidMismatch(FlowlogError):
    exit_code = 11


class UnsupportedMonoid(FlowlogError):
    exit_code = 12


class UnsupportedLift(FlowlogError):
    exit_code = 13


class NonTermination(FlowlogError):
    exit_code = 7


class DataError(FlowlogError):
    exit_code = 6


class IoError(FlowlogError):
    """Missing input file or unwritable output directory."""

    exit_code = 8


class MalformedRow(DataError):
    def __init__(self, message: str, path: str = "", line: int = 0):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}" if path else message)


class NegativeWeight(FlowlogError):
    exit_code = 14
