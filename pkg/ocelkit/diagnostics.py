from __future__ import annotations

import json
from enum import Enum
from typing import Iterable, List

from .models import BaseOcelModel

__all__ = (
    "Diagnostic",
    "DiagnosticCode",
    "Severity",
    "has_errors",
    "sort_diagnostics",
)


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


class DiagnosticCode(str, Enum):
    """Closed catalog of validation findings."""

    # model (definition-level) findings
    EVENT_TYPE_UNDECLARED = "EVENT_TYPE_UNDECLARED"
    OBJECT_TYPE_UNDECLARED = "OBJECT_TYPE_UNDECLARED"
    EVENT_ATTR_UNDECLARED = "EVENT_ATTR_UNDECLARED"
    OBJECT_ATTR_UNDECLARED = "OBJECT_ATTR_UNDECLARED"
    ATTR_KIND_MISMATCH = "ATTR_KIND_MISMATCH"
    ATTR_VALUE_NOT_FINITE = "ATTR_VALUE_NOT_FINITE"
    DUPLICATE_EVENT_ID = "DUPLICATE_EVENT_ID"
    DUPLICATE_OBJECT_ID = "DUPLICATE_OBJECT_ID"
    ID_NOT_DISJOINT = "ID_NOT_DISJOINT"
    DUPLICATE_TYPE_DECLARATION = "DUPLICATE_TYPE_DECLARATION"
    DUPLICATE_ATTRIBUTE_DECLARATION = "DUPLICATE_ATTRIBUTE_DECLARATION"
    DUPLICATE_ASSIGNMENT = "DUPLICATE_ASSIGNMENT"
    E2O_DANGLING_EVENT = "E2O_DANGLING_EVENT"
    E2O_DANGLING_OBJECT = "E2O_DANGLING_OBJECT"
    O2O_DANGLING_SOURCE = "O2O_DANGLING_SOURCE"
    O2O_DANGLING_TARGET = "O2O_DANGLING_TARGET"
    E2O_DUPLICATE = "E2O_DUPLICATE"
    O2O_DUPLICATE = "O2O_DUPLICATE"
    EVENT_TIME_INVALID = "EVENT_TIME_INVALID"
    ASSIGNMENT_TIME_INVALID = "ASSIGNMENT_TIME_INVALID"
    ATTR_NAME_SHARED = "ATTR_NAME_SHARED"
    RESERVED_ATTRIBUTE_NAME = "RESERVED_ATTRIBUTE_NAME"

    # relational layout findings
    MISSING_TABLE = "MISSING_TABLE"
    NOT_A_DATABASE = "NOT_A_DATABASE"
    TYPE_MAP_DUPLICATE = "TYPE_MAP_DUPLICATE"
    TYPE_MAP_NAME_COLLISION = "TYPE_MAP_NAME_COLLISION"
    TYPE_UNMAPPED = "TYPE_UNMAPPED"
    TYPE_TABLE_ABSENT = "TYPE_TABLE_ABSENT"
    TYPE_TABLE_MALFORMED = "TYPE_TABLE_MALFORMED"
    TYPE_TABLE_ORPHAN = "TYPE_TABLE_ORPHAN"
    TYPE_TABLE_MISSING_ROW = "TYPE_TABLE_MISSING_ROW"
    TYPE_TABLE_MISROUTED = "TYPE_TABLE_MISROUTED"
    CHANGED_FIELD_UNKNOWN = "CHANGED_FIELD_UNKNOWN"
    EPOCH_NONCANONICAL = "EPOCH_NONCANONICAL"

    # document findings
    XML_SYNTAX = "XML_SYNTAX"
    JSON_SYNTAX = "JSON_SYNTAX"
    SCHEMA_VIOLATION = "SCHEMA_VIOLATION"


# Everything not listed here is an ERROR.
_WARNING_CODES = frozenset(
    {
        DiagnosticCode.ATTR_NAME_SHARED,
        DiagnosticCode.RESERVED_ATTRIBUTE_NAME,
        DiagnosticCode.EPOCH_NONCANONICAL,
    }
)


def default_severity(code: DiagnosticCode) -> Severity:
    return Severity.WARNING if code in _WARNING_CODES else Severity.ERROR


class Diagnostic(BaseOcelModel):
    code: DiagnosticCode
    severity: Severity
    location: str
    message: str

    @classmethod
    def of(cls, code: DiagnosticCode, location: str, message: str) -> Diagnostic:
        return cls(
            code=code,
            severity=default_severity(code),
            location=location,
            message=message,
        )

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def to_record(self) -> dict[str, str]:
        return {
            "code": self.code.value,
            "severity": self.severity.value,
            "location": self.location,
            "message": self.message,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    return sorted(diagnostics, key=lambda d: (d.location, d.code.value, d.message))
