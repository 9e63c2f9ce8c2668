"""Object-centric event log library"""

from .core import (
    LogBuilder,
    eaval,
    event_types,
    log_stats,
    logs_equal,
    oaval_at,
    oaval_final,
    object_types,
    relobj_event,
    relobj_object,
)
from .diagnostics import Diagnostic, DiagnosticCode, Severity
from .fixtures import running_example
from .formats import Format, detect_format, read_log, write_log
from .jsonocel import read_json, write_json
from .models import (
    AttributeDeclaration,
    AttributeKind,
    AttributeValue,
    Event,
    Log,
    ObjectAttributeAssignment,
    OcelObject,
    QualifiedRelation,
    TypeDeclaration,
)
from .relational import map_type_name, read_relational, write_relational
from .timestamps import INFINITY, ZERO, format_timestamp, parse_timestamp
from .utils import (
    FormatDetectionError,
    InvalidLog,
    JsonSyntaxError,
    LoadError,
    MissingTable,
    NotADatabase,
    OcelError,
    OcelIOError,
    SchemaViolation,
    TimestampError,
    UnknownEvent,
    UnknownObject,
    ValueParseError,
    XmlSyntaxError,
)
from .validation import validate_model, validate_relational_layout
from .xmlocel import read_xml, write_xml

__all__ = (
    "INFINITY",
    "ZERO",
    "AttributeDeclaration",
    "AttributeKind",
    "AttributeValue",
    "Diagnostic",
    "DiagnosticCode",
    "Event",
    "Format",
    "FormatDetectionError",
    "InvalidLog",
    "JsonSyntaxError",
    "LoadError",
    "Log",
    "LogBuilder",
    "MissingTable",
    "NotADatabase",
    "ObjectAttributeAssignment",
    "OcelError",
    "OcelIOError",
    "OcelObject",
    "QualifiedRelation",
    "SchemaViolation",
    "Severity",
    "TimestampError",
    "TypeDeclaration",
    "UnknownEvent",
    "UnknownObject",
    "ValueParseError",
    "XmlSyntaxError",
    "detect_format",
    "eaval",
    "event_types",
    "format_timestamp",
    "log_stats",
    "logs_equal",
    "map_type_name",
    "oaval_at",
    "oaval_final",
    "object_types",
    "parse_timestamp",
    "read_json",
    "read_log",
    "read_relational",
    "read_xml",
    "relobj_event",
    "relobj_object",
    "running_example",
    "validate_model",
    "validate_relational_layout",
    "write_json",
    "write_log",
    "write_relational",
    "write_xml",
)
