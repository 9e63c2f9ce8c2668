"""Names and DDL of the relational exchange format"""

from __future__ import annotations

from typing import Dict, Tuple

from .models import AttributeKind

EVENT_MAP_TYPE = "event_map_type"
OBJECT_MAP_TYPE = "object_map_type"
EVENT = "event"
OBJECT = "object"
EVENT_OBJECT = "event_object"
OBJECT_OBJECT = "object_object"

FIXED_TABLES: Tuple[str, ...] = (
    EVENT_MAP_TYPE,
    OBJECT_MAP_TYPE,
    EVENT,
    OBJECT,
    EVENT_OBJECT,
    OBJECT_OBJECT,
)

EVENT_TABLE_PREFIX = "event_"
OBJECT_TABLE_PREFIX = "object_"

OCEL_ID = "ocel_id"
OCEL_TYPE = "ocel_type"
OCEL_TYPE_MAP = "ocel_type_map"
OCEL_TIME = "ocel_time"
OCEL_CHANGED_FIELD = "ocel_changed_field"
OCEL_EVENT_ID = "ocel_event_id"
OCEL_OBJECT_ID = "ocel_object_id"
OCEL_SOURCE_ID = "ocel_source_id"
OCEL_TARGET_ID = "ocel_target_id"
OCEL_QUALIFIER = "ocel_qualifier"

RESERVED_COLUMNS = frozenset({OCEL_ID, OCEL_TIME, OCEL_CHANGED_FIELD})

# Suffixes whose per-type table would shadow a fixed table.
RESERVED_SUFFIXES = frozenset({"map_type", "object"})

COLUMN_TYPES: Dict[AttributeKind, str] = {
    AttributeKind.STRING: "TEXT",
    AttributeKind.INTEGER: "INTEGER",
    AttributeKind.FLOAT: "REAL",
    AttributeKind.BOOLEAN: "BOOLEAN",
    AttributeKind.TIME: "TIMESTAMP",
}

FIXED_DDL: Tuple[str, ...] = (
    f"""CREATE TABLE {EVENT_MAP_TYPE} (
    {OCEL_TYPE} TEXT PRIMARY KEY,
    {OCEL_TYPE_MAP} TEXT NOT NULL UNIQUE
)""",
    f"""CREATE TABLE {OBJECT_MAP_TYPE} (
    {OCEL_TYPE} TEXT PRIMARY KEY,
    {OCEL_TYPE_MAP} TEXT NOT NULL UNIQUE
)""",
    f"""CREATE TABLE {EVENT} (
    {OCEL_ID} TEXT PRIMARY KEY,
    {OCEL_TYPE} TEXT NOT NULL REFERENCES {EVENT_MAP_TYPE} ({OCEL_TYPE})
)""",
    f"""CREATE TABLE {OBJECT} (
    {OCEL_ID} TEXT PRIMARY KEY,
    {OCEL_TYPE} TEXT NOT NULL REFERENCES {OBJECT_MAP_TYPE} ({OCEL_TYPE})
)""",
    f"""CREATE TABLE {EVENT_OBJECT} (
    {OCEL_EVENT_ID} TEXT NOT NULL REFERENCES {EVENT} ({OCEL_ID}),
    {OCEL_OBJECT_ID} TEXT NOT NULL REFERENCES {OBJECT} ({OCEL_ID}),
    {OCEL_QUALIFIER} TEXT NOT NULL,
    PRIMARY KEY ({OCEL_EVENT_ID}, {OCEL_OBJECT_ID}, {OCEL_QUALIFIER})
)""",
    f"""CREATE TABLE {OBJECT_OBJECT} (
    {OCEL_SOURCE_ID} TEXT NOT NULL REFERENCES {OBJECT} ({OCEL_ID}),
    {OCEL_TARGET_ID} TEXT NOT NULL REFERENCES {OBJECT} ({OCEL_ID}),
    {OCEL_QUALIFIER} TEXT NOT NULL,
    PRIMARY KEY ({OCEL_SOURCE_ID}, {OCEL_TARGET_ID}, {OCEL_QUALIFIER})
)""",
)


def quote(identifier: str) -> str:
    """Quote an SQL identifier"""
    return '"' + identifier.replace('"', '""') + '"'


def kind_of_column(declared_type: str | None) -> AttributeKind:
    """Attribute kind implied by a declared column type (SQLite affinity order)"""
    decl = (declared_type or "").upper()
    if "INT" in decl:
        return AttributeKind.INTEGER
    if "BOOL" in decl:
        return AttributeKind.BOOLEAN
    if any(token in decl for token in ("TIMESTAMP", "DATETIME", "DATE")):
        return AttributeKind.TIME
    if any(token in decl for token in ("REAL", "FLOA", "DOUB")):
        return AttributeKind.FLOAT
    return AttributeKind.STRING


def event_table(mapped: str) -> str:
    return EVENT_TABLE_PREFIX + mapped


def object_table(mapped: str) -> str:
    return OBJECT_TABLE_PREFIX + mapped
