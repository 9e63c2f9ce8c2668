"""Relational exchange format in a single SQLite file"""

from __future__ import annotations

import logging
import re
import sqlite3
from contextlib import closing
from pathlib import Path
from typing import Any, Collection, Dict, Iterable, List, Optional, Tuple

from . import schema
from .core import LogBuilder, sorted_events, sorted_objects
from .diagnostics import Diagnostic, DiagnosticCode, has_errors
from .models import (
    AttributeKind,
    AttributeValue,
    Log,
    OcelObject,
    TypeDeclaration,
)
from .timestamps import ZERO, format_timestamp, parse_timestamp
from .utils import (
    InvalidLog,
    LoadError,
    MissingTable,
    NotADatabase,
    OcelIOError,
    PathLike,
    TimestampError,
    ValueParseError,
    schema_errors,
)
from .validation import connect_readonly, validate_model, validate_relational_layout

__all__ = ("map_type_name", "read_relational", "write_relational")

logger = logging.getLogger(__name__)

_UNSAFE_CHARS = re.compile(r"[^A-Za-z0-9_]")

# (type name, table name, attribute columns)
TypeTable = Tuple[str, str, List[Tuple[str, AttributeKind]]]


def map_type_name(type_name: str, taken: Collection[str] = ()) -> str:
    """Table suffix for a type name, unique among `taken` (case-insensitively)"""
    used = {name.lower() for name in taken} | schema.RESERVED_SUFFIXES
    base = _UNSAFE_CHARS.sub("", type_name)
    if base and base.lower() not in used:
        return base
    suffix = 1
    while f"{base}{suffix}".lower() in used:
        suffix += 1
    return f"{base}{suffix}"


def _type_mapping(decls: Iterable[TypeDeclaration]) -> Dict[str, str]:
    mapping: Dict[str, str] = {}
    for decl in decls:
        if decl.name not in mapping:
            mapping[decl.name] = map_type_name(decl.name, mapping.values())
    return mapping


def _to_cell(value: AttributeValue) -> Any:
    if value.kind is AttributeKind.TIME:
        return format_timestamp(value.payload, millis=True)
    if value.kind is AttributeKind.BOOLEAN:
        return int(value.payload)
    return value.payload


def _from_cell(kind: AttributeKind, cell: Any, location: str) -> AttributeValue:
    try:
        if kind is AttributeKind.TIME:
            return AttributeValue.of(kind, parse_timestamp(str(cell)))
        if kind is AttributeKind.BOOLEAN:
            if isinstance(cell, str):
                cell = {"true": 1, "false": 0, "1": 1, "0": 0}[cell.strip().lower()]
            return AttributeValue.of(kind, bool(cell))
        if kind is AttributeKind.INTEGER and isinstance(cell, str):
            cell = int(cell)
        if kind is AttributeKind.FLOAT and isinstance(cell, str):
            cell = float(cell)
        if kind is AttributeKind.STRING and not isinstance(cell, str):
            cell = str(cell)
        return AttributeValue.of(kind, cell)
    except (KeyError, TimestampError, ValueError) as e:
        msg = f"cannot read {cell!r} as {kind.value}: {e}"
        raise ValueParseError(msg, location) from e


def _check_columns(decls: Iterable[TypeDeclaration], tag: str) -> None:
    for decl in decls:
        lowered = [attr.name.lower() for attr in decl.attributes]
        clashes = sorted(
            {name for name in lowered if lowered.count(name) > 1}
            | {name for name in lowered if name in schema.RESERVED_COLUMNS}
        )
        if clashes:
            msg = (
                f"{tag} {decl.name!r} has attributes that cannot become distinct "
                f"columns: {', '.join(clashes)}"
            )
            raise InvalidLog(msg)


class _RelationalWriter:
    def __init__(self, log: Log, conn: sqlite3.Connection) -> None:
        self.log = log
        self.conn = conn
        self.event_map = _type_mapping(log.event_types)
        self.object_map = _type_mapping(log.object_types)

    def create_type_table(self, table: str, decl: TypeDeclaration, is_event: bool) -> None:
        columns = [
            f"{schema.OCEL_ID} TEXT PRIMARY KEY REFERENCES {schema.EVENT} ({schema.OCEL_ID})"
            if is_event
            else f"{schema.OCEL_ID} TEXT NOT NULL REFERENCES {schema.OBJECT} ({schema.OCEL_ID})",
            f"{schema.OCEL_TIME} TIMESTAMP NOT NULL",
        ]
        columns += [
            f"{schema.quote(attr.name)} {schema.COLUMN_TYPES[attr.kind]}"
            for attr in decl.attributes
        ]
        if not is_event:
            columns.append(f"{schema.OCEL_CHANGED_FIELD} TEXT")
        body = ",\n    ".join(columns)
        self.conn.execute(f"CREATE TABLE {schema.quote(table)} (\n    {body}\n)")

    def insert(self, table: str, columns: List[str], rows: Iterable[Tuple[Any, ...]]) -> None:
        names = ", ".join(schema.quote(c) for c in columns)
        marks = ", ".join("?" for _ in columns)
        self.conn.executemany(
            f"INSERT INTO {schema.quote(table)} ({names}) VALUES ({marks})", rows
        )

    def write(self) -> None:
        for ddl in schema.FIXED_DDL:
            self.conn.execute(ddl)
        self.insert(
            schema.EVENT_MAP_TYPE,
            [schema.OCEL_TYPE, schema.OCEL_TYPE_MAP],
            self.event_map.items(),
        )
        self.insert(
            schema.OBJECT_MAP_TYPE,
            [schema.OCEL_TYPE, schema.OCEL_TYPE_MAP],
            self.object_map.items(),
        )
        events = sorted_events(self.log)
        objects = sorted_objects(self.log)
        general = [schema.OCEL_ID, schema.OCEL_TYPE]
        self.insert(schema.EVENT, general, ((e.id, e.type) for e in events))
        self.insert(schema.OBJECT, general, ((o.id, o.type) for o in objects))

        for decl in self.log.event_types:
            table = schema.event_table(self.event_map[decl.name])
            self.create_type_table(table, decl, is_event=True)
            names = decl.attribute_names
            self.insert(
                table,
                [schema.OCEL_ID, schema.OCEL_TIME, *names],
                (
                    (
                        e.id,
                        format_timestamp(e.time, millis=True),
                        *(_to_cell(e.attrs[n]) if n in e.attrs else None for n in names),
                    )
                    for e in events
                    if e.type == decl.name
                ),
            )
        for decl in self.log.object_types:
            table = schema.object_table(self.object_map[decl.name])
            self.create_type_table(table, decl, is_event=False)
            names = decl.attribute_names
            rows: List[Tuple[Any, ...]] = []
            for obj in objects:
                if obj.type == decl.name:
                    rows.extend(self.object_rows(obj, names))
            self.insert(
                table,
                [schema.OCEL_ID, schema.OCEL_TIME, *names, schema.OCEL_CHANGED_FIELD],
                rows,
            )

        self.insert(
            schema.EVENT_OBJECT,
            [schema.OCEL_EVENT_ID, schema.OCEL_OBJECT_ID, schema.OCEL_QUALIFIER],
            sorted((r.source, r.target, r.qualifier) for r in self.log.e2o),
        )
        self.insert(
            schema.OBJECT_OBJECT,
            [schema.OCEL_SOURCE_ID, schema.OCEL_TARGET_ID, schema.OCEL_QUALIFIER],
            sorted((r.source, r.target, r.qualifier) for r in self.log.o2o),
        )

    @staticmethod
    def object_rows(obj: OcelObject, names: List[str]) -> List[Tuple[Any, ...]]:
        """One epoch row with the initial values, then one row per later change"""
        initial = {a.attribute: a.value for a in obj.assignments if a.time == ZERO}
        rows: List[Tuple[Any, ...]] = [
            (
                obj.id,
                format_timestamp(ZERO, millis=True),
                *(_to_cell(initial[n]) if n in initial else None for n in names),
                None,
            )
        ]
        changes = sorted(
            (a for a in obj.assignments if a.time != ZERO),
            key=lambda a: (a.time, names.index(a.attribute)),
        )
        for change in changes:
            rows.append(
                (
                    obj.id,
                    format_timestamp(change.time, millis=True),
                    *(_to_cell(change.value) if n == change.attribute else None for n in names),
                    change.attribute,
                )
            )
        return rows


def write_relational(log: Log, path: PathLike) -> None:
    """Write the log as a relational database, replacing any file at `path`"""
    errors = [d for d in validate_model(log) if d.is_error]
    if errors:
        msg = f"log has {len(errors)} validation error(s); refusing to write {path}"
        raise InvalidLog(msg, errors)
    _check_columns(log.event_types, "event type")
    _check_columns(log.object_types, "object type")

    db_path = Path(path)
    try:
        if db_path.exists():
            logger.debug("Replacing existing database %s", db_path)
            db_path.unlink()
        with closing(sqlite3.connect(str(db_path))) as conn:
            conn.execute("PRAGMA foreign_keys = ON")
            with conn:
                _RelationalWriter(log, conn).write()
    except TimestampError as e:
        msg = f"cannot write {db_path}: {e}"
        raise InvalidLog(msg) from e
    except (OSError, sqlite3.Error) as e:
        msg = f"cannot write {db_path}: {e}"
        raise OcelIOError(msg) from e
    logger.debug(
        "Wrote %d events and %d objects to %s", len(log.events), len(log.objects), db_path
    )


class _RelationalReader:
    def __init__(self, conn: sqlite3.Connection) -> None:
        self.conn = conn
        self.builder = LogBuilder()
        self.tables = {
            str(name).lower(): str(name)
            for (name,) in conn.execute("SELECT name FROM sqlite_master WHERE type = 'table'")
        }

    def columns(self, table: str) -> List[Tuple[str, AttributeKind]]:
        rows = self.conn.execute(f"PRAGMA table_info({schema.quote(table)})").fetchall()
        return [(str(row[1]), schema.kind_of_column(row[2])) for row in rows]

    def type_tables(self, map_table: str, prefix: str) -> List[TypeTable]:
        found = []
        for type_name, mapped in self.conn.execute(
            f"SELECT {schema.OCEL_TYPE}, {schema.OCEL_TYPE_MAP} FROM {map_table} ORDER BY rowid"
        ):
            table = self.tables[(prefix + str(mapped)).lower()]
            attributes = [
                (name, kind)
                for name, kind in self.columns(table)
                if name not in schema.RESERVED_COLUMNS
            ]
            found.append((str(type_name), table, attributes))
        return found

    def read(self) -> Log:
        event_tables = self.type_tables(schema.EVENT_MAP_TYPE, schema.EVENT_TABLE_PREFIX)
        object_tables = self.type_tables(schema.OBJECT_MAP_TYPE, schema.OBJECT_TABLE_PREFIX)
        for type_name, table, attributes in event_tables:
            with schema_errors(table):
                self.builder.add_event_type(type_name, attributes)
        for type_name, table, attributes in object_tables:
            with schema_errors(table):
                self.builder.add_object_type(type_name, attributes)
        for type_name, table, attributes in event_tables:
            self.read_events(type_name, table, attributes)
        for type_name, table, attributes in object_tables:
            self.read_objects(type_name, table, attributes)
        for event_id, object_id, qualifier in self.conn.execute(
            f"SELECT {schema.OCEL_EVENT_ID}, {schema.OCEL_OBJECT_ID}, {schema.OCEL_QUALIFIER} "
            f"FROM {schema.EVENT_OBJECT} ORDER BY rowid"
        ):
            self.builder.relate_event(str(event_id), str(object_id), str(qualifier))
        for source_id, target_id, qualifier in self.conn.execute(
            f"SELECT {schema.OCEL_SOURCE_ID}, {schema.OCEL_TARGET_ID}, {schema.OCEL_QUALIFIER} "
            f"FROM {schema.OBJECT_OBJECT} ORDER BY rowid"
        ):
            self.builder.relate_objects(str(source_id), str(target_id), str(qualifier))
        return self.builder.build()

    def select(self, table: str, columns: List[str]) -> sqlite3.Cursor:
        names = ", ".join(schema.quote(c) for c in columns)
        return self.conn.execute(f"SELECT {names} FROM {schema.quote(table)} ORDER BY rowid")

    def read_events(
        self, type_name: str, table: str, attributes: List[Tuple[str, AttributeKind]]
    ) -> None:
        names = [name for name, _ in attributes]
        cursor = self.select(table, [schema.OCEL_ID, schema.OCEL_TIME, *names])
        for row_number, (event_id, time, *cells) in enumerate(cursor, start=1):
            location = f"{table}:{row_number}"
            values = {
                name: _from_cell(kind, cell, location)
                for (name, kind), cell in zip(attributes, cells)
                if cell is not None
            }
            with schema_errors(location):
                self.builder.add_event(str(event_id), type_name, parse_timestamp(str(time)), values)

    def read_objects(
        self, type_name: str, table: str, attributes: List[Tuple[str, AttributeKind]]
    ) -> None:
        names = [name for name, _ in attributes]
        kinds = dict(attributes)
        has_changed = schema.OCEL_CHANGED_FIELD in {c for c, _ in self.columns(table)}
        columns = [schema.OCEL_ID, schema.OCEL_TIME, *names]
        if has_changed:
            columns.append(schema.OCEL_CHANGED_FIELD)
        added = set()
        for row_number, row in enumerate(self.select(table, columns), start=1):
            location = f"{table}:{row_number}"
            object_id, time = str(row[0]), parse_timestamp(str(row[1]))
            cells = dict(zip(names, row[2 : 2 + len(names)]))
            changed: Optional[str] = row[-1] if has_changed else None
            if object_id not in added:
                with schema_errors(location):
                    self.builder.add_object(object_id, type_name)
                added.add(object_id)
            if changed:
                # layout validation has already rejected unknown column names
                cell = cells[changed]
                if cell is not None:
                    value = _from_cell(kinds[changed], cell, location)
                    with schema_errors(location):
                        self.builder.assign(object_id, changed, value, time)
                continue
            if time != ZERO:
                logger.warning(
                    "%s: initial row of %s is at %s, reading it as a snapshot",
                    location,
                    object_id,
                    format_timestamp(time),
                )
            for name, cell in cells.items():
                if cell is not None:
                    value = _from_cell(kinds[name], cell, location)
                    with schema_errors(location):
                        self.builder.assign(object_id, name, value, time)


def read_relational(path: PathLike) -> Log:
    """Read a relational database back into a log"""
    logger.debug("Reading relational log from %s", path)
    with closing(connect_readonly(path)) as conn:
        try:
            diagnostics: List[Diagnostic] = validate_relational_layout(conn)
            missing = [d for d in diagnostics if d.code is DiagnosticCode.MISSING_TABLE]
            if missing:
                raise MissingTable(missing[0].location)
            if has_errors(diagnostics):
                errors = [d for d in diagnostics if d.is_error]
                msg = f"{path} violates the relational layout ({len(errors)} error(s))"
                raise LoadError(msg, str(path), diagnostics=errors)
            return _RelationalReader(conn).read()
        except sqlite3.DatabaseError as e:
            msg = f"{path} cannot be queried: {e}"
            raise NotADatabase(msg, str(path)) from e
