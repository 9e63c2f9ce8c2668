"""Diagnostics for the log tuple and for relational layouts"""

from __future__ import annotations

import logging
import sqlite3
from collections import Counter, defaultdict
from contextlib import closing
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from . import schema
from .diagnostics import Diagnostic, DiagnosticCode, sort_diagnostics
from .models import AttributeValue, Log, QualifiedRelation, TypeDeclaration
from .timestamps import ZERO, is_infinity, parse_timestamp
from .utils import NotADatabase, OcelIOError, PathLike, TimestampError

__all__ = (
    "connect_readonly",
    "validate_model",
    "validate_relational_layout",
)

logger = logging.getLogger(__name__)

Code = DiagnosticCode


def _event_loc(event_id: str) -> str:
    return f"/events/event[id={event_id}]"


def _object_loc(object_id: str) -> str:
    return f"/objects/object[id={object_id}]"


class _ModelChecker:
    def __init__(self, log: Log) -> None:
        self.log = log
        self.found: List[Diagnostic] = []

    def report(self, code: DiagnosticCode, location: str, message: str) -> None:
        self.found.append(Diagnostic.of(code, location, message))

    def run(self) -> List[Diagnostic]:
        self.check_declarations("event-type", self.log.event_types)
        self.check_declarations("object-type", self.log.object_types)
        self.check_ids()
        self.check_events()
        self.check_objects()
        self.check_relations(
            "e2o",
            self.log.e2o,
            self.log.has_event,
            Code.E2O_DANGLING_EVENT,
            Code.E2O_DANGLING_OBJECT,
            Code.E2O_DUPLICATE,
        )
        self.check_relations(
            "o2o",
            self.log.o2o,
            self.log.has_object,
            Code.O2O_DANGLING_SOURCE,
            Code.O2O_DANGLING_TARGET,
            Code.O2O_DUPLICATE,
        )
        return sort_diagnostics(self.found)

    def check_declarations(self, tag: str, decls: Sequence[TypeDeclaration]) -> None:
        names = Counter(decl.name for decl in decls)
        for name, count in names.items():
            if count > 1:
                self.report(
                    Code.DUPLICATE_TYPE_DECLARATION,
                    f"/{tag}s/{tag}[name={name}]",
                    f"{tag} {name!r} is declared {count} times",
                )
        owners: Dict[str, Set[str]] = defaultdict(set)
        for decl in decls:
            location = f"/{tag}s/{tag}[name={decl.name}]"
            attr_names = Counter(attr.name for attr in decl.attributes)
            for attr, count in attr_names.items():
                owners[attr].add(decl.name)
                if count > 1:
                    self.report(
                        Code.DUPLICATE_ATTRIBUTE_DECLARATION,
                        f"{location}/attributes/attribute[name={attr}]",
                        f"attribute {attr!r} is declared {count} times on {decl.name!r}",
                    )
                if attr in schema.RESERVED_COLUMNS:
                    self.report(
                        Code.RESERVED_ATTRIBUTE_NAME,
                        f"{location}/attributes/attribute[name={attr}]",
                        f"attribute {attr!r} collides with a reserved relational column",
                    )
        for attr, types in owners.items():
            if len(types) > 1:
                self.report(
                    Code.ATTR_NAME_SHARED,
                    f"/{tag}s",
                    f"attribute {attr!r} is declared on several types: "
                    + ", ".join(sorted(types)),
                )

    def check_ids(self) -> None:
        event_ids = Counter(event.id for event in self.log.events)
        object_ids = Counter(obj.id for obj in self.log.objects)
        for event_id, count in event_ids.items():
            if count > 1:
                self.report(
                    Code.DUPLICATE_EVENT_ID,
                    _event_loc(event_id),
                    f"event id {event_id!r} occurs {count} times",
                )
        for object_id, count in object_ids.items():
            if count > 1:
                self.report(
                    Code.DUPLICATE_OBJECT_ID,
                    _object_loc(object_id),
                    f"object id {object_id!r} occurs {count} times",
                )
        for shared in sorted(set(event_ids) & set(object_ids)):
            self.report(
                Code.ID_NOT_DISJOINT,
                _object_loc(shared),
                f"id {shared!r} names both an event and an object",
            )

    def check_events(self) -> None:
        for event in self.log.events:
            location = _event_loc(event.id)
            if is_infinity(event.time):
                self.report(
                    Code.EVENT_TIME_INVALID, location, "event time is INFINITY"
                )
            decl = self.log.event_type(event.type)
            if decl is None:
                self.report(
                    Code.EVENT_TYPE_UNDECLARED,
                    location,
                    f"event type {event.type!r} is not declared",
                )
                continue
            for name, value in event.attrs.items():
                attr_loc = f"{location}/attributes/attribute[name={name}]"
                self.check_finite(attr_loc, name, value)
                declared = decl.attribute(name)
                if declared is None:
                    self.report(
                        Code.EVENT_ATTR_UNDECLARED,
                        attr_loc,
                        f"attribute {name!r} is not declared on event type {event.type!r}",
                    )
                elif declared.kind is not value.kind:
                    self.report(
                        Code.ATTR_KIND_MISMATCH,
                        attr_loc,
                        f"attribute {name!r} holds a {value.kind.value} value, "
                        f"declared {declared.kind.value}",
                    )

    def check_finite(self, location: str, name: str, value: AttributeValue) -> None:
        if not value.is_finite():
            self.report(
                Code.ATTR_VALUE_NOT_FINITE,
                location,
                f"attribute {name!r} holds {value.payload!r}, which no exchange format can carry",
            )

    def check_objects(self) -> None:
        for obj in self.log.objects:
            location = _object_loc(obj.id)
            decl = self.log.object_type(obj.type)
            if decl is None:
                self.report(
                    Code.OBJECT_TYPE_UNDECLARED,
                    location,
                    f"object type {obj.type!r} is not declared",
                )
            seen: Counter[Tuple[str, object]] = Counter()
            for assignment in obj.assignments:
                attr_loc = f"{location}/attributes/attribute[name={assignment.attribute}]"
                seen[(assignment.attribute, assignment.time)] += 1
                self.check_finite(attr_loc, assignment.attribute, assignment.value)
                if is_infinity(assignment.time):
                    self.report(
                        Code.ASSIGNMENT_TIME_INVALID,
                        attr_loc,
                        f"assignment of {assignment.attribute!r} at INFINITY",
                    )
                if decl is None:
                    continue
                declared = decl.attribute(assignment.attribute)
                if declared is None:
                    self.report(
                        Code.OBJECT_ATTR_UNDECLARED,
                        attr_loc,
                        f"attribute {assignment.attribute!r} is not declared "
                        f"on object type {obj.type!r}",
                    )
                elif declared.kind is not assignment.value.kind:
                    self.report(
                        Code.ATTR_KIND_MISMATCH,
                        attr_loc,
                        f"attribute {assignment.attribute!r} holds a "
                        f"{assignment.value.kind.value} value, declared {declared.kind.value}",
                    )
            for (attribute, time), count in seen.items():
                if count > 1:
                    self.report(
                        Code.DUPLICATE_ASSIGNMENT,
                        f"{location}/attributes/attribute[name={attribute}]",
                        f"{count} assignments of {attribute!r} at {time}",
                    )

    def check_relations(
        self,
        tag: str,
        relations: Sequence[QualifiedRelation],
        source_exists: Callable[[str], bool],
        dangling_source: DiagnosticCode,
        dangling_target: DiagnosticCode,
        duplicate: DiagnosticCode,
    ) -> None:
        counts = Counter(rel.key() for rel in relations)
        for source, qualifier, target in counts:
            location = f"/{tag}[{source}|{qualifier}|{target}]"
            if not source_exists(source):
                self.report(dangling_source, location, f"source {source!r} does not exist")
            if not self.log.has_object(target):
                self.report(dangling_target, location, f"object {target!r} does not exist")
            if counts[(source, qualifier, target)] > 1:
                self.report(duplicate, location, "relation occurs more than once")


def validate_model(log: Log) -> List[Diagnostic]:
    """Check the log against the definition; an empty list means valid"""
    return _ModelChecker(log).run()


def connect_readonly(path: PathLike) -> sqlite3.Connection:
    """Open an existing database file read-only"""
    db_path = Path(path)
    if not db_path.is_file():
        msg = f"No such database file: {db_path}"
        raise OcelIOError(msg)
    try:
        conn = sqlite3.connect(f"{db_path.resolve().as_uri()}?mode=ro", uri=True)
    except sqlite3.Error as e:
        msg = f"Cannot open {db_path}: {e}"
        raise OcelIOError(msg) from e
    try:
        conn.execute("SELECT name FROM sqlite_master LIMIT 1").fetchall()
    except sqlite3.DatabaseError as e:
        conn.close()
        msg = f"{db_path} is not a database: {e}"
        raise NotADatabase(msg, str(db_path)) from e
    return conn


def _numbered(table: str) -> str:
    return (
        f"WITH numbered AS (SELECT ROW_NUMBER() OVER (ORDER BY rowid) AS ocel_row, * "
        f"FROM {schema.quote(table)})"
    )


class _LayoutChecker:
    def __init__(self, conn: sqlite3.Connection) -> None:
        self.conn = conn
        self.found: List[Diagnostic] = []
        self.tables: Dict[str, str] = {}

    def report(self, code: DiagnosticCode, table: str, row: Optional[int], message: str) -> None:
        location = table if row is None else f"{table}:{row}"
        self.found.append(Diagnostic.of(code, location, message))

    def query(self, sql: str, params: Iterable[object] = ()) -> List[Any]:
        return self.conn.execute(sql, tuple(params)).fetchall()

    def columns(self, table: str) -> List[Tuple[str, str]]:
        rows = self.query(f"PRAGMA table_info({schema.quote(table)})")
        return [(str(row[1]), str(row[2] or "")) for row in rows]

    def run(self) -> List[Diagnostic]:
        rows = self.query("SELECT name FROM sqlite_master WHERE type = 'table'")
        self.tables = {str(name).lower(): str(name) for (name,) in rows}
        missing = [t for t in schema.FIXED_TABLES if t not in self.tables]
        for table in missing:
            self.report(Code.MISSING_TABLE, table, None, f"required table {table!r} is missing")
        if missing:
            return sort_diagnostics(self.found)

        self.check_general(
            schema.EVENT,
            schema.EVENT_MAP_TYPE,
            schema.EVENT_TABLE_PREFIX,
            Code.DUPLICATE_EVENT_ID,
            is_event=True,
        )
        self.check_general(
            schema.OBJECT,
            schema.OBJECT_MAP_TYPE,
            schema.OBJECT_TABLE_PREFIX,
            Code.DUPLICATE_OBJECT_ID,
            is_event=False,
        )
        for (row, shared) in self.query(
            f"{_numbered(schema.OBJECT)} SELECT ocel_row, {schema.OCEL_ID} FROM numbered "
            f"WHERE EXISTS (SELECT 1 FROM {schema.EVENT} e "
            f"WHERE e.{schema.OCEL_ID} = numbered.{schema.OCEL_ID})"
        ):
            self.report(
                Code.ID_NOT_DISJOINT,
                schema.OBJECT,
                int(row),
                f"id {shared!r} names both an event and an object",
            )
        self.check_relation_table(
            schema.EVENT_OBJECT,
            (schema.OCEL_EVENT_ID, schema.EVENT, Code.E2O_DANGLING_EVENT),
            (schema.OCEL_OBJECT_ID, schema.OBJECT, Code.E2O_DANGLING_OBJECT),
            Code.E2O_DUPLICATE,
        )
        self.check_relation_table(
            schema.OBJECT_OBJECT,
            (schema.OCEL_SOURCE_ID, schema.OBJECT, Code.O2O_DANGLING_SOURCE),
            (schema.OCEL_TARGET_ID, schema.OBJECT, Code.O2O_DANGLING_TARGET),
            Code.O2O_DUPLICATE,
        )
        return sort_diagnostics(self.found)

    def duplicates(self, table: str, expressions: Sequence[str]) -> List[Tuple[int, str]]:
        """Rows repeating the values of an earlier row"""
        same = " AND ".join(f"m.{expr} IS n.{expr}" for expr in expressions)
        shown = " || '|' || ".join(f"n.{expr}" for expr in expressions)
        rows = self.query(
            f"{_numbered(table)} SELECT n.ocel_row, {shown} FROM numbered n "
            f"WHERE EXISTS (SELECT 1 FROM numbered m WHERE {same} "
            f"AND m.ocel_row < n.ocel_row)"
        )
        return [(int(row), str(value)) for row, value in rows]

    def check_general(
        self,
        general: str,
        map_table: str,
        prefix: str,
        duplicate_id: DiagnosticCode,
        is_event: bool,
    ) -> None:
        for row, name in self.duplicates(map_table, [schema.OCEL_TYPE]):
            self.report(Code.TYPE_MAP_DUPLICATE, map_table, row, f"type {name!r} is listed again")
        for row, name in self.duplicates(map_table, [schema.OCEL_TYPE_MAP]):
            self.report(
                Code.TYPE_MAP_NAME_COLLISION, map_table, row, f"mapped name {name!r} is reused"
            )
        for row, name in self.duplicates(general, [schema.OCEL_ID]):
            self.report(duplicate_id, general, row, f"id {name!r} is listed again")
        for row, type_name in self.query(
            f"{_numbered(general)} SELECT ocel_row, {schema.OCEL_TYPE} FROM numbered n "
            f"WHERE NOT EXISTS (SELECT 1 FROM {map_table} m "
            f"WHERE m.{schema.OCEL_TYPE} = n.{schema.OCEL_TYPE})"
        ):
            self.report(
                Code.TYPE_UNMAPPED,
                general,
                int(row),
                f"type {type_name!r} has no entry in {map_table}",
            )

        mapping = self.query(
            f"SELECT {schema.OCEL_TYPE}, {schema.OCEL_TYPE_MAP} FROM {map_table} ORDER BY rowid"
        )
        checked: Set[str] = set()
        for type_name, mapped in mapping:
            table_key = (prefix + str(mapped)).lower()
            if table_key in checked:
                continue
            checked.add(table_key)
            table = self.tables.get(table_key)
            if table is None:
                self.report(
                    Code.TYPE_TABLE_ABSENT,
                    map_table,
                    None,
                    f"table {prefix + str(mapped)!r} for type {type_name!r} does not exist",
                )
                continue
            self.check_type_table(general, table, str(type_name), is_event)

    def check_type_table(self, general: str, table: str, type_name: str, is_event: bool) -> None:
        columns = self.columns(table)
        names = {name for name, _ in columns}
        if schema.OCEL_ID not in names or schema.OCEL_TIME not in names:
            self.report(
                Code.TYPE_TABLE_MALFORMED,
                table,
                None,
                f"table {table!r} lacks {schema.OCEL_ID} or {schema.OCEL_TIME}",
            )
            return
        g_id = f"g.{schema.OCEL_ID}"
        n_id = f"n.{schema.OCEL_ID}"
        for row, ident in self.query(
            f"{_numbered(table)} SELECT ocel_row, {schema.OCEL_ID} FROM numbered n "
            f"WHERE NOT EXISTS (SELECT 1 FROM {general} g WHERE {g_id} = {n_id})"
        ):
            self.report(
                Code.TYPE_TABLE_ORPHAN,
                table,
                int(row),
                f"id {ident!r} is absent from table {general!r}",
            )
        for row, ident, actual in self.query(
            f"{_numbered(table)} SELECT n.ocel_row, {n_id}, g.{schema.OCEL_TYPE} "
            f"FROM numbered n JOIN {general} g ON {g_id} = {n_id} "
            f"WHERE g.{schema.OCEL_TYPE} IS NOT ?",
            (type_name,),
        ):
            self.report(
                Code.TYPE_TABLE_MISROUTED,
                table,
                int(row),
                f"id {ident!r} has type {actual!r} but sits in the table of {type_name!r}",
            )
        for row, ident in self.query(
            f"{_numbered(general)} SELECT ocel_row, {schema.OCEL_ID} FROM numbered g "
            f"WHERE g.{schema.OCEL_TYPE} = ? AND NOT EXISTS "
            f"(SELECT 1 FROM {schema.quote(table)} n WHERE {n_id} = {g_id})",
            (type_name,),
        ):
            self.report(
                Code.TYPE_TABLE_MISSING_ROW,
                general,
                int(row),
                f"id {ident!r} has no row in table {table!r}",
            )
        if is_event:
            for row, ident in self.duplicates(table, [schema.OCEL_ID]):
                self.report(Code.DUPLICATE_EVENT_ID, table, row, f"id {ident!r} is listed again")
        self.check_type_rows(table, names, is_event)

    def check_type_rows(self, table: str, names: Set[str], is_event: bool) -> None:
        has_changed = not is_event and schema.OCEL_CHANGED_FIELD in names
        changed = schema.OCEL_CHANGED_FIELD if has_changed else "NULL"
        attributes = names - schema.RESERVED_COLUMNS
        time_code = Code.EVENT_TIME_INVALID if is_event else Code.ASSIGNMENT_TIME_INVALID
        for row, ident, text, changed_field in self.query(
            f"{_numbered(table)} SELECT ocel_row, {schema.OCEL_ID}, {schema.OCEL_TIME}, "
            f"{changed} FROM numbered ORDER BY ocel_row"
        ):
            row = int(row)
            try:
                time = parse_timestamp(str(text)) if text is not None else None
            except TimestampError:
                time = None
            if time is None:
                self.report(time_code, table, row, f"unparseable {schema.OCEL_TIME} {text!r}")
            if is_event:
                continue
            if changed_field:
                if changed_field not in attributes:
                    self.report(
                        Code.CHANGED_FIELD_UNKNOWN,
                        table,
                        row,
                        f"{schema.OCEL_CHANGED_FIELD} names unknown column {changed_field!r}",
                    )
            elif time is not None and time != ZERO:
                self.report(
                    Code.EPOCH_NONCANONICAL,
                    table,
                    row,
                    f"initial row of {ident!r} is at {text!r}, not at the epoch",
                )

    def check_relation_table(
        self,
        table: str,
        source: Tuple[str, str, DiagnosticCode],
        target: Tuple[str, str, DiagnosticCode],
        duplicate: DiagnosticCode,
    ) -> None:
        for column, referenced, code in (source, target):
            for row, ident in self.query(
                f"{_numbered(table)} SELECT ocel_row, {column} FROM numbered n "
                f"WHERE NOT EXISTS (SELECT 1 FROM {referenced} r "
                f"WHERE r.{schema.OCEL_ID} = n.{column})"
            ):
                self.report(
                    code,
                    table,
                    int(row),
                    f"{column} {ident!r} is absent from table {referenced!r}",
                )
        for row, triple in self.duplicates(
            table, [source[0], target[0], schema.OCEL_QUALIFIER]
        ):
            self.report(duplicate, table, row, f"triple {triple!r} is listed again")


def validate_relational_layout(db: sqlite3.Connection | PathLike) -> List[Diagnostic]:
    """Re-check the relational constraints with plain queries"""
    if isinstance(db, sqlite3.Connection):
        return _LayoutChecker(db).run()
    with closing(connect_readonly(db)) as conn:
        try:
            return _LayoutChecker(conn).run()
        except sqlite3.DatabaseError as e:
            msg = f"{db} cannot be queried: {e}"
            raise NotADatabase(msg, str(db)) from e
