"""JSON exchange format

The document structure is checked by the strict pydantic models below; kinds
of attribute values are checked afterwards against the declarations.
"""

from __future__ import annotations

import json
import logging
from datetime import datetime
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, StrictStr, ValidationError, field_validator
from typing_extensions import Annotated

from .core import (
    LogBuilder,
    assignment_order,
    event_attribute_order,
    refuse_non_finite,
    sorted_events,
    sorted_objects,
    sorted_relations,
)
from .diagnostics import DiagnosticCode
from .models import AttributeKind, AttributeValue, Log, RelatedObject, TypeDeclaration
from .timestamps import ZERO, format_timestamp, parse_timestamp
from .utils import (
    InvalidLog,
    JsonSyntaxError,
    ParsedJson,
    SchemaViolation,
    Sink,
    Source,
    TimestampError,
    ValueParseError,
    read_source,
    write_sink,
)

__all__ = ("read_json", "write_json")

logger = logging.getLogger(__name__)

KindName = Literal["string", "time", "integer", "float", "boolean"]
NonEmptyStr = Annotated[StrictStr, Field(min_length=1)]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class _AttributeDecl(_Document):
    name: NonEmptyStr
    type: KindName


class _TypeDecl(_Document):
    name: StrictStr
    attributes: List[_AttributeDecl] = []


class _Relationship(_Document):
    objectId: StrictStr
    qualifier: StrictStr


class _ValueEntry(_Document):
    name: NonEmptyStr
    value: Any

    @field_validator("value")
    @classmethod
    def _scalar(cls, value: Any) -> Any:
        if not isinstance(value, (bool, int, float, str)):
            msg = "value must be a string, number or boolean"
            raise ValueError(msg)
        return value


class _AssignmentEntry(_ValueEntry):
    time: Optional[StrictStr] = None


class _EventEntry(_Document):
    id: NonEmptyStr
    type: StrictStr
    time: StrictStr
    attributes: List[_ValueEntry] = []
    relationships: List[_Relationship] = []


class _ObjectEntry(_Document):
    id: NonEmptyStr
    type: StrictStr
    attributes: List[_AssignmentEntry] = []
    relationships: List[_Relationship] = []


class _LogDocument(_Document):
    events: List[_EventEntry] = []
    eventTypes: List[_TypeDecl] = []
    objects: List[_ObjectEntry] = []
    objectTypes: List[_TypeDecl] = []


def json_pointer(loc: Sequence[Union[str, int]]) -> str:
    """RFC 6901 pointer for a pydantic error location"""
    return "".join("/" + str(part).replace("~", "~0").replace("/", "~1") for part in loc)


def _declaration_record(decl: TypeDeclaration) -> Dict[str, Any]:
    return {
        "name": decl.name,
        "attributes": [{"name": a.name, "type": a.kind.value} for a in decl.attributes],
    }


def _relationship_records(pairs: Sequence[RelatedObject]) -> List[Dict[str, str]]:
    return [
        {"objectId": object_id, "qualifier": qualifier}
        for object_id, qualifier in sorted_relations(pairs)
    ]


def _to_document(log: Log) -> Dict[str, Any]:
    events = []
    for event in sorted_events(log):
        events.append(
            {
                "id": event.id,
                "type": event.type,
                "time": format_timestamp(event.time),
                "attributes": [
                    {"name": name, "value": event.attrs[name].to_json()}
                    for name in event_attribute_order(event, log.event_type(event.type))
                ],
                "relationships": _relationship_records(log.related_objects(event.id)),
            }
        )
    objects = []
    for obj in sorted_objects(log):
        objects.append(
            {
                "id": obj.id,
                "type": obj.type,
                "attributes": [
                    {
                        "name": a.attribute,
                        "time": format_timestamp(a.time),
                        "value": a.value.to_json(),
                    }
                    for a in assignment_order(obj, log.object_type(obj.type))
                ],
                "relationships": _relationship_records(log.linked_objects(obj.id)),
            }
        )
    return {
        "events": events,
        "eventTypes": [_declaration_record(d) for d in log.event_types],
        "objects": objects,
        "objectTypes": [_declaration_record(d) for d in log.object_types],
    }


def write_json(log: Log, sink: Sink) -> None:
    """Serialize the log as a JSON document (UTF-8, two-space indent)"""
    refuse_non_finite(log, "JSON")
    try:
        text = json.dumps(_to_document(log), indent=2, ensure_ascii=False, allow_nan=False)
    except TimestampError as e:
        raise InvalidLog(f"Cannot write JSON: {e}") from e
    write_sink(sink, (text + "\n").encode("utf-8"))
    logger.debug("Wrote JSON log with %d events", len(log.events))


def _coerce(kind: Optional[AttributeKind], raw: Any, pointer: str) -> AttributeValue:
    """Turn a JSON scalar into a value of the declared kind (inferred if undeclared)"""
    if kind is None:
        return AttributeValue.infer(raw)
    is_number = isinstance(raw, (int, float)) and not isinstance(raw, bool)
    try:
        if kind is AttributeKind.STRING and isinstance(raw, str):
            return AttributeValue.of(kind, raw)
        if kind is AttributeKind.TIME and isinstance(raw, str):
            return AttributeValue.of(kind, parse_timestamp(raw))
        if kind is AttributeKind.BOOLEAN and isinstance(raw, bool):
            return AttributeValue.of(kind, raw)
        if kind is AttributeKind.FLOAT and is_number:
            return AttributeValue.of(kind, float(raw))
        if kind is AttributeKind.INTEGER and is_number and float(raw).is_integer():
            return AttributeValue.of(kind, int(raw))
    except (TimestampError, OverflowError, ValueError) as e:
        msg = f"cannot read {raw!r} as {kind.value}: {e}"
        raise ValueParseError(msg, pointer) from e
    msg = f"{raw!r} is not a {kind.value} value"
    raise ValueParseError(msg, pointer)


def _time(text: str, pointer: str, code: DiagnosticCode) -> datetime:
    try:
        return parse_timestamp(text)
    except TimestampError as e:
        raise ValueParseError(str(e), pointer, code=code) from e


def _kinds(decls: List[_TypeDecl]) -> Dict[str, Dict[str, AttributeKind]]:
    kinds: Dict[str, Dict[str, AttributeKind]] = {}
    for decl in decls:
        kinds.setdefault(
            decl.name, {a.name: AttributeKind(a.type) for a in decl.attributes}
        )
    return kinds


def _build(document: _LogDocument) -> Log:
    builder = LogBuilder()
    for decl in document.eventTypes:
        builder.add_event_type(decl.name, [(a.name, a.type) for a in decl.attributes])
    for decl in document.objectTypes:
        builder.add_object_type(decl.name, [(a.name, a.type) for a in decl.attributes])
    event_kinds = _kinds(document.eventTypes)
    object_kinds = _kinds(document.objectTypes)

    for i, event in enumerate(document.events):
        pointer = f"/events/{i}"
        kinds = event_kinds.get(event.type, {})
        values = {
            entry.name: _coerce(
                kinds.get(entry.name), entry.value, f"{pointer}/attributes/{j}/value"
            )
            for j, entry in enumerate(event.attributes)
        }
        time = _time(event.time, f"{pointer}/time", DiagnosticCode.EVENT_TIME_INVALID)
        builder.add_event(event.id, event.type, time, values)
        for rel in event.relationships:
            builder.relate_event(event.id, rel.objectId, rel.qualifier)

    for i, obj in enumerate(document.objects):
        pointer = f"/objects/{i}"
        kinds = object_kinds.get(obj.type, {})
        builder.add_object(obj.id, obj.type)
        for j, entry in enumerate(obj.attributes):
            entry_pointer = f"{pointer}/attributes/{j}"
            time = (
                _time(entry.time, f"{entry_pointer}/time", DiagnosticCode.ASSIGNMENT_TIME_INVALID)
                if entry.time is not None
                else ZERO
            )
            value = _coerce(kinds.get(entry.name), entry.value, f"{entry_pointer}/value")
            builder.assign(obj.id, entry.name, value, time)
        for rel in obj.relationships:
            builder.relate_objects(obj.id, rel.objectId, rel.qualifier)
    return builder.build()


def read_json(source: Source) -> Log:
    """Parse a JSON document into a log"""
    data = read_source(source)
    try:
        parsed: ParsedJson = json.loads(data)
    except UnicodeDecodeError as e:
        raise JsonSyntaxError(f"Malformed JSON: {e}") from e
    except json.JSONDecodeError as e:
        raise JsonSyntaxError(f"Malformed JSON: {e.msg}", f"{e.lineno}:{e.colno}") from e
    try:
        document = _LogDocument.model_validate(parsed)
    except ValidationError as e:
        first = e.errors()[0]
        pointer = json_pointer(first["loc"])
        raise SchemaViolation(f"{first['msg']} at {pointer or '/'}", pointer) from e
    log = _build(document)
    logger.debug("Read JSON log with %d events, %d objects", len(log.events), len(log.objects))
    return log
