from __future__ import annotations

import math
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional, Set, Tuple

import pydantic
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator
from pydantic import model_validator
from typing_extensions import Self

from .timestamps import ZERO, format_timestamp, parse_timestamp, to_timestamp
from .utils import UnknownEvent, UnknownObject

__all__ = (
    "AttributeDeclaration",
    "AttributeKind",
    "AttributeValue",
    "BaseOcelModel",
    "Event",
    "Log",
    "ObjectAttributeAssignment",
    "OcelObject",
    "QualifiedRelation",
    "RelatedObject",
    "TypeDeclaration",
)

# Note: `model_post_init`, `field_validator` and frozen models need `pydantic>=2`
_PYDANTIC_MAJOR_VERSION = int(pydantic.__version__.split(".")[0])
if _PYDANTIC_MAJOR_VERSION < 2:
    msg = f"Unsupported Pydantic version: {pydantic.__version__}"
    raise ValueError(msg)

RelatedObject = Tuple[str, str]

_BOOLEAN_TEXT = {"true": True, "false": False, "1": True, "0": False}


class BaseOcelModel(BaseModel):
    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        arbitrary_types_allowed=False,
    )


class AttributeKind(str, Enum):
    STRING = "string"
    TIME = "time"
    INTEGER = "integer"
    FLOAT = "float"
    BOOLEAN = "boolean"


def _payload_matches(kind: AttributeKind, payload: Any) -> bool:
    if kind is AttributeKind.STRING:
        return isinstance(payload, str)
    if kind is AttributeKind.INTEGER:
        return isinstance(payload, int) and not isinstance(payload, bool)
    if kind is AttributeKind.FLOAT:
        return isinstance(payload, float)
    if kind is AttributeKind.BOOLEAN:
        return isinstance(payload, bool)
    return isinstance(payload, datetime) and payload.tzinfo is not None


class AttributeValue(BaseOcelModel):
    """Tagged value: `kind` always agrees with the Python type of `payload`"""

    kind: AttributeKind
    payload: Any

    @model_validator(mode="after")
    def _check_payload(self) -> Self:
        if not _payload_matches(self.kind, self.payload):
            msg = f"payload {self.payload!r} is not a valid {self.kind.value} value"
            raise ValueError(msg)
        return self

    @classmethod
    def of(cls, kind: AttributeKind | str, raw: Any) -> AttributeValue:
        """Coerce a raw Python value into the given kind"""
        kind = AttributeKind(kind)
        if kind is AttributeKind.FLOAT and isinstance(raw, int) and not isinstance(raw, bool):
            raw = float(raw)
        elif kind is AttributeKind.INTEGER and isinstance(raw, float) and raw.is_integer():
            raw = int(raw)
        elif kind is AttributeKind.TIME and isinstance(raw, datetime):
            raw = to_timestamp(raw)
        return cls(kind=kind, payload=raw)

    @classmethod
    def infer(cls, raw: Any) -> AttributeValue:
        """Tag a raw Python value with the kind its type implies"""
        if isinstance(raw, AttributeValue):
            return raw
        if isinstance(raw, bool):
            return cls(kind=AttributeKind.BOOLEAN, payload=raw)
        if isinstance(raw, int):
            return cls(kind=AttributeKind.INTEGER, payload=raw)
        if isinstance(raw, float):
            return cls(kind=AttributeKind.FLOAT, payload=raw)
        if isinstance(raw, datetime):
            return cls(kind=AttributeKind.TIME, payload=to_timestamp(raw))
        if isinstance(raw, str):
            return cls(kind=AttributeKind.STRING, payload=raw)
        msg = f"Unsupported attribute value type: {type(raw).__name__}"
        raise TypeError(msg)

    @classmethod
    def from_text(cls, kind: AttributeKind | str, text: str) -> AttributeValue:
        """Parse the text form written by `to_text`

        Raises ValueError (or TimestampError for `time`) on malformed text.
        """
        kind = AttributeKind(kind)
        if kind is AttributeKind.STRING:
            return cls(kind=kind, payload=text)
        stripped = text.strip()
        if kind is AttributeKind.INTEGER:
            return cls(kind=kind, payload=int(stripped))
        if kind is AttributeKind.FLOAT:
            return cls(kind=kind, payload=float(stripped))
        if kind is AttributeKind.BOOLEAN:
            lowered = stripped.lower()
            if lowered not in _BOOLEAN_TEXT:
                msg = f"not a boolean: {text!r}"
                raise ValueError(msg)
            return cls(kind=kind, payload=_BOOLEAN_TEXT[lowered])
        return cls(kind=kind, payload=parse_timestamp(stripped))

    def key(self) -> Tuple[str, Any]:
        return (self.kind.value, self.payload)

    def to_text(self) -> str:
        """Text form used inside XML elements"""
        if self.kind is AttributeKind.BOOLEAN:
            return "true" if self.payload else "false"
        if self.kind is AttributeKind.TIME:
            return format_timestamp(self.payload)
        if self.kind is AttributeKind.FLOAT:
            return repr(self.payload)
        return str(self.payload)

    def to_json(self) -> Any:
        if self.kind is AttributeKind.TIME:
            return format_timestamp(self.payload)
        return self.payload

    def is_finite(self) -> bool:
        return not (self.kind is AttributeKind.FLOAT and not math.isfinite(self.payload))


class AttributeDeclaration(BaseOcelModel):
    name: str = Field(min_length=1)
    kind: AttributeKind


class TypeDeclaration(BaseOcelModel):
    name: str
    attributes: Tuple[AttributeDeclaration, ...] = ()

    def attribute(self, name: str) -> Optional[AttributeDeclaration]:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None

    @property
    def attribute_names(self) -> List[str]:
        return [attr.name for attr in self.attributes]


class Event(BaseOcelModel):
    id: str = Field(min_length=1)
    type: str
    time: datetime
    attrs: Dict[str, AttributeValue] = Field(default_factory=dict)

    @field_validator("time")
    @classmethod
    def _normalize_time(cls, value: datetime) -> datetime:
        return to_timestamp(value)


class ObjectAttributeAssignment(BaseOcelModel):
    attribute: str = Field(min_length=1)
    time: datetime = ZERO
    value: AttributeValue

    @field_validator("time")
    @classmethod
    def _normalize_time(cls, value: datetime) -> datetime:
        return to_timestamp(value)


class OcelObject(BaseOcelModel):
    id: str = Field(min_length=1)
    type: str
    assignments: Tuple[ObjectAttributeAssignment, ...] = ()

    def history(self, attribute: str) -> List[ObjectAttributeAssignment]:
        """Assignments of one attribute in time order"""
        return sorted(
            (a for a in self.assignments if a.attribute == attribute),
            key=lambda a: a.time,
        )


class QualifiedRelation(BaseOcelModel):
    source: str
    qualifier: str
    target: str

    def key(self) -> Tuple[str, str, str]:
        return (self.source, self.qualifier, self.target)


def _pairs_by_source(
    relations: Tuple[QualifiedRelation, ...]
) -> Dict[str, List[RelatedObject]]:
    """(target, qualifier) pairs per source, first occurrence order, no repeats"""
    pairs: Dict[str, List[RelatedObject]] = {}
    seen: Set[Tuple[str, str, str]] = set()
    for rel in relations:
        if rel.key() in seen:
            continue
        seen.add(rel.key())
        pairs.setdefault(rel.source, []).append((rel.target, rel.qualifier))
    return pairs


class Log(BaseOcelModel):
    """The object-centric event log tuple; immutable once built"""

    event_types: Tuple[TypeDeclaration, ...] = ()
    object_types: Tuple[TypeDeclaration, ...] = ()
    events: Tuple[Event, ...] = ()
    objects: Tuple[OcelObject, ...] = ()
    e2o: Tuple[QualifiedRelation, ...] = ()
    o2o: Tuple[QualifiedRelation, ...] = ()

    # The first occurrence wins when ids repeat; validation reports the repeats.
    _events_by_id: Dict[str, Event] = PrivateAttr(default_factory=dict)
    _objects_by_id: Dict[str, OcelObject] = PrivateAttr(default_factory=dict)
    _event_types_by_name: Dict[str, TypeDeclaration] = PrivateAttr(default_factory=dict)
    _object_types_by_name: Dict[str, TypeDeclaration] = PrivateAttr(default_factory=dict)
    _e2o_by_event: Dict[str, List[RelatedObject]] = PrivateAttr(default_factory=dict)
    _o2o_by_source: Dict[str, List[RelatedObject]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        for event in self.events:
            self._events_by_id.setdefault(event.id, event)
        for obj in self.objects:
            self._objects_by_id.setdefault(obj.id, obj)
        for decl in self.event_types:
            self._event_types_by_name.setdefault(decl.name, decl)
        for decl in self.object_types:
            self._object_types_by_name.setdefault(decl.name, decl)
        self._e2o_by_event.update(_pairs_by_source(self.e2o))
        self._o2o_by_source.update(_pairs_by_source(self.o2o))

    def event(self, event_id: str) -> Event:
        try:
            return self._events_by_id[event_id]
        except KeyError:
            raise UnknownEvent(event_id) from None

    def object(self, object_id: str) -> OcelObject:
        try:
            return self._objects_by_id[object_id]
        except KeyError:
            raise UnknownObject(object_id) from None

    def has_event(self, event_id: str) -> bool:
        return event_id in self._events_by_id

    def has_object(self, object_id: str) -> bool:
        return object_id in self._objects_by_id

    def event_type(self, name: str) -> Optional[TypeDeclaration]:
        return self._event_types_by_name.get(name)

    def object_type(self, name: str) -> Optional[TypeDeclaration]:
        return self._object_types_by_name.get(name)

    def related_objects(self, event_id: str) -> List[RelatedObject]:
        return list(self._e2o_by_event.get(event_id, ()))

    def linked_objects(self, object_id: str) -> List[RelatedObject]:
        return list(self._o2o_by_source.get(object_id, ()))
