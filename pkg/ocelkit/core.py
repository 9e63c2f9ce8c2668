"""Queries over the log tuple and the builder that produces it"""

from __future__ import annotations

import logging
from datetime import datetime
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .models import (
    AttributeDeclaration,
    AttributeKind,
    AttributeValue,
    Event,
    Log,
    ObjectAttributeAssignment,
    OcelObject,
    QualifiedRelation,
    RelatedObject,
    TypeDeclaration,
)
from .timestamps import INFINITY, ZERO, format_timestamp, to_timestamp
from .utils import InvalidLog

__all__ = (
    "LogBuilder",
    "assignment_order",
    "eaval",
    "event_attribute_order",
    "event_types",
    "log_stats",
    "logs_equal",
    "oaval_at",
    "oaval_final",
    "object_types",
    "refuse_non_finite",
    "relobj_event",
    "relobj_object",
    "sorted_events",
    "sorted_objects",
    "sorted_relations",
)

logger = logging.getLogger(__name__)

AttributeSpec = Iterable[Tuple[str, "AttributeKind | str"]]


def event_types(log: Log) -> set[str]:
    """Types of the events that occur (declared-but-unused types excluded)"""
    return {event.type for event in log.events}


def object_types(log: Log) -> set[str]:
    return {obj.type for obj in log.objects}


def eaval(log: Log, event_id: str, attribute: str) -> Optional[AttributeValue]:
    """Value of an event attribute; None stands for an unset attribute"""
    return log.event(event_id).attrs.get(attribute)


def oaval_at(
    log: Log, object_id: str, attribute: str, t: datetime
) -> Optional[AttributeValue]:
    """Latest value assigned at or before `t`; None when nothing was assigned yet"""
    obj = log.object(object_id)
    t = to_timestamp(t)
    latest: Optional[ObjectAttributeAssignment] = None
    for assignment in obj.assignments:
        if assignment.attribute != attribute or assignment.time > t:
            continue
        if latest is None or assignment.time >= latest.time:
            latest = assignment
    return latest.value if latest is not None else None


def oaval_final(log: Log, object_id: str, attribute: str) -> Optional[AttributeValue]:
    return oaval_at(log, object_id, attribute, INFINITY)


def relobj_event(log: Log, event_id: str) -> List[RelatedObject]:
    """(object id, qualifier) pairs of an event, in relation order"""
    log.event(event_id)
    return log.related_objects(event_id)


def relobj_object(log: Log, object_id: str) -> List[RelatedObject]:
    """Outgoing object-to-object pairs of an object, in relation order"""
    log.object(object_id)
    return log.linked_objects(object_id)


def sorted_events(log: Log) -> List[Event]:
    """Writer order for events: by time, then id"""
    return sorted(log.events, key=lambda e: (e.time, e.id))


def sorted_objects(log: Log) -> List[OcelObject]:
    return sorted(log.objects, key=lambda o: o.id)


def sorted_relations(pairs: Iterable[RelatedObject]) -> List[RelatedObject]:
    return sorted(set(pairs))


def event_attribute_order(event: Event, decl: Optional[TypeDeclaration]) -> List[str]:
    """Declared attributes first, in declaration order, then the rest by name"""
    declared = decl.attribute_names if decl is not None else []
    first = [name for name in declared if name in event.attrs]
    rest = sorted(name for name in event.attrs if name not in declared)
    return first + rest


def assignment_order(
    obj: OcelObject, decl: Optional[TypeDeclaration]
) -> List[ObjectAttributeAssignment]:
    """Assignments by time; ties follow the declaration order of the attributes"""
    declared = decl.attribute_names if decl is not None else []

    def key(a: ObjectAttributeAssignment) -> Tuple[datetime, int, str]:
        index = declared.index(a.attribute) if a.attribute in declared else len(declared)
        return (a.time, index, a.attribute)

    return sorted(obj.assignments, key=key)


def _declarations_key(decls: Iterable[TypeDeclaration]) -> FrozenSet[Any]:
    return frozenset(
        (decl.name, frozenset((a.name, a.kind.value) for a in decl.attributes))
        for decl in decls
    )


def _canonical(log: Log) -> Tuple[FrozenSet[Any], ...]:
    events = frozenset(
        (
            e.id,
            e.type,
            e.time,
            frozenset((name, value.key()) for name, value in e.attrs.items()),
        )
        for e in log.events
    )
    objects = frozenset(
        (
            o.id,
            o.type,
            frozenset((a.attribute, a.time, a.value.key()) for a in o.assignments),
        )
        for o in log.objects
    )
    return (
        _declarations_key(log.event_types),
        _declarations_key(log.object_types),
        events,
        objects,
        frozenset(rel.key() for rel in log.e2o),
        frozenset(rel.key() for rel in log.o2o),
    )


def logs_equal(a: Log, b: Log) -> bool:
    """Equality of the mathematical tuple, ignoring every ordering"""
    return _canonical(a) == _canonical(b)


def log_stats(log: Log) -> Dict[str, Any]:
    times = [event.time for event in log.events]
    time_span = (
        {"min": format_timestamp(min(times)), "max": format_timestamp(max(times))}
        if times
        else None
    )
    return {
        "events": len(log.events),
        "objects": len(log.objects),
        "eventTypes": len(event_types(log)),
        "objectTypes": len(object_types(log)),
        "e2oCount": len({rel.key() for rel in log.e2o}),
        "o2oCount": len({rel.key() for rel in log.o2o}),
        "timeSpan": time_span,
    }


def refuse_non_finite(log: Log, target: str) -> None:
    """Raise InvalidLog for a NaN or infinite float, which no format can carry"""
    owned = [
        (f"event {e.id!r}", name, value)
        for e in log.events
        for name, value in e.attrs.items()
    ] + [
        (f"object {o.id!r}", a.attribute, a.value)
        for o in log.objects
        for a in o.assignments
    ]
    for owner, name, value in owned:
        if not value.is_finite():
            msg = f"Cannot write {target}: {owner} has {name!r} = {value.payload!r}"
            raise InvalidLog(msg)


class LogBuilder:
    """Single-owner mutable staging area for a Log

    Not meant to be shared; call `build()` to obtain the immutable log.
    """

    def __init__(self) -> None:
        self._event_types: List[TypeDeclaration] = []
        self._object_types: List[TypeDeclaration] = []
        self._events: List[Event] = []
        self._objects: List[OcelObject] = []
        self._assignments: List[List[ObjectAttributeAssignment]] = []
        self._last_object: Dict[str, int] = {}
        self._e2o: Dict[Tuple[str, str, str], QualifiedRelation] = {}
        self._o2o: Dict[Tuple[str, str, str], QualifiedRelation] = {}

    @staticmethod
    def _declaration(name: str, attributes: AttributeSpec) -> TypeDeclaration:
        return TypeDeclaration(
            name=name,
            attributes=tuple(
                AttributeDeclaration(name=attr, kind=AttributeKind(kind))
                for attr, kind in attributes
            ),
        )

    def add_event_type(self, name: str, attributes: AttributeSpec = ()) -> LogBuilder:
        self._event_types.append(self._declaration(name, attributes))
        return self

    def add_object_type(self, name: str, attributes: AttributeSpec = ()) -> LogBuilder:
        self._object_types.append(self._declaration(name, attributes))
        return self

    @staticmethod
    def _find(decls: List[TypeDeclaration], name: str) -> Optional[TypeDeclaration]:
        return next((d for d in decls if d.name == name), None)

    @staticmethod
    def _value(decl: Optional[TypeDeclaration], attribute: str, raw: Any) -> AttributeValue:
        if isinstance(raw, AttributeValue):
            return raw
        declared = decl.attribute(attribute) if decl is not None else None
        if declared is None:
            return AttributeValue.infer(raw)
        return AttributeValue.of(declared.kind, raw)

    def add_event(
        self,
        event_id: str,
        event_type: str,
        time: datetime,
        attrs: Mapping[str, Any] | None = None,
    ) -> LogBuilder:
        decl = self._find(self._event_types, event_type)
        values = {
            name: self._value(decl, name, raw) for name, raw in (attrs or {}).items()
        }
        self._events.append(
            Event(id=event_id, type=event_type, time=time, attrs=values)
        )
        return self

    def add_object(self, object_id: str, object_type: str) -> LogBuilder:
        self._last_object[object_id] = len(self._objects)
        # assignments are attached in build()
        self._objects.append(OcelObject(id=object_id, type=object_type))
        self._assignments.append([])
        return self

    def assign(
        self,
        object_id: str,
        attribute: str,
        value: Any,
        time: datetime = ZERO,
    ) -> LogBuilder:
        """Record a value for the most recently added object with this id"""
        index = self._last_object.get(object_id)
        if index is None:
            msg = f"assign() for an object that was not added: {object_id!r}"
            raise KeyError(msg)
        decl = self._find(self._object_types, self._objects[index].type)
        self._assignments[index].append(
            ObjectAttributeAssignment(
                attribute=attribute,
                time=time,
                value=self._value(decl, attribute, value),
            )
        )
        return self

    def relate_event(self, event_id: str, object_id: str, qualifier: str) -> LogBuilder:
        key = (event_id, qualifier, object_id)
        self._e2o.setdefault(
            key, QualifiedRelation(source=event_id, qualifier=qualifier, target=object_id)
        )
        return self

    def relate_objects(self, source_id: str, target_id: str, qualifier: str) -> LogBuilder:
        key = (source_id, qualifier, target_id)
        self._o2o.setdefault(
            key, QualifiedRelation(source=source_id, qualifier=qualifier, target=target_id)
        )
        return self

    def build(self) -> Log:
        objects = tuple(
            obj.model_copy(update={"assignments": tuple(assignments)})
            for obj, assignments in zip(self._objects, self._assignments)
        )
        log = Log(
            event_types=tuple(self._event_types),
            object_types=tuple(self._object_types),
            events=tuple(self._events),
            objects=objects,
            e2o=tuple(self._e2o.values()),
            o2o=tuple(self._o2o.values()),
        )
        logger.debug(
            "Built log with %d events, %d objects", len(log.events), len(log.objects)
        )
        return log
