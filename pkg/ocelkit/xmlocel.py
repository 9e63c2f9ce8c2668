"""XML exchange format"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from datetime import datetime
from typing import AbstractSet, Dict, Iterable, Iterator, List, Tuple

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
from .models import (
    AttributeKind,
    AttributeValue,
    Log,
    TypeDeclaration,
)
from .timestamps import ZERO, format_timestamp, parse_timestamp
from .utils import (
    InvalidLog,
    SchemaViolation,
    Sink,
    Source,
    TimestampError,
    ValueParseError,
    XmlSyntaxError,
    read_source,
    schema_errors,
    write_sink,
)

__all__ = ("read_xml", "write_xml")

logger = logging.getLogger(__name__)

LOG = "log"
OBJECT_TYPES = "object-types"
EVENT_TYPES = "event-types"
EVENTS = "events"
OBJECTS = "objects"
OBJECT_TYPE = "object-type"
EVENT_TYPE = "event-type"
EVENT = "event"
OBJECT = "object"
ATTRIBUTES = "attributes"
ATTRIBUTE = "attribute"
RELOBJ = "relobj"


def _append_relobjs(parent: ET.Element, pairs: List[Tuple[str, str]]) -> None:
    container = ET.SubElement(parent, OBJECTS)
    for object_id, qualifier in pairs:
        ET.SubElement(container, RELOBJ, {"object-id": object_id, "qualifier": qualifier})


def _append_declarations(
    root: ET.Element, container_tag: str, tag: str, decls: Iterable[TypeDeclaration]
) -> None:
    container = ET.SubElement(root, container_tag)
    for decl in decls:
        element = ET.SubElement(container, tag, {"name": decl.name})
        attributes = ET.SubElement(element, ATTRIBUTES)
        for attr in decl.attributes:
            ET.SubElement(attributes, ATTRIBUTE, {"name": attr.name, "type": attr.kind.value})


def _to_element(log: Log) -> ET.Element:
    root = ET.Element(LOG)
    _append_declarations(root, OBJECT_TYPES, OBJECT_TYPE, log.object_types)
    _append_declarations(root, EVENT_TYPES, EVENT_TYPE, log.event_types)

    events = ET.SubElement(root, EVENTS)
    for event in sorted_events(log):
        element = ET.SubElement(
            events,
            EVENT,
            {"id": event.id, "type": event.type, "time": format_timestamp(event.time)},
        )
        _append_relobjs(element, sorted_relations(log.related_objects(event.id)))
        attributes = ET.SubElement(element, ATTRIBUTES)
        for name in event_attribute_order(event, log.event_type(event.type)):
            value = ET.SubElement(attributes, ATTRIBUTE, {"name": name})
            value.text = event.attrs[name].to_text()

    objects = ET.SubElement(root, OBJECTS)
    for obj in sorted_objects(log):
        element = ET.SubElement(objects, OBJECT, {"id": obj.id, "type": obj.type})
        attributes = ET.SubElement(element, ATTRIBUTES)
        for assignment in assignment_order(obj, log.object_type(obj.type)):
            value = ET.SubElement(
                attributes,
                ATTRIBUTE,
                {"name": assignment.attribute, "time": format_timestamp(assignment.time)},
            )
            value.text = assignment.value.to_text()
        _append_relobjs(element, sorted_relations(log.linked_objects(obj.id)))
    return root


def write_xml(log: Log, sink: Sink) -> None:
    """Serialize the log as an XML document (UTF-8)"""
    refuse_non_finite(log, "XML")
    try:
        root = _to_element(log)
    except TimestampError as e:
        raise InvalidLog(f"Cannot write XML: {e}") from e
    ET.indent(root)
    data = ET.tostring(root, encoding="utf-8", xml_declaration=True)
    # ElementTree leaves \r raw in text, where parsers would turn it into \n;
    # attribute values already carry it as a character reference.
    write_sink(sink, data.replace(b"\r", b"&#13;") + b"\n")
    logger.debug("Wrote XML log with %d events", len(log.events))


class _XmlReader:
    """Walks a parsed document, rejecting anything outside the expected shape"""

    def __init__(self) -> None:
        self.builder = LogBuilder()
        self.event_kinds: Dict[str, Dict[str, AttributeKind]] = {}
        self.object_kinds: Dict[str, Dict[str, AttributeKind]] = {}

    @staticmethod
    def expect(
        element: ET.Element,
        path: str,
        required: AbstractSet[str],
        optional: AbstractSet[str] = frozenset(),
    ) -> None:
        missing = sorted(required - set(element.attrib))
        if missing:
            msg = f"<{element.tag}> lacks required properties: {', '.join(missing)}"
            raise SchemaViolation(msg, path)
        unknown = sorted(set(element.attrib) - required - optional)
        if unknown:
            msg = f"<{element.tag}> has unknown properties: {', '.join(unknown)}"
            raise SchemaViolation(msg, path)
        if element.text is not None and element.text.strip() and len(element):
            msg = f"<{element.tag}> mixes text and elements"
            raise SchemaViolation(msg, path)

    @staticmethod
    def children(element: ET.Element, path: str, tag: str) -> Iterator[Tuple[ET.Element, str]]:
        for index, child in enumerate(element, start=1):
            child_path = f"{path}/{child.tag}[{index}]"
            if child.tag != tag:
                msg = f"unexpected <{child.tag}> inside <{element.tag}>, expected <{tag}>"
                raise SchemaViolation(msg, child_path)
            yield child, child_path

    @staticmethod
    def sections(
        element: ET.Element, path: str, allowed: Tuple[str, ...]
    ) -> Dict[str, Tuple[ET.Element, str]]:
        found: Dict[str, Tuple[ET.Element, str]] = {}
        for child in element:
            child_path = f"{path}/{child.tag}"
            if child.tag not in allowed:
                msg = f"unexpected <{child.tag}> inside <{element.tag}>"
                raise SchemaViolation(msg, child_path)
            if child.tag in found:
                msg = f"<{child.tag}> occurs more than once inside <{element.tag}>"
                raise SchemaViolation(msg, child_path)
            found[child.tag] = (child, child_path)
        return found

    def read(self, root: ET.Element) -> Log:
        if root.tag != LOG:
            msg = f"root element is <{root.tag}>, expected <{LOG}>"
            raise SchemaViolation(msg, f"/{root.tag}")
        path = f"/{LOG}"
        self.expect(root, path, set())
        sections = self.sections(root, path, (OBJECT_TYPES, EVENT_TYPES, EVENTS, OBJECTS))
        if OBJECT_TYPES in sections:
            self.read_declarations(*sections[OBJECT_TYPES], OBJECT_TYPE, self.object_kinds)
        if EVENT_TYPES in sections:
            self.read_declarations(*sections[EVENT_TYPES], EVENT_TYPE, self.event_kinds)
        if EVENTS in sections:
            self.read_events(*sections[EVENTS])
        if OBJECTS in sections:
            self.read_objects(*sections[OBJECTS])
        return self.builder.build()

    def read_declarations(
        self,
        container: ET.Element,
        path: str,
        tag: str,
        kinds: Dict[str, Dict[str, AttributeKind]],
    ) -> None:
        self.expect(container, path, set())
        for element, element_path in self.children(container, path, tag):
            self.expect(element, element_path, {"name"})
            parts = self.sections(element, element_path, (ATTRIBUTES,))
            attributes: List[Tuple[str, AttributeKind]] = []
            if ATTRIBUTES in parts:
                attrs_element, attrs_path = parts[ATTRIBUTES]
                self.expect(attrs_element, attrs_path, set())
                for attr, attr_path in self.children(attrs_element, attrs_path, ATTRIBUTE):
                    self.expect(attr, attr_path, {"name", "type"})
                    try:
                        kind = AttributeKind(attr.attrib["type"])
                    except ValueError:
                        msg = f"unknown attribute type {attr.attrib['type']!r}"
                        raise SchemaViolation(msg, attr_path) from None
                    attributes.append((attr.attrib["name"], kind))
            name = element.attrib["name"]
            kinds.setdefault(name, dict(attributes))
            with schema_errors(element_path):
                if tag == EVENT_TYPE:
                    self.builder.add_event_type(name, attributes)
                else:
                    self.builder.add_object_type(name, attributes)

    @staticmethod
    def value(
        kinds: Dict[str, Dict[str, AttributeKind]],
        type_name: str,
        attr: ET.Element,
        path: str,
    ) -> AttributeValue:
        name = attr.attrib["name"]
        text = attr.text or ""
        kind = kinds.get(type_name, {}).get(name, AttributeKind.STRING)
        try:
            return AttributeValue.from_text(kind, text)
        except (TimestampError, ValueError) as e:
            msg = f"attribute {name!r}: cannot read {text!r} as {kind.value}"
            raise ValueParseError(msg, path) from e

    @staticmethod
    def time(text: str, path: str, code: DiagnosticCode) -> datetime:
        try:
            return parse_timestamp(text)
        except TimestampError as e:
            raise ValueParseError(str(e), path, code=code) from e

    def read_relobjs(self, parts: Dict[str, Tuple[ET.Element, str]]) -> List[Tuple[str, str]]:
        if OBJECTS not in parts:
            return []
        container, path = parts[OBJECTS]
        self.expect(container, path, set())
        pairs = []
        for relobj, relobj_path in self.children(container, path, RELOBJ):
            self.expect(relobj, relobj_path, {"object-id", "qualifier"})
            pairs.append((relobj.attrib["object-id"], relobj.attrib["qualifier"]))
        return pairs

    def read_events(self, container: ET.Element, path: str) -> None:
        self.expect(container, path, set())
        for element, element_path in self.children(container, path, EVENT):
            self.expect(element, element_path, {"id", "type", "time"})
            event_id = element.attrib["id"]
            event_type = element.attrib["type"]
            time = self.time(
                element.attrib["time"], element_path, DiagnosticCode.EVENT_TIME_INVALID
            )
            parts = self.sections(element, element_path, (OBJECTS, ATTRIBUTES))
            values: Dict[str, AttributeValue] = {}
            if ATTRIBUTES in parts:
                attrs_element, attrs_path = parts[ATTRIBUTES]
                self.expect(attrs_element, attrs_path, set())
                for attr, attr_path in self.children(attrs_element, attrs_path, ATTRIBUTE):
                    self.expect(attr, attr_path, {"name"})
                    values[attr.attrib["name"]] = self.value(
                        self.event_kinds, event_type, attr, attr_path
                    )
            with schema_errors(element_path):
                self.builder.add_event(event_id, event_type, time, values)
            for object_id, qualifier in self.read_relobjs(parts):
                self.builder.relate_event(event_id, object_id, qualifier)

    def read_objects(self, container: ET.Element, path: str) -> None:
        self.expect(container, path, set())
        for element, element_path in self.children(container, path, OBJECT):
            self.expect(element, element_path, {"id", "type"})
            object_id = element.attrib["id"]
            object_type = element.attrib["type"]
            with schema_errors(element_path):
                self.builder.add_object(object_id, object_type)
            parts = self.sections(element, element_path, (ATTRIBUTES, OBJECTS))
            if ATTRIBUTES in parts:
                attrs_element, attrs_path = parts[ATTRIBUTES]
                self.expect(attrs_element, attrs_path, set())
                for attr, attr_path in self.children(attrs_element, attrs_path, ATTRIBUTE):
                    self.expect(attr, attr_path, {"name"}, {"time"})
                    time = (
                        self.time(
                            attr.attrib["time"],
                            attr_path,
                            DiagnosticCode.ASSIGNMENT_TIME_INVALID,
                        )
                        if "time" in attr.attrib
                        else ZERO
                    )
                    value = self.value(self.object_kinds, object_type, attr, attr_path)
                    with schema_errors(attr_path):
                        self.builder.assign(object_id, attr.attrib["name"], value, time)
            for target_id, qualifier in self.read_relobjs(parts):
                self.builder.relate_objects(object_id, target_id, qualifier)


def read_xml(source: Source) -> Log:
    """Parse an XML document into a log"""
    data = read_source(source)
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        line, column = e.position
        raise XmlSyntaxError(f"Malformed XML: {e}", f"{line}:{column}") from e
    log = _XmlReader().read(root)
    logger.debug("Read XML log with %d events, %d objects", len(log.events), len(log.objects))
    return log
