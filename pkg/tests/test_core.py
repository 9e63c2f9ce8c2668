from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pydantic
import pytest

from ocelkit import (
    INFINITY,
    ZERO,
    AttributeKind,
    AttributeValue,
    Event,
    Log,
    LogBuilder,
    OcelObject,
    QualifiedRelation,
    UnknownEvent,
    UnknownObject,
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
from ocelkit.timestamps import format_timestamp, parse_timestamp, to_timestamp
from ocelkit.utils import TimestampError


def utc(*args: int) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


class TestTimestamps:
    @pytest.mark.parametrize(
        "text",
        [
            "2022-01-13T12:00:00Z",
            "2022-01-13T12:00:00.000Z",
            "2022-01-13 12:00 UTC",
            "2022-01-13T13:00:00+01:00",
            "2022-01-13T07:00:00-0500",
            "2022-01-13T12:00",
        ],
    )
    def test_parse_equivalent_forms(self, text: str) -> None:
        assert parse_timestamp(text) == utc(2022, 1, 13, 12)

    def test_parse_bare_date(self) -> None:
        assert parse_timestamp("1970-01-01") == ZERO

    @pytest.mark.parametrize("text", ["", "yesterday", "2022-13-01T00:00:00Z", "2022-01-01T25:00Z"])
    def test_parse_rejects(self, text: str) -> None:
        with pytest.raises(TimestampError):
            parse_timestamp(text)

    def test_truncates_to_milliseconds(self) -> None:
        ts = to_timestamp(datetime(2022, 1, 1, 0, 0, 0, 123999))
        assert ts == utc(2022, 1, 1, 0, 0, 0, 123000)
        assert ts.tzinfo is not None

    def test_format(self) -> None:
        assert format_timestamp(ZERO) == "1970-01-01T00:00:00Z"
        assert format_timestamp(ZERO, millis=True) == "1970-01-01T00:00:00.000Z"
        assert format_timestamp(utc(2022, 1, 1, 0, 0, 0, 5000)) == "2022-01-01T00:00:00.005Z"
        assert format_timestamp(utc(999, 5, 1)) == "0999-05-01T00:00:00Z"
        assert format_timestamp(utc(1, 1, 2, 3, 4, 5)) == "0001-01-02T03:04:05Z"
        assert parse_timestamp("0999-05-01T00:00:00Z") == utc(999, 5, 1)

    def test_infinity_is_never_rendered(self) -> None:
        with pytest.raises(TimestampError):
            format_timestamp(INFINITY)
        assert to_timestamp(INFINITY) == INFINITY


class TestAttributeValue:
    def test_of_coerces_numbers(self) -> None:
        assert AttributeValue.of("float", 3).payload == 3.0
        assert isinstance(AttributeValue.of("float", 3).payload, float)
        assert AttributeValue.of("integer", 4.0).payload == 4

    def test_kind_must_match_payload(self) -> None:
        with pytest.raises(pydantic.ValidationError):
            AttributeValue(kind=AttributeKind.INTEGER, payload=True)
        with pytest.raises(pydantic.ValidationError):
            AttributeValue(kind=AttributeKind.STRING, payload=1)

    def test_infer(self) -> None:
        assert AttributeValue.infer(True).kind is AttributeKind.BOOLEAN
        assert AttributeValue.infer(1).kind is AttributeKind.INTEGER
        assert AttributeValue.infer(1.5).kind is AttributeKind.FLOAT
        assert AttributeValue.infer("x").kind is AttributeKind.STRING
        assert AttributeValue.infer(utc(2022, 1, 1)).kind is AttributeKind.TIME

    @pytest.mark.parametrize(
        "kind, text, payload",
        [
            ("string", " padded ", " padded "),
            ("integer", "600", 600),
            ("float", "0.1", 0.1),
            ("boolean", "TRUE", True),
            ("boolean", "0", False),
            ("time", "2022-02-03T07:30:00Z", datetime(2022, 2, 3, 7, 30, tzinfo=timezone.utc)),
        ],
    )
    def test_from_text(self, kind: str, text: str, payload: object) -> None:
        assert AttributeValue.from_text(kind, text).payload == payload

    @pytest.mark.parametrize("kind, text", [("integer", "abc"), ("float", ""), ("boolean", "yes")])
    def test_from_text_rejects(self, kind: str, text: str) -> None:
        with pytest.raises(ValueError):
            AttributeValue.from_text(kind, text)

    def test_text_forms(self) -> None:
        assert AttributeValue.infer(False).to_text() == "false"
        assert AttributeValue.infer(0.1).to_text() == "0.1"
        assert AttributeValue.infer(ZERO).to_json() == "1970-01-01T00:00:00Z"


class TestQueries:
    @pytest.mark.parametrize(
        "t, expected",
        [
            (ZERO, 500),
            (utc(2022, 1, 11, 10), 500),
            (utc(2022, 1, 13, 11, 59, 59), 500),
            (utc(2022, 1, 13, 12), 600),
            (utc(2023, 1, 1), 600),
            (INFINITY, 600),
        ],
    )
    def test_po_quantity_changes_once(self, running_log: Log, t: datetime, expected: int) -> None:
        value = oaval_at(running_log, "PO1", "po_quantity", t)
        assert value is not None
        assert value.kind is AttributeKind.INTEGER
        assert value.payload == expected

    def test_payment_block_steps(self, running_log: Log) -> None:
        def blocked(t: datetime) -> str:
            value = oaval_at(running_log, "R3", "is_blocked", t)
            assert value is not None
            return value.payload

        assert blocked(ZERO) == "No"
        assert blocked(utc(2022, 2, 3, 7, 29)) == "No"
        assert blocked(utc(2022, 2, 3, 7, 30)) == "Yes"
        assert blocked(utc(2022, 2, 3, 23, 29)) == "Yes"
        assert blocked(utc(2022, 2, 3, 23, 30)) == "No"

    def test_oaval_final(self, running_log: Log) -> None:
        final = oaval_final(running_log, "PO1", "po_quantity")
        assert final is not None and final.payload == 600

    def test_absent_values(self, running_log: Log) -> None:
        assert oaval_at(running_log, "P1", "is_blocked", INFINITY) is None
        assert eaval(running_log, "e1", "po_creator") is None

    def test_absent_before_first_assignment(self) -> None:
        log = (
            LogBuilder()
            .add_object_type("Ticket", [("state", "string")])
            .add_object("t1", "Ticket")
            .assign("t1", "state", "open", utc(2022, 1, 1))
            .build()
        )
        assert oaval_at(log, "t1", "state", ZERO) is None
        assert oaval_at(log, "t1", "state", utc(2021, 12, 31)) is None
        assert oaval_at(log, "t1", "state", utc(2022, 1, 1)) == AttributeValue.infer("open")

    def test_naive_query_time_is_utc(self, running_log: Log) -> None:
        value = oaval_at(running_log, "PO1", "po_quantity", datetime(2022, 1, 13, 12))
        assert value is not None and value.payload == 600
        offset = timezone(timedelta(hours=2))
        at = datetime(2022, 1, 13, 13, tzinfo=offset)
        value = oaval_at(running_log, "PO1", "po_quantity", at)
        assert value is not None and value.payload == 500

    def test_eaval(self, running_log: Log) -> None:
        assert eaval(running_log, "e2", "pr_approver") == AttributeValue.infer("Tania")
        assert eaval(running_log, "e9", "invoice_inserter") == AttributeValue.infer("Mario")
        assert eaval(running_log, "e11", "invoice_blocker") == AttributeValue.infer("Sam")

    def test_relobj_event(self, running_log: Log) -> None:
        assert sorted(relobj_event(running_log, "e7")) == [
            ("P1", "Payment inserted with identifier"),
            ("R1", "Payment for the invoice"),
        ]
        assert relobj_event(running_log, "e4") == [("PO1", "Change of quantity")]

    def test_relobj_object(self, running_log: Log) -> None:
        assert relobj_object(running_log, "PO2") == [("R3", "Maverick buying")]
        assert sorted(relobj_object(running_log, "PO1")) == [
            ("R1", "Invoice from PO"),
            ("R2", "Invoice from PO"),
        ]
        assert relobj_object(running_log, "P3") == []

    def test_repeated_relations_are_listed_once(self) -> None:
        log = Log(
            events=(Event(id="e1", type="T", time=ZERO),),
            objects=(OcelObject(id="o1", type="U"), OcelObject(id="o2", type="U")),
            e2o=(
                QualifiedRelation(source="e1", qualifier="q", target="o1"),
                QualifiedRelation(source="e1", qualifier="r", target="o2"),
                QualifiedRelation(source="e1", qualifier="q", target="o1"),
            ),
            o2o=(
                QualifiedRelation(source="o1", qualifier="q", target="o2"),
                QualifiedRelation(source="o1", qualifier="q", target="o2"),
            ),
        )
        assert relobj_event(log, "e1") == [("o1", "q"), ("o2", "r")]
        assert relobj_object(log, "o1") == [("o2", "q")]

    def test_unknown_ids(self, running_log: Log) -> None:
        with pytest.raises(UnknownEvent):
            eaval(running_log, "e99", "pr_creator")
        with pytest.raises(UnknownEvent):
            relobj_event(running_log, "PO1")
        with pytest.raises(UnknownObject):
            oaval_at(running_log, "PO9", "po_quantity", ZERO)
        with pytest.raises(UnknownObject):
            relobj_object(running_log, "e1")

    def test_type_sets(self, running_log: Log) -> None:
        assert len(event_types(running_log)) == 8
        assert object_types(running_log) == {
            "Purchase Requisition",
            "Purchase Order",
            "Invoice",
            "Payment",
        }

    def test_declared_but_unused_types_are_not_counted(self) -> None:
        log = LogBuilder().add_event_type("Never Happens").add_object_type("Ghost").build()
        assert event_types(log) == set()
        assert object_types(log) == set()
        assert len(log.event_types) == 1

    def test_declaration_lookup(self, running_log: Log) -> None:
        decl = running_log.object_type("Purchase Order")
        assert decl is not None
        assert [a.name for a in decl.attributes] == ["po_product", "po_quantity"]
        assert running_log.event_type("Insert Payment") is not None
        assert running_log.event_type("Purchase Order") is None


class TestLogsEqual:
    def test_ignores_order(self) -> None:
        def build(reverse: bool) -> Log:
            builder = LogBuilder().add_object_type("Box").add_event_type("Move")
            ids = ["a", "b", "c"]
            for object_id in reversed(ids) if reverse else ids:
                builder.add_object(object_id, "Box")
            relations = [("m1", "a", "x"), ("m1", "b", "y")]
            builder.add_event("m1", "Move", utc(2022, 1, 1))
            for event_id, object_id, qualifier in reversed(relations) if reverse else relations:
                builder.relate_event(event_id, object_id, qualifier)
            return builder.build()

        assert logs_equal(build(False), build(True))

    def test_detects_kind_changes(self) -> None:
        def build(value: object) -> Log:
            return (
                LogBuilder()
                .add_event_type("Count")
                .add_event("c1", "Count", utc(2022, 1, 1), {"n": value})
                .build()
            )

        assert not logs_equal(build(1), build(1.0))
        assert not logs_equal(build(1), build(True))
        assert logs_equal(build(1), build(1))

    def test_detects_qualifier_changes(self, running_log: Log) -> None:
        changed = Log(
            event_types=running_log.event_types,
            object_types=running_log.object_types,
            events=running_log.events,
            objects=running_log.objects,
            e2o=running_log.e2o[1:],
            o2o=running_log.o2o,
        )
        assert not logs_equal(running_log, changed)


class TestLogBuilder:
    def test_relations_have_set_semantics(self) -> None:
        log = (
            LogBuilder()
            .add_event_type("Insert Invoice")
            .add_object_type("Purchase Order")
            .add_event("e5", "Insert Invoice", utc(2022, 1, 14, 12))
            .add_object("PO1", "Purchase Order")
            .relate_event("e5", "PO1", "Invoice created starting from the PO")
            .relate_event("e5", "PO1", "Invoice created starting from the PO")
            .relate_event("e5", "PO1", "Another role")
            .build()
        )
        assert len(log.e2o) == 2

    def test_values_follow_declared_kind(self) -> None:
        log = (
            LogBuilder()
            .add_event_type("Weigh", [("kg", "float"), ("at", "time")])
            .add_event("w1", "Weigh", utc(2022, 1, 1), {"kg": 3, "at": datetime(2022, 1, 2)})
            .build()
        )
        event = log.event("w1")
        assert event.attrs["kg"] == AttributeValue(kind=AttributeKind.FLOAT, payload=3.0)
        assert event.attrs["at"].payload == utc(2022, 1, 2)

    def test_assign_requires_object(self) -> None:
        with pytest.raises(KeyError):
            LogBuilder().assign("nobody", "x", 1)

    def test_empty_ids_fail_when_added(self) -> None:
        builder = LogBuilder().add_event_type("T").add_object_type("U")
        with pytest.raises(pydantic.ValidationError):
            builder.add_event("", "T", ZERO)
        with pytest.raises(pydantic.ValidationError):
            builder.add_object("", "U")
        builder.add_object("o1", "U")
        with pytest.raises(pydantic.ValidationError):
            builder.assign("o1", "", 1)
        assert [obj.id for obj in builder.build().objects] == ["o1"]

    def test_log_is_frozen(self, running_log: Log) -> None:
        with pytest.raises(pydantic.ValidationError):
            running_log.events = ()  # type: ignore[misc]


class TestStats:
    def test_running_example(self, running_log: Log) -> None:
        assert log_stats(running_log) == {
            "events": 13,
            "objects": 9,
            "eventTypes": 8,
            "objectTypes": 4,
            "e2oCount": 20,
            "o2oCount": 7,
            "timeSpan": {"min": "2022-01-09T15:00:00Z", "max": "2022-02-28T23:00:00Z"},
        }

    def test_empty_log(self) -> None:
        stats = log_stats(Log())
        assert stats["timeSpan"] is None
        assert all(stats[key] == 0 for key in stats if key != "timeSpan")

    def test_objects_without_events(self) -> None:
        log = LogBuilder().add_object_type("Box").add_object("b1", "Box").build()
        stats = log_stats(log)
        assert stats["events"] == 0
        assert stats["objects"] == 1
        assert stats["timeSpan"] is None
