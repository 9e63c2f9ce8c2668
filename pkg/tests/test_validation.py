from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import List

import pytest

from ocelkit import (
    INFINITY,
    Diagnostic,
    DiagnosticCode,
    Log,
    LogBuilder,
    QualifiedRelation,
    Severity,
    validate_model,
)
from ocelkit.diagnostics import has_errors


def utc(*args: int) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


def codes(diagnostics: List[Diagnostic]) -> List[DiagnosticCode]:
    return [d.code for d in diagnostics]


def base() -> LogBuilder:
    return (
        LogBuilder()
        .add_event_type("Pack", [("packer", "string")])
        .add_object_type("Box", [("weight", "float")])
        .add_object("b1", "Box")
        .assign("b1", "weight", 1.5)
        .add_event("p1", "Pack", utc(2022, 1, 1), {"packer": "Ann"})
        .relate_event("p1", "b1", "packed")
    )


class TestValidateModel:
    def test_running_example_is_clean(self, running_log: Log) -> None:
        assert validate_model(running_log) == []

    def test_base_is_clean(self) -> None:
        assert validate_model(base().build()) == []

    def test_dangling_e2o(self) -> None:
        found = validate_model(base().relate_event("p1", "b9", "packed").build())
        assert codes(found) == [DiagnosticCode.E2O_DANGLING_OBJECT]
        assert found[0].location == "/e2o[p1|packed|b9]"
        assert found[0].severity is Severity.ERROR

    def test_dangling_e2o_event(self) -> None:
        found = validate_model(base().relate_event("p9", "b1", "packed").build())
        assert codes(found) == [DiagnosticCode.E2O_DANGLING_EVENT]

    def test_dangling_o2o(self) -> None:
        found = validate_model(base().relate_objects("b1", "b2", "next to").build())
        assert codes(found) == [DiagnosticCode.O2O_DANGLING_TARGET]
        found = validate_model(base().relate_objects("b0", "b1", "next to").build())
        assert codes(found) == [DiagnosticCode.O2O_DANGLING_SOURCE]

    def test_undeclared_types(self) -> None:
        log = (
            base()
            .add_event("x1", "Unpack", utc(2022, 1, 2))
            .add_object("c1", "Crate")
            .build()
        )
        assert codes(validate_model(log)) == [
            DiagnosticCode.EVENT_TYPE_UNDECLARED,
            DiagnosticCode.OBJECT_TYPE_UNDECLARED,
        ]

    def test_undeclared_attributes(self) -> None:
        log = (
            base()
            .add_event("p2", "Pack", utc(2022, 1, 2), {"colour": "red"})
            .assign("b1", "height", 3)
            .build()
        )
        assert sorted(codes(validate_model(log))) == sorted(
            [DiagnosticCode.EVENT_ATTR_UNDECLARED, DiagnosticCode.OBJECT_ATTR_UNDECLARED]
        )

    def test_builder_refuses_kind_mismatch(self) -> None:
        with pytest.raises(ValueError):
            base().add_event("p2", "Pack", utc(2022, 1, 2), {"packer": 7})

    def test_duplicate_and_shared_ids(self) -> None:
        log = (
            base()
            .add_event("p1", "Pack", utc(2022, 1, 3))
            .add_object("b1", "Box")
            .add_object("p1", "Box")
            .build()
        )
        assert sorted(codes(validate_model(log))) == sorted(
            [
                DiagnosticCode.DUPLICATE_EVENT_ID,
                DiagnosticCode.DUPLICATE_OBJECT_ID,
                DiagnosticCode.ID_NOT_DISJOINT,
            ]
        )

    def test_duplicate_declarations(self) -> None:
        log = (
            base()
            .add_event_type("Pack")
            .add_object_type("Crate", [("w", "float"), ("w", "integer")])
            .build()
        )
        assert sorted(codes(validate_model(log))) == sorted(
            [
                DiagnosticCode.DUPLICATE_TYPE_DECLARATION,
                DiagnosticCode.DUPLICATE_ATTRIBUTE_DECLARATION,
            ]
        )

    def test_duplicate_assignment(self) -> None:
        log = base().assign("b1", "weight", 2.5).build()
        assert codes(validate_model(log)) == [DiagnosticCode.DUPLICATE_ASSIGNMENT]

    def test_infinity_times(self) -> None:
        log = (
            base()
            .add_event("p2", "Pack", INFINITY)
            .assign("b1", "weight", 9.0, INFINITY)
            .build()
        )
        assert sorted(codes(validate_model(log))) == sorted(
            [DiagnosticCode.ASSIGNMENT_TIME_INVALID, DiagnosticCode.EVENT_TIME_INVALID]
        )

    def test_non_finite_floats(self) -> None:
        log = base().assign("b1", "weight", float("nan"), utc(2022, 2, 1)).build()
        found = validate_model(log)
        assert codes(found) == [DiagnosticCode.ATTR_VALUE_NOT_FINITE]
        assert found[0].location == "/objects/object[id=b1]/attributes/attribute[name=weight]"
        assert found[0].is_error

    def test_duplicate_relations(self) -> None:
        log = base().build()
        doubled = Log(
            event_types=log.event_types,
            object_types=log.object_types,
            events=log.events,
            objects=log.objects,
            e2o=log.e2o + log.e2o,
            o2o=(
                QualifiedRelation(source="b1", qualifier="self", target="b1"),
                QualifiedRelation(source="b1", qualifier="self", target="b1"),
            ),
        )
        assert codes(validate_model(doubled)) == [
            DiagnosticCode.E2O_DUPLICATE,
            DiagnosticCode.O2O_DUPLICATE,
        ]

    def test_warnings_only(self) -> None:
        log = (
            base()
            .add_event_type("Seal", [("packer", "string")])
            .add_object_type("Pallet", [("ocel_time", "time")])
            .build()
        )
        found = validate_model(log)
        assert sorted(codes(found)) == sorted(
            [DiagnosticCode.ATTR_NAME_SHARED, DiagnosticCode.RESERVED_ATTRIBUTE_NAME]
        )
        assert not has_errors(found)
        assert all(d.severity is Severity.WARNING for d in found)

    def test_sorted_and_deterministic(self) -> None:
        log = (
            base()
            .relate_event("p1", "zz", "q")
            .relate_event("p1", "aa", "q")
            .add_event("x", "Nope", utc(2022, 1, 1))
            .build()
        )
        first = validate_model(log)
        assert first == validate_model(log)
        assert [d.location for d in first] == sorted(d.location for d in first)


class TestKindMismatch:
    def test_value_kind_against_declaration(self) -> None:
        log = base().build()
        event = log.events[0]
        wrong = event.model_copy(
            update={"attrs": {"packer": event.attrs["packer"].of("integer", 7)}}
        )
        tampered = Log(
            event_types=log.event_types,
            object_types=log.object_types,
            events=(wrong,),
            objects=log.objects,
            e2o=log.e2o,
        )
        found = validate_model(tampered)
        assert codes(found) == [DiagnosticCode.ATTR_KIND_MISMATCH]
        assert found[0].location == "/events/event[id=p1]/attributes/attribute[name=packer]"


class TestDiagnostic:
    def test_json_line(self) -> None:
        diagnostic = Diagnostic.of(DiagnosticCode.EPOCH_NONCANONICAL, "object_Box:2", "late")
        record = json.loads(diagnostic.to_json_line())
        assert record == {
            "code": "EPOCH_NONCANONICAL",
            "severity": "WARNING",
            "location": "object_Box:2",
            "message": "late",
        }

    @pytest.mark.parametrize("code", list(DiagnosticCode))
    def test_every_code_has_a_severity(self, code: DiagnosticCode) -> None:
        assert Diagnostic.of(code, "/", "m").severity in (Severity.ERROR, Severity.WARNING)
