from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Tuple

import pytest

from ocelkit import (
    Format,
    Log,
    event_types,
    log_stats,
    logs_equal,
    oaval_final,
    object_types,
    read_log,
    relobj_object,
    running_example,
    validate_model,
    validate_relational_layout,
)
from tests.utils import fixture_path, query_sql

Files = Dict[Format, Path]

# Regenerated with make_test_data.py
SHIPPED: Dict[Format, str] = {
    Format.RELATIONAL: "running-example.sqlite",
    Format.XML: "xml/running-example.xmlocel",
    Format.JSON: "json/running-example.jsonocel",
}


def shipped(fmt: Format) -> Path:
    return Path(fixture_path(SHIPPED[fmt]))


def tables(path: Path) -> Dict[str, Tuple[List[Any], List[Any]]]:
    """Columns and rows of every table, in insertion order"""
    names = query_sql(path, "SELECT name FROM sqlite_master WHERE type = 'table'")
    return {
        name: (
            query_sql(path, f'PRAGMA table_info("{name}")'),
            query_sql(path, f'SELECT * FROM "{name}" ORDER BY rowid'),
        )
        for (name,) in names
    }
class TestRunningExample:
    def test_counts(self, running_log: Log) -> None:
        assert log_stats(running_log) == {
            "events": 13,
            "objects": 9,
            "eventTypes": 8,
            "objectTypes": 4,
            "e2oCount": 20,
            "o2oCount": 7,
            "timeSpan": {"min": "2022-01-09T15:00:00Z", "max": "2022-02-28T23:00:00Z"},
        }

    def test_is_valid(self, running_log: Log) -> None:
        assert validate_model(running_log) == []

    def test_types(self, running_log: Log) -> None:
        assert object_types(running_log) == {
            "Purchase Requisition",
            "Purchase Order",
            "Invoice",
            "Payment",
        }
        assert "Set Payment Block" in event_types(running_log)

    def test_payments_have_no_attributes(self, running_log: Log) -> None:
        for payment in ("P1", "P2", "P3"):
            assert running_log.object(payment).assignments == ()

    def test_second_scenario(self, running_log: Log) -> None:
        assert relobj_object(running_log, "PO2") == [("R3", "Maverick buying")]
        assert relobj_object(running_log, "R3") == [("P3", "Payment from invoice")]
        final = oaval_final(running_log, "R3", "is_blocked")
        assert final is not None and final.payload == "No"

    def test_fresh_instances_are_equal(self, running_log: Log) -> None:
        assert running_example() == running_log


class TestShippedFiles:
    @pytest.mark.parametrize("fmt", [Format.XML, Format.JSON])
    def test_text_formats_match_the_writer(self, running_files: Files, fmt: Format) -> None:
        assert running_files[fmt].read_bytes() == shipped(fmt).read_bytes()

    def test_database_matches_the_writer(self, running_files: Files) -> None:
        assert tables(running_files[Format.RELATIONAL]) == tables(shipped(Format.RELATIONAL))
        assert validate_relational_layout(shipped(Format.RELATIONAL)) == []

    @pytest.mark.parametrize("fmt", list(Format))
    def test_reads_as_running_example(self, running_log: Log, fmt: Format) -> None:
        assert logs_equal(read_log(shipped(fmt)), running_log)
