#!/usr/bin/env python
from __future__ import annotations

import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from ocelkit import (
    Format,
    Log,
    OcelError,
    eaval,
    log_stats,
    logs_equal,
    oaval_at,
    read_log,
    relobj_event,
    relobj_object,
    running_example,
    validate_model,
    validate_relational_layout,
    write_log,
)

sys.dont_write_bytecode = True

# Written next to the script when True, otherwise into a temporary directory.
_KEEP_FILES = False

_SUFFIXES = {
    Format.RELATIONAL: ".sqlite",
    Format.XML: ".xmlocel",
    Format.JSON: ".jsonocel",
}


def demo_queries(log: Log) -> None:
    print(log_stats(log))

    for at in ("2022-01-13T11:59:00", "2022-01-13T12:00:00"):
        t = datetime.fromisoformat(at).replace(tzinfo=timezone.utc)
        value = oaval_at(log, "PO1", "po_quantity", t)
        print(f">>> PO1 po_quantity at {at}: {value.payload if value else None}")

    value = eaval(log, "e9", "invoice_inserter")
    print(f">>> e9 was inserted by {value.payload if value else '?'}")

    for object_id, qualifier in relobj_event(log, "e13"):
        print(f"  > e13 -> {object_id} ({qualifier})")
    for object_id, qualifier in relobj_object(log, "PO2"):
        print(f"  > PO2 -> {object_id} ({qualifier})")


def demo_formats(log: Log, directory: Path) -> None:
    for fmt, suffix in _SUFFIXES.items():
        path = directory / f"running-example{suffix}"
        write_log(log, path)
        again = read_log(path)
        print(f">>> {fmt.value}: {path.stat().st_size} bytes, lossless={logs_equal(log, again)}")

    database = directory / "running-example.sqlite"
    print(f">>> relational layout findings: {validate_relational_layout(database)}")


def main() -> None:
    log = running_example()
    diagnostics = validate_model(log)
    if diagnostics:
        for diagnostic in diagnostics:
            print(diagnostic.to_json_line())
        return

    demo_queries(log)
    try:
        if _KEEP_FILES:
            demo_formats(log, Path(__file__).parent)
        else:
            with tempfile.TemporaryDirectory() as directory:
                demo_formats(log, Path(directory))
    except OcelError as e:
        print(f"demo failed: {e}")
        raise


if __name__ == "__main__":
    main()
