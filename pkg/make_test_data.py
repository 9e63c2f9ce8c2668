#!/usr/bin/env python
"""Regenerate the running example files under tests/fixtures/"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

from ocelkit import Format, logs_equal, read_log, running_example, write_log
from ocelkit.cli import setup_logging

logger = logging.getLogger("ocelkit.make_test_data")

FIXTURES_DIR = Path(__file__).parent / "tests" / "fixtures"

TARGETS = {
    Format.RELATIONAL: FIXTURES_DIR / "running-example.sqlite",
    Format.XML: FIXTURES_DIR / "xml" / "running-example.xmlocel",
    Format.JSON: FIXTURES_DIR / "json" / "running-example.jsonocel",
}


def main() -> int:
    setup_logging()
    log = running_example()
    for fmt, path in TARGETS.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        write_log(log, path, fmt)
        if not logs_equal(read_log(path, fmt), log):
            logger.error("%s does not read back as the running example", path)
            return 1
        print(f">>> wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
