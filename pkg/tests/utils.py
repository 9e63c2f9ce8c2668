import json
import logging
import os
import sqlite3
from contextlib import closing
from pathlib import Path
from typing import Any, Dict, List, Tuple

from ocelkit import Format

logger = logging.getLogger(__name__)

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
JSON_FIXTURES_DIR = os.path.join(FIXTURES_DIR, "json")
XML_FIXTURES_DIR = os.path.join(FIXTURES_DIR, "xml")

SUFFIXES: Dict[Format, str] = {
    Format.RELATIONAL: ".sqlite",
    Format.XML: ".xmlocel",
    Format.JSON: ".jsonocel",
}


def fixture_path(filename: str) -> str:
    return os.path.join(FIXTURES_DIR, filename)


def load_data_from_file(filename: str) -> str:
    try:
        with open(os.path.join(FIXTURES_DIR, filename), encoding="utf-8") as fp:
            return fp.read()
    except FileNotFoundError:
        logger.error(
            "Unable to read fixtures data from %s (`FIXTURES_DIR`: %s)",
            filename,
            FIXTURES_DIR,
        )
        raise


def load_json_from_file(filename: str) -> Any:
    try:
        with open(os.path.join(JSON_FIXTURES_DIR, filename), encoding="utf-8") as fp:
            return json.load(fp)
    except FileNotFoundError:
        logger.error(
            "Unable to read JSON fixtures from %s (`JSON_FIXTURES_DIR`: %s)",
            filename,
            JSON_FIXTURES_DIR,
        )
        raise


def write_json_document(path: Path, document: Any) -> Path:
    path.write_text(json.dumps(document, indent=2), encoding="utf-8")
    return path


def execute_sql(db_path: Path, *statements: str) -> None:
    """Tamper with a database written by the relational writer"""
    with closing(sqlite3.connect(str(db_path))) as conn:
        with conn:
            for statement in statements:
                conn.execute(statement)


def query_sql(db_path: Path, sql: str) -> List[Tuple[Any, ...]]:
    with closing(sqlite3.connect(str(db_path))) as conn:
        return conn.execute(sql).fetchall()
