from __future__ import annotations

from pathlib import Path
from typing import Any, Dict

import pytest

from ocelkit import Format, Log, running_example, write_log
from tests.utils import SUFFIXES, fixture_path, load_data_from_file, load_json_from_file


@pytest.fixture(scope="session")
def running_log() -> Log:
    return running_example()


@pytest.fixture(scope="session")
def running_files(tmp_path_factory: pytest.TempPathFactory, running_log: Log) -> Dict[Format, Path]:
    """The running example written once per session in every format"""
    directory = tmp_path_factory.mktemp("running-example")
    files = {}
    for fmt, suffix in SUFFIXES.items():
        path = directory / f"running-example{suffix}"
        write_log(running_log, path)
        files[fmt] = path
    return files


@pytest.fixture
def db_path(tmp_path: Path) -> Path:
    return tmp_path / "log.sqlite"


@pytest.fixture
def minimal_document() -> Dict[str, Any]:
    return load_json_from_file("minimal.jsonocel")


@pytest.fixture
def minimal_json_path() -> str:
    return fixture_path("json/minimal.jsonocel")


@pytest.fixture
def minimal_xml_path() -> str:
    return fixture_path("xml/minimal.xmlocel")


@pytest.fixture
def invalid_json_str() -> str:
    return load_data_from_file("invalid_json.txt")
