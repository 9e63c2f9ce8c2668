"""Format detection and codec dispatch"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Optional

from .jsonocel import read_json, write_json
from .models import Log
from .relational import read_relational, write_relational
from .utils import FormatDetectionError, OcelIOError, PathLike
from .xmlocel import read_xml, write_xml

__all__ = ("Format", "detect_format", "read_log", "write_log")

logger = logging.getLogger(__name__)


class Format(str, Enum):
    RELATIONAL = "relational"
    XML = "xml"
    JSON = "json"


EXTENSIONS: Dict[str, Format] = {
    ".sqlite": Format.RELATIONAL,
    ".db": Format.RELATIONAL,
    ".xml": Format.XML,
    ".xmlocel": Format.XML,
    ".json": Format.JSON,
    ".jsonocel": Format.JSON,
}

SQLITE_MAGIC = b"SQLite format 3\x00"

_READERS: Dict[Format, Callable[[PathLike], Log]] = {
    Format.RELATIONAL: read_relational,
    Format.XML: read_xml,
    Format.JSON: read_json,
}

_WRITERS: Dict[Format, Callable[[Log, PathLike], None]] = {
    Format.RELATIONAL: write_relational,
    Format.XML: write_xml,
    Format.JSON: write_json,
}


def _sniff(path: Path) -> Optional[Format]:
    try:
        with open(path, "rb") as f:
            head = f.read(len(SQLITE_MAGIC))
    except OSError as e:
        msg = f"Cannot read {path}: {e}"
        raise OcelIOError(msg) from e
    if head.startswith(SQLITE_MAGIC):
        return Format.RELATIONAL
    text = head.lstrip(b"\xef\xbb\xbf").lstrip()
    if text.startswith(b"<"):
        return Format.XML
    if text.startswith(b"{"):
        return Format.JSON
    return None


def detect_format(path: PathLike, *, must_exist: bool = True) -> Format:
    """Infer the format from the extension, then from the leading bytes

    Output paths (`must_exist=False`) are judged by extension only.
    """
    p = Path(path)
    fmt = EXTENSIONS.get(p.suffix.lower())
    if fmt is not None:
        return fmt
    if must_exist:
        if not p.is_file():
            msg = f"No such file: {p}"
            raise OcelIOError(msg)
        fmt = _sniff(p)
        if fmt is not None:
            logger.debug("Detected %s format from the content of %s", fmt.value, p)
            return fmt
    msg = f"Cannot infer the format of {p}; pass it explicitly"
    raise FormatDetectionError(msg, str(p))


def read_log(path: PathLike, fmt: Format | str | None = None) -> Log:
    fmt = Format(fmt) if fmt is not None else detect_format(path)
    if fmt is not Format.RELATIONAL and not Path(path).is_file():
        msg = f"No such file: {path}"
        raise OcelIOError(msg)
    return _READERS[fmt](path)


def write_log(log: Log, path: PathLike, fmt: Format | str | None = None) -> None:
    fmt = Format(fmt) if fmt is not None else detect_format(path, must_exist=False)
    _WRITERS[fmt](log, path)
