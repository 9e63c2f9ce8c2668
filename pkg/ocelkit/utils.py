from __future__ import annotations

import os
import typing
from contextlib import contextmanager
from typing import IO, Any, Iterator, Optional, Sequence, Union

import pydantic

if typing.TYPE_CHECKING:
    from .diagnostics import Diagnostic, DiagnosticCode

PathLike = Union[str, "os.PathLike[str]"]
Source = Union[PathLike, IO[bytes]]
Sink = Union[PathLike, IO[bytes]]
ParsedJson = Any


class OcelError(Exception):
    """ocelkit exception"""

    def __init__(self, reason: str, location: Optional[str] = None) -> None:
        self.reason = str(reason)
        self.location = location
        super(Exception, self).__init__(self, reason)

    def __str__(self) -> str:
        return self.reason


class OcelIOError(OcelError):
    """The file or stream cannot be opened, read or written"""


class FormatDetectionError(OcelError):
    """No exchange format could be inferred for a path"""


class UnknownEvent(OcelError):
    def __init__(self, event_id: str) -> None:
        super().__init__(f"Unknown event: {event_id!r}")
        self.event_id = event_id


class UnknownObject(OcelError):
    def __init__(self, object_id: str) -> None:
        super().__init__(f"Unknown object: {object_id!r}")
        self.object_id = object_id


class TimestampError(OcelError):
    """Unparseable timestamp text, or INFINITY on its way to a file"""


class InvalidLog(OcelError):
    """A writer refuses to serialize a log"""

    def __init__(
        self, reason: str, diagnostics: Sequence[Diagnostic] = ()
    ) -> None:
        super().__init__(reason)
        self.diagnostics = list(diagnostics)


class LoadError(OcelError):
    """A reader refuses its input; always carries at least one diagnostic"""

    code: DiagnosticCode | None = None

    def __init__(
        self,
        reason: str,
        location: str = "",
        diagnostics: Sequence[Diagnostic] | None = None,
        code: DiagnosticCode | None = None,
    ) -> None:
        super().__init__(reason, location=location)
        if code is not None:
            self.code = code
        if diagnostics is None:
            from .diagnostics import Diagnostic, DiagnosticCode

            diagnostics = [
                Diagnostic.of(
                    self.code or DiagnosticCode.SCHEMA_VIOLATION, location, reason
                )
            ]
        self.diagnostics = list(diagnostics)


def _code(name: str) -> DiagnosticCode:
    from .diagnostics import DiagnosticCode

    return DiagnosticCode(name)


class XmlSyntaxError(LoadError):
    def __init__(self, reason: str, location: str = "/") -> None:
        super().__init__(reason, location, code=_code("XML_SYNTAX"))


class JsonSyntaxError(LoadError):
    def __init__(self, reason: str, location: str = "") -> None:
        super().__init__(reason, location, code=_code("JSON_SYNTAX"))


class SchemaViolation(LoadError):
    def __init__(self, reason: str, location: str) -> None:
        super().__init__(reason, location, code=_code("SCHEMA_VIOLATION"))


class ValueParseError(LoadError):
    def __init__(
        self, reason: str, location: str, code: DiagnosticCode | None = None
    ) -> None:
        super().__init__(
            reason, location, code=code or _code("ATTR_KIND_MISMATCH")
        )


class NotADatabase(LoadError):
    def __init__(self, reason: str, location: str = "") -> None:
        super().__init__(reason, location, code=_code("NOT_A_DATABASE"))


class MissingTable(LoadError):
    def __init__(self, table: str) -> None:
        super().__init__(
            f"Required table {table!r} is missing", table, code=_code("MISSING_TABLE")
        )
        self.table = table


@contextmanager
def schema_errors(location: str) -> Iterator[None]:
    """Report a model that refuses a read value as a SchemaViolation at `location`"""
    try:
        yield
    except pydantic.ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        msg = f"{e.title}.{field}: {error['msg']}" if field else error["msg"]
        raise SchemaViolation(msg, location) from None


def read_source(source: Source) -> bytes:
    """Whole content of a path or a binary file object"""
    try:
        if hasattr(source, "read"):
            return source.read()  # type: ignore[union-attr]
        with open(source, "rb") as f:  # type: ignore[arg-type]
            return f.read()
    except OSError as e:
        msg = f"Cannot read {source!r}: {e}"
        raise OcelIOError(msg) from e


def write_sink(sink: Sink, data: bytes) -> None:
    try:
        if hasattr(sink, "write"):
            sink.write(data)  # type: ignore[union-attr]
            return
        with open(sink, "wb") as f:  # type: ignore[arg-type]
            f.write(data)
    except OSError as e:
        msg = f"Cannot write {sink!r}: {e}"
        raise OcelIOError(msg) from e
