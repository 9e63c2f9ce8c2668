"""Timestamp universe: UTC instants at millisecond precision plus ZERO and INFINITY"""

from __future__ import annotations

import re
from datetime import datetime, timedelta, timezone

from .utils import TimestampError

__all__ = (
    "INFINITY",
    "ZERO",
    "format_timestamp",
    "is_infinity",
    "parse_timestamp",
    "to_timestamp",
)

ZERO = datetime(1970, 1, 1, tzinfo=timezone.utc)
# In-memory sentinel only; never rendered to text.
INFINITY = datetime.max.replace(tzinfo=timezone.utc)

_TIMESTAMP_RE = re.compile(
    r"""
    ^\s*
    (?P<year>\d{4})-(?P<month>\d{2})-(?P<day>\d{2})
    (?:
        [T\ ]
        (?P<hour>\d{2}):(?P<minute>\d{2})
        (?::(?P<second>\d{2})(?:[.,](?P<fraction>\d{1,9}))?)?
    )?
    \s*
    (?P<offset>Z|z|UTC|GMT|[+-]\d{2}(?::?\d{2})?)?
    \s*$
    """,
    re.VERBOSE,
)


def is_infinity(ts: datetime) -> bool:
    return ts == INFINITY


def to_timestamp(value: datetime) -> datetime:
    """Normalize a datetime to UTC with millisecond precision (naive means UTC)"""
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    if value == INFINITY:
        return INFINITY
    value = value.astimezone(timezone.utc)
    return value.replace(microsecond=value.microsecond - value.microsecond % 1000)


def _parse_offset(text: str | None) -> timezone:
    if text is None or text.upper() in {"Z", "UTC", "GMT"}:
        return timezone.utc
    sign = -1 if text[0] == "-" else 1
    digits = text[1:].replace(":", "")
    hours = int(digits[:2])
    minutes = int(digits[2:] or 0)
    return timezone(sign * timedelta(hours=hours, minutes=minutes))


def parse_timestamp(text: str) -> datetime:
    """Parse ISO 8601 text, also the `YYYY-MM-DD HH:MM UTC` form used in tables"""
    match = _TIMESTAMP_RE.match(text) if isinstance(text, str) else None
    if match is None:
        msg = f"Invalid timestamp: {text!r}"
        raise TimestampError(msg)
    fraction = (match["fraction"] or "0")[:6].ljust(6, "0")
    try:
        parsed = datetime(
            int(match["year"]),
            int(match["month"]),
            int(match["day"]),
            int(match["hour"] or 0),
            int(match["minute"] or 0),
            int(match["second"] or 0),
            int(fraction),
            tzinfo=_parse_offset(match["offset"]),
        )
        return to_timestamp(parsed)
    except (ValueError, OverflowError) as e:
        msg = f"Invalid timestamp: {text!r} ({e})"
        raise TimestampError(msg) from e


def format_timestamp(ts: datetime, millis: bool = False) -> str:
    """Render as UTC ISO 8601 with a trailing Z"""
    if is_infinity(ts):
        msg = "INFINITY cannot be serialized"
        raise TimestampError(msg)
    ts = to_timestamp(ts)
    # four-digit years, also before 1000
    text = (
        f"{ts.year:04d}-{ts.month:02d}-{ts.day:02d}"
        f"T{ts.hour:02d}:{ts.minute:02d}:{ts.second:02d}"
    )
    ms = ts.microsecond // 1000
    if millis or ms:
        text += f".{ms:03d}"
    return text + "Z"
