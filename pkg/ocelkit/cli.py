"""Command-line front end: validate, convert, stats and query"""

from __future__ import annotations

import json
import logging
import os
import sys
from argparse import ArgumentParser, Namespace
from typing import Any, Callable, Dict, List, Optional, Sequence

from .core import eaval, log_stats, oaval_at, relobj_event, relobj_object
from .diagnostics import Diagnostic, has_errors, sort_diagnostics
from .formats import Format, detect_format, read_log, write_log
from .models import RelatedObject
from .timestamps import parse_timestamp
from .utils import InvalidLog, LoadError, OcelError
from .validation import validate_model, validate_relational_layout

__all__ = ("EXIT_FAILURE", "EXIT_INVALID", "EXIT_OK", "main", "setup_logging")

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILURE = 2

LOG_ENV = "OCELKIT_LOG"
LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(message)s (%(filename)s:%(lineno)s)"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

FORMAT_CHOICES = [fmt.value for fmt in Format] + ["auto"]


def setup_logging(quiet: bool = False) -> None:
    level_name = os.environ.get(LOG_ENV, "WARNING").upper()
    level = logging.getLevelName(level_name)
    if not isinstance(level, int):
        level = logging.WARNING
    if quiet:
        level = max(level, logging.ERROR)
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        stream=sys.stderr,
    )
    logging.getLogger("ocelkit").setLevel(level)


class _Console:
    """Machine output on stdout, human messages on stderr"""

    def __init__(self, quiet: bool) -> None:
        self.quiet = quiet

    @staticmethod
    def emit(payload: Any) -> None:
        print(json.dumps(payload, ensure_ascii=False), file=sys.stdout)

    @staticmethod
    def diagnostics(diagnostics: Sequence[Diagnostic]) -> None:
        for diagnostic in diagnostics:
            print(diagnostic.to_json_line(), file=sys.stdout)

    def say(self, message: str) -> None:
        if not self.quiet:
            print(f"ocelkit: {message}", file=sys.stderr)


def _format(value: Optional[str]) -> Optional[Format]:
    return None if value in (None, "auto") else Format(value)


def cmd_validate(args: Namespace, console: _Console) -> int:
    fmt = _format(args.source_format) or detect_format(args.path)
    found: List[Diagnostic] = []
    if fmt is Format.RELATIONAL:
        found = validate_relational_layout(args.path)
        if has_errors(found):
            console.diagnostics(found)
            return EXIT_INVALID
    try:
        log = read_log(args.path, fmt)
    except LoadError as e:
        console.diagnostics(e.diagnostics)
        return EXIT_INVALID
    found = sort_diagnostics(found + validate_model(log))
    console.diagnostics(found)
    errors = sum(1 for d in found if d.is_error)
    console.say(f"{args.path}: {errors} error(s), {len(found) - errors} warning(s)")
    return EXIT_INVALID if errors else EXIT_OK


def cmd_convert(args: Namespace, console: _Console) -> int:
    try:
        log = read_log(args.in_path, _format(args.source_format))
    except LoadError as e:
        console.diagnostics(e.diagnostics)
        return EXIT_INVALID
    found = validate_model(log)
    if has_errors(found) and not args.force:
        console.diagnostics(found)
        console.say(f"{args.in_path} has validation errors; use --force to convert anyway")
        return EXIT_INVALID
    try:
        write_log(log, args.out_path, _format(args.target_format))
    except InvalidLog as e:
        console.diagnostics(e.diagnostics)
        console.say(str(e))
        return EXIT_INVALID
    logger.info("Converted %s to %s", args.in_path, args.out_path)
    return EXIT_OK


def cmd_stats(args: Namespace, console: _Console) -> int:
    try:
        log = read_log(args.path, _format(args.source_format))
    except LoadError as e:
        console.diagnostics(e.diagnostics)
        return EXIT_INVALID
    console.emit(log_stats(log))
    return EXIT_OK


def _relobj_records(pairs: Sequence[RelatedObject]) -> List[Dict[str, str]]:
    return [{"objectId": object_id, "qualifier": qualifier} for object_id, qualifier in pairs]


def cmd_query(args: Namespace, console: _Console) -> int:
    try:
        log = read_log(args.path, _format(args.source_format))
    except LoadError as e:
        console.diagnostics(e.diagnostics)
        return EXIT_INVALID
    if args.kind == "oaval":
        value = oaval_at(log, args.object, args.attr, parse_timestamp(args.time))
        console.emit(value.to_json() if value is not None else None)
    elif args.kind == "eaval":
        value = eaval(log, args.event, args.attr)
        console.emit(value.to_json() if value is not None else None)
    elif args.event is not None:
        console.emit(_relobj_records(relobj_event(log, args.event)))
    else:
        console.emit(_relobj_records(relobj_object(log, args.object)))
    return EXIT_OK


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "--from", dest="source_format", choices=FORMAT_CHOICES, help="input format"
    )
    common.add_argument(
        "--to", dest="target_format", choices=FORMAT_CHOICES, help="output format"
    )
    common.add_argument(
        "--force", action="store_true", help="convert even when the input has errors"
    )
    common.add_argument("--quiet", action="store_true", help="only machine output")

    parser = ArgumentParser(prog="ocelkit", description="Object-centric event log toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate_parser = subparsers.add_parser("validate", parents=[common])
    validate_parser.add_argument("path")
    validate_parser.set_defaults(func=cmd_validate)

    convert_parser = subparsers.add_parser("convert", parents=[common])
    convert_parser.add_argument("in_path")
    convert_parser.add_argument("out_path")
    convert_parser.set_defaults(func=cmd_convert)

    stats_parser = subparsers.add_parser("stats", parents=[common])
    stats_parser.add_argument("path")
    stats_parser.set_defaults(func=cmd_stats)

    query_parser = subparsers.add_parser("query", parents=[common])
    query_parser.add_argument("path")
    kinds = query_parser.add_subparsers(dest="kind", required=True)
    oaval_parser = kinds.add_parser("oaval")
    oaval_parser.add_argument("--object", required=True)
    oaval_parser.add_argument("--attr", required=True)
    oaval_parser.add_argument("--time", required=True)
    relobj_parser = kinds.add_parser("relobj")
    target = relobj_parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--event")
    target.add_argument("--object")
    eaval_parser = kinds.add_parser("eaval")
    eaval_parser.add_argument("--event", required=True)
    eaval_parser.add_argument("--attr", required=True)
    query_parser.set_defaults(func=cmd_query)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        if e.code is None:
            return EXIT_OK
        return e.code if isinstance(e.code, int) else EXIT_FAILURE

    setup_logging(args.quiet)
    console = _Console(args.quiet)
    func: Callable[[Namespace, _Console], int] = args.func
    try:
        return func(args, console)
    except LoadError as e:
        console.diagnostics(e.diagnostics)
        return EXIT_INVALID
    except OcelError as e:
        # unknown ids, unparseable --time, undetectable formats
        console.say(str(e))
        return EXIT_FAILURE
    except Exception as e:
        logger.exception("Unexpected failure in %r", args.command)
        console.say(f"Unexpected failure: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
