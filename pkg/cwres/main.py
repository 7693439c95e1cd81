"""
cwres command-line interface.

Every command prints one JSON report on stdout:
- RunReport when the command ran; exit code 0 if its checks passed, 1 if a verdict is false
- ErrorReport (kind, location, message) on invalid input; exit code 2

Flags are generated from the command manifests. Logging goes to stderr.
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional

from cwres.config import settings
from cwres.errors import CwresError
from cwres.field_linalg import FieldConfig
from cwres.models import ErrorDetail, ErrorReport, RunReport
from cwres.registry import CommandRegistry, registry

logger = logging.getLogger(__name__)

_ARG_TYPES = {"integer": int, "string": str}


def build_parser(reg: CommandRegistry = registry) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="coefficient field: q or fp:<p> (default q)")
    common.add_argument("--pretty", action="store_true", help="indented JSON and a summary line on stderr")
    common.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")

    parser = argparse.ArgumentParser(
        prog="cwres",
        description="Poset construction D(P), cellular chain complexes and monomial ideal resolutions",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in reg.get_all_commands():
        sub = subparsers.add_parser(command["name"], help=command["description"],
                                    description=command["description"], parents=[common])
        for name, schema in command["parameters"].get("properties", {}).items():
            flag = "--" + name.replace("_", "-")
            if schema.get("type") == "boolean":
                sub.add_argument(flag, dest=name, action="store_true", help=schema.get("description"))
            else:
                sub.add_argument(flag, dest=name, type=_ARG_TYPES.get(schema.get("type"), str),
                                 help=schema.get("description"))
    return parser


def _emit(report: Any, pretty: bool) -> None:
    exclude = {"timing"} if getattr(report, "timing", 1) is None else None
    sys.stdout.write(report.model_dump_json(indent=2 if pretty else None, exclude=exclude) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=settings.log_level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    spec = registry.get_command(args.command)
    parameters: Dict[str, Any] = {name: getattr(args, name) for name in spec["parameters"].get("properties", {})}

    started = time.perf_counter()
    try:
        field = FieldConfig.parse(args.field)
        outcome = registry.execute_command(args.command, parameters, field)
    except CwresError as e:
        logger.error("%s failed: %s", args.command, e.message)
        _emit(ErrorReport(command=args.command, error=ErrorDetail(**e.to_dict())), args.pretty)
        return 2

    report = RunReport(
        command=args.command,
        arguments={k: v for k, v in parameters.items() if v not in (None, False)},
        field=field.label,
        inputs=outcome.inputs,
        ok=outcome.ok,
        result=outcome.result,
        warnings=outcome.warnings,
        timing=round(time.perf_counter() - started, 6) if args.timing else None,
    )
    _emit(report, args.pretty)
    if args.pretty:
        print(f"{args.command}: {'ok' if outcome.ok else 'check failed'}", file=sys.stderr)
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
