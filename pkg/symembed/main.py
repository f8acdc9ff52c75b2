import argparse
import json
import logging
import sys
from typing import List, Optional

from .catalog import load_file
from .config import Config
from .errors import InputDocumentError
from .orchestrator import ComputationOrchestrator

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "spherical-roots", "valuation-cone", "orbits", "canonical",
            "essential-pairs", "enveloping", "abelianization", "hilbert", "list", "down-set")
DOT_COMMANDS = ("orbits", "canonical")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symembed",
                     description="Spherical lattices, monoids and embeddings of symmetric spaces")
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", metavar="FILE", help="JSON document with root_datum and satake")
    source.add_argument("--space", metavar="NAME", help="catalog name, see the list command")
    parser.add_argument("--format", choices=("json", "dot", "text"), default="json")
    parser.add_argument("--bound", type=int, default=Config.DEFAULT_BOUND,
                        help="generator degree for bounded searches (default %(default)s)")
    parser.add_argument("--enveloping", action="store_true",
                        help="work with the enveloping monoid instead of the input monoid")
    parser.add_argument("--weight", help="comma separated X-coordinates, for down-set")
    return parser


def _parse_weight(text: Optional[str]):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--weight must be comma separated integers, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _text(command: str, result) -> str:
    if command == "essential-pairs":
        lines = []
        for row in result["pairs"]:
            j1 = "{" + ",".join(str(i) for i in row["J1"]) + "}"
            j2 = "{" + ",".join(str(i) for i in row["J2"]) + "}"
            lines.append(f"{j1:<12} {j2:<12} {'yes' if row['essential'] else 'no'}")
        lines.append(f"essential: {result['essential']} of {result['total']}")
        return "\n".join(lines) + "\n"
    if command == "list":
        return "\n".join(result["spaces"]) + "\n"
    return "".join(f"{key}: {json.dumps(result[key], sort_keys=True, ensure_ascii=False)}\n"
                   for key in sorted(result))


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.format == "dot" and args.command not in DOT_COMMANDS:
            raise UsageError(f"--format dot is only available for {', '.join(DOT_COMMANDS)}")
        if args.bound < 0:
            raise UsageError("--bound must be nonnegative")
        weight = _parse_weight(args.weight)
        document = load_file(args.input) if args.input else None
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except InputDocumentError as e:
        err.write(f"input error: {e}\n")
        return EXIT_USAGE

    orchestrator = ComputationOrchestrator(bound=args.bound)
    options = {}
    if args.enveloping:
        options["enveloping"] = True
    if weight is not None:
        options["weight"] = weight
    if args.command == "list":
        response = orchestrator.run("list")
    else:
        response = orchestrator.run(args.command, document=document, space=args.space, **options)

    if not response["success"]:
        if response["kind"] == "validation":
            out.write(_dump(response.get("details", {"error": response["error"]})))
            return EXIT_VALIDATION
        err.write(f"{response['kind']} error: {response['error']}\n")
        return EXIT_USAGE

    if args.format == "dot":
        out.write(response["dot"])
    elif args.format == "text":
        out.write(_text(args.command, response["result"]))
    else:
        out.write(_dump(response["result"]))
    return EXIT_OK


def main():
    Config.setup_logging()
    sys.exit(run())


if __name__ == "__main__":
    main()
