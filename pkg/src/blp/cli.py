"""Command line: ``blp check``, ``blp query`` and the interactive ``blp shell``.

Exit status is 0 on success, 1 for errors in the user's program or query
(including an ill-defined program), and 2 when a resource bound is hit or
something unexpected goes wrong.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence, TextIO

from .errors import BlpError, ResourceExceeded
from .hugin import write_hugin_net
from .inference import ENGINES, QueryOptions, answer_network, query_network
from .parser import parse_program, parse_query
from .proofs import DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES, Limits
from .semantics import DEFAULT_MAX_ATOMS, DEFAULT_MAX_ITERATIONS, ILL_DEFINED, WELL_DEFINED, Bounds, check_well_defined

EXIT_OK, EXIT_USER, EXIT_RESOURCE = 0, 1, 2

SHELL_HELP = """\
consult <file>.      load a program (also: ['<file>'].)
<query>.             e.g. height(john) | height(ann)=165.
help.                this text
exit.                leave the shell"""


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blp", description="Bayesian logic program engine")
    sub = ap.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse a program and report whether it is well-defined")
    check.add_argument("file")
    check.add_argument("--max-atoms", type=_positive, default=DEFAULT_MAX_ATOMS,
                       help="bound on the size of the least Herbrand model")
    check.add_argument("--max-iterations", type=_positive, default=DEFAULT_MAX_ITERATIONS)

    query = sub.add_parser("query", help="answer one probabilistic query")
    query.add_argument("file")
    query.add_argument("query", help='e.g. "height(john) | height(ann)=165"')
    query.add_argument("--export-net", metavar="PATH", help="write the support network as a NET file")
    query.add_argument("--no-prune", action="store_true", help="keep components without query atoms")
    query.add_argument("--depth-limit", type=_positive, default=DEFAULT_MAX_DEPTH,
                       help="maximum SLD derivation depth")
    query.add_argument("--max-atoms", type=_positive, default=DEFAULT_MAX_NODES,
                       help="maximum number of SLD tree nodes per query atom")
    query.add_argument("--engine", choices=ENGINES, default="auto")
    query.add_argument("--output", choices=("text", "json"), default="text")

    shell = sub.add_parser("shell", help="interactive query loop")
    shell.add_argument("file", nargs="?")
    shell.add_argument("--export-net", metavar="PATH",
                       help="write each query's support network to PATH")
    return ap


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _error(exc: BaseException, err: TextIO) -> int:
    if isinstance(exc, ResourceExceeded):
        print(f"error: {exc.category}: {exc}", file=err)
        return EXIT_RESOURCE
    if isinstance(exc, BlpError):
        print(f"error: {exc.category}: {exc}", file=err)
        return EXIT_USER
    if isinstance(exc, OSError):
        print(f"error: cannot read {exc.filename}: {exc.strerror}", file=err)
        return EXIT_USER
    print(f"internal error: {type(exc).__name__}: {exc}", file=err)
    return EXIT_RESOURCE


def _cmd_check(args, out, err) -> int:
    p = parse_program(_read(args.file))
    report = check_well_defined(p, Bounds(args.max_iterations, args.max_atoms))
    print(report, file=out)
    if report.status == WELL_DEFINED:
        return EXIT_OK
    return EXIT_USER if report.status == ILL_DEFINED else EXIT_RESOURCE


def _emit(answer, fmt, out):
    if fmt == "json":
        print(json.dumps(answer.to_json()), file=out)
    else:
        print(answer.format(), file=out)


def _cmd_query(args, out, err) -> int:
    p = parse_program(_read(args.file))
    q = parse_query(args.query, p)
    options = QueryOptions(engine=args.engine, prune=not args.no_prune,
                           limits=Limits(args.depth_limit, args.max_atoms))
    n = query_network(p, q, options)
    if args.export_net:
        write_hugin_net(n, args.export_net)
    _emit(answer_network(n, q, options), args.output, out)
    return EXIT_OK


def _shell_command(line: str):
    """Split a shell line into (command, argument)."""
    text = line.strip()
    if text.endswith("."):
        text = text[:-1].rstrip()
    if text in ("exit", "halt", "quit"):
        return "exit", None
    if text == "help":
        return "help", None
    if text.startswith("[") and text.endswith("]"):
        return "consult", text[1:-1].strip().strip("'\"")
    if text.startswith("consult"):
        arg = text[len("consult"):].strip()
        if arg.startswith("(") and arg.endswith(")"):
            arg = arg[1:-1].strip()
        return "consult", arg.strip("'\"")
    return "query", text


def run_shell(program_path: Optional[str], inp: TextIO, out: TextIO, err: TextIO,
              export_net: Optional[str] = None) -> int:
    program = None
    if program_path:
        program = parse_program(_read(program_path))
    interactive = hasattr(inp, "isatty") and inp.isatty()
    print("blp shell; type help. for commands", file=out)
    while True:
        if interactive:
            out.write("blp> ")
            out.flush()
        line = inp.readline()
        if not line:
            return EXIT_OK
        if not line.strip():
            continue
        cmd, arg = _shell_command(line)
        try:
            if cmd == "exit":
                return EXIT_OK
            if cmd == "help":
                print(SHELL_HELP, file=out)
            elif cmd == "consult":
                program = parse_program(_read(arg))
                print(f"consulted {arg}", file=out)
            elif program is None:
                print("error: no program loaded; use consult <file>.", file=err)
            else:
                q = parse_query(arg, program)
                n = query_network(program, q)
                if export_net:
                    write_hugin_net(n, export_net)
                print(answer_network(n, q).format(), file=out)
        except Exception as exc:  # the shell reports and keeps going
            _error(exc, err)


def run_cli(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None,
            inp: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    inp = inp or sys.stdin
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USER
    try:
        if args.command == "check":
            return _cmd_check(args, out, err)
        if args.command == "query":
            return _cmd_query(args, out, err)
        return run_shell(args.file, inp, out, err, args.export_net)
    except Exception as exc:
        return _error(exc, err)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
