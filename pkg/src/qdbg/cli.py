"""Command line entry points.

`qdbg serve --port N` starts the WebSocket/HTTP server. `qdbg run FILE`
executes a program headlessly, printing one JSON Snapshot per breakpoint
pause plus the final one; exit status 0 on success, 1 when the program has
diagnostics or dies at runtime, 2 for usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .frontend import ast, check, parse
from .render import NotReadyError, build_view, transform_view
from .trace import BudgetExceededError, UnknownFrameError, start_session


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="qdbg", description="QDL quantum program debugger")
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the session server")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.add_argument("--host", default="127.0.0.1")

    run_p = sub.add_parser("run", help="execute a program headlessly")
    run_p.add_argument("file", help="QDL source file")
    run_p.add_argument(
        "--break",
        dest="breaks",
        action="append",
        default=[],
        metavar="L1,L2,...",
        help="breakpoint lines, comma separated (repeatable)",
    )
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--frame", type=int, default=None, help="print this frame's circuit view")
    run_p.add_argument(
        "--json", action="store_true", help="compact output, one JSON document per line"
    )

    args = parser.parse_args(argv)
    if args.command == "serve":
        return _serve(args)
    return _run(args)


def _serve(args) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def _emit(doc: dict, compact: bool) -> None:
    if compact:
        print(json.dumps(doc, separators=(",", ":")))
    else:
        print(json.dumps(doc, indent=2))


def _parse_breaks(values: list[str]) -> set[int]:
    lines: set[int] = set()
    for chunk in values:
        for piece in chunk.split(","):
            piece = piece.strip()
            if piece:
                lines.add(int(piece))
    return lines


def _run(args) -> int:
    try:
        text = open(args.file, encoding="utf-8").read()
    except OSError as e:
        print(f"qdbg: cannot read {args.file}: {e.strerror}", file=sys.stderr)
        return 2
    try:
        breakpoints = _parse_breaks(args.breaks)
    except ValueError:
        print("qdbg: --break takes comma-separated line numbers", file=sys.stderr)
        return 2

    result = parse(ast.SourceProgram(args.file, text))
    if isinstance(result, list):
        _emit({"ev": "diagnostics", "items": [d.to_json_dict() for d in result]}, args.json)
        return 1
    diags = check(result)
    if diags:
        _emit({"ev": "diagnostics", "items": [d.to_json_dict() for d in diags]}, args.json)
        return 1

    session = start_session(result, breakpoints, args.seed)
    snapshot = None
    while snapshot is None or snapshot.status == "paused":
        try:
            snapshot = session.next()
        except BudgetExceededError as e:
            _emit({"ev": "error", "code": "budget_exceeded", "message": str(e)}, args.json)
            return 1
        _emit(snapshot.to_json_dict(), args.json)

    if args.frame is not None:
        try:
            rec = snapshot.frame_by_id(args.frame)
            if rec.kind == "transform_application":
                view = transform_view(snapshot, args.frame)
            else:
                view = build_view(snapshot, args.frame)
        except UnknownFrameError:
            _emit(
                {"ev": "error", "code": "unknown_frame", "message": f"no frame {args.frame}"},
                args.json,
            )
            return 1
        except NotReadyError as e:
            _emit({"ev": "error", "code": "transform_not_ready", "message": str(e)}, args.json)
            return 1
        _emit({"ev": "view", "frame": args.frame, "circuit": view.to_json_dict()}, args.json)

    return 0 if snapshot.status == "finished" else 1
