"""Interactive debugger for QDL quantum programs.

The pieces, bottom to top:

- `qdbg.frontend`: lexer, parser, semantic checker, pretty-printer
- `qdbg.sim`: dense statevector simulation
- `qdbg.trace`: tracing interpreter, breakpoints, Snapshots
- `qdbg.transforms`: cancel_inverses / merge_rotations rewrite passes
- `qdbg.render`: laid-out circuit views per call frame
- `qdbg.server`: WebSocket/HTTP wire protocol plus session registry
- `qdbg.cli`: `qdbg serve` and `qdbg run`
"""
from .frontend import SourceProgram, check, parse, parse_text, unparse
from .render import build_view, transform_view
from .trace import (
    BudgetExceededError,
    DebugSession,
    QdlCheckError,
    QdlRuntimeError,
    Snapshot,
    frame_detail,
    run_to_end,
    start_session,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DebugSession",
    "QdlCheckError",
    "QdlRuntimeError",
    "Snapshot",
    "SourceProgram",
    "build_view",
    "check",
    "frame_detail",
    "parse",
    "parse_text",
    "run_to_end",
    "start_session",
    "transform_view",
    "unparse",
    "__version__",
]
