"""AST node definitions for QDL programs.

Every node carries a half-open source span: (start_line, start_col) points at
the node's first character, (end_line, end_col) one past its last. Lines and
columns are 1-based. Spans are excluded from equality, so `==` between nodes
is structural equality (the round-trip contract compares with `==`).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def contains(self, other: "Span") -> bool:
        starts_ok = (self.start_line, self.start_col) <= (other.start_line, other.start_col)
        ends_ok = (other.end_line, other.end_col) <= (self.end_line, self.end_col)
        return starts_ok and ends_ok

    def slice(self, text: str) -> str:
        """Cut this span out of the source text it was produced from."""
        lines = text.split("\n")
        if self.start_line == self.end_line:
            return lines[self.start_line - 1][self.start_col - 1 : self.end_col - 1]
        parts = [lines[self.start_line - 1][self.start_col - 1 :]]
        parts.extend(lines[self.start_line : self.end_line - 1])
        parts.append(lines[self.end_line - 1][: self.end_col - 1])
        return "\n".join(parts)


@dataclass(frozen=True)
class SourceProgram:
    """A named QDL source text. All line/column coordinates index into `text`."""

    name: str
    text: str


class Node:
    """Base for all AST nodes: `kind`, `children`, and a `span` field."""

    span: Span

    @property
    def kind(self) -> str:
        return type(self).__name__

    def children(self) -> list["Node"]:
        out: list[Node] = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Node):
                out.append(value)
            elif isinstance(value, tuple):
                out.extend(v for v in value if isinstance(v, Node))
        return out


def _span() -> Span:
    return field(compare=False)  # type: ignore[return-value]


# --- expressions ---

@dataclass(frozen=True)
class Num(Node):
    value: int | float
    span: Span = _span()


@dataclass(frozen=True)
class Var(Node):
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class UnaryOp(Node):
    op: str  # "-"
    operand: Node
    span: Span = _span()


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # + - * / < <= > >= == !=
    left: Node
    right: Node
    span: Span = _span()


@dataclass(frozen=True)
class MeasureExpr(Node):
    """Mid-circuit measurement of one wire; evaluates to the 0/1 outcome."""

    wire: Node
    span: Span = _span()


# --- measurements (qnode return forms) ---

@dataclass(frozen=True)
class PauliFactor(Node):
    pauli: str  # X | Y | Z
    wire: Node
    span: Span = _span()


@dataclass(frozen=True)
class ExpvalMeas(Node):
    factors: tuple[PauliFactor, ...]
    span: Span = _span()


@dataclass(frozen=True)
class ProbsMeas(Node):
    wires: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class StateMeas(Node):
    span: Span = _span()


# --- statements ---

@dataclass(frozen=True)
class GateStmt(Node):
    name: str
    args: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class CallStmt(Node):
    """A call statement: a subroutine call inside a body, or a top-level qnode call."""

    name: str
    args: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class ForStmt(Node):
    var: str
    start: Node
    stop: Node
    body: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class IfStmt(Node):
    cond: Node
    then_body: tuple[Node, ...]
    else_body: tuple[Node, ...] | None
    span: Span = _span()


@dataclass(frozen=True)
class LetStmt(Node):
    name: str
    value: Node
    span: Span = _span()


@dataclass(frozen=True)
class ReturnStmt(Node):
    measurements: tuple[Node, ...]
    span: Span = _span()


# --- definitions and the program ---

@dataclass(frozen=True)
class Decorator(Node):
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class QnodeDef(Node):
    name: str
    params: tuple[str, ...]
    wires: int
    decorators: tuple[Decorator, ...]
    body: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class FnDef(Node):
    name: str
    params: tuple[str, ...]
    body: tuple[Node, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Program(Node):
    items: tuple[Node, ...]
    span: Span = _span()


Ast = Program
