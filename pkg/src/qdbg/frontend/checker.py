"""Semantic checks over a parsed program.

`check` returns the full list of problems it can find (it does not stop at
the first), ordered by source position. A program is executable iff the list
is empty. `executable_lines` feeds breakpoint binding.
"""
from __future__ import annotations

from ..lang import GATE_ARITY, RESERVED_NAMES, TRANSFORM_NAMES
from . import ast
from .diagnostics import Diagnostic, semantic_error


def check(program: ast.Program) -> list[Diagnostic]:
    return _Checker(program).run()


def executable_lines(program: ast.Program) -> set[int]:
    """Lines where a statement starts, plus transform decorator lines."""
    lines: set[int] = set()

    def visit_block(body: tuple[ast.Node, ...]) -> None:
        for stmt in body:
            lines.add(stmt.span.start_line)
            if isinstance(stmt, ast.ForStmt):
                visit_block(stmt.body)
            elif isinstance(stmt, ast.IfStmt):
                visit_block(stmt.then_body)
                if stmt.else_body is not None:
                    visit_block(stmt.else_body)

    for item in program.items:
        if isinstance(item, ast.QnodeDef):
            for dec in item.decorators:
                lines.add(dec.span.start_line)
            visit_block(item.body)
        elif isinstance(item, ast.FnDef):
            visit_block(item.body)
        else:
            lines.add(item.span.start_line)
    return lines


class _Checker:
    def __init__(self, program: ast.Program):
        self.program = program
        self.diags: list[Diagnostic] = []
        self.defs: dict[str, ast.QnodeDef | ast.FnDef] = {}

    def error(self, span: ast.Span, message: str) -> None:
        self.diags.append(semantic_error(span.start_line, span.start_col, message))

    def run(self) -> list[Diagnostic]:
        self.collect_definitions()
        for item in self.program.items:
            if isinstance(item, ast.QnodeDef):
                self.check_qnode(item)
            elif isinstance(item, ast.FnDef):
                self.check_fn(item)
            else:
                self.check_top_call(item)
        self.check_recursion()
        self.diags.sort(key=lambda d: (d.line, d.col))
        return self.diags

    def collect_definitions(self) -> None:
        for item in self.program.items:
            if not isinstance(item, (ast.QnodeDef, ast.FnDef)):
                continue
            if item.name in RESERVED_NAMES:
                self.error(item.span, f"'{item.name}' is a reserved name")
            elif item.name in self.defs:
                self.error(item.span, f"duplicate definition of '{item.name}'")
            else:
                self.defs[item.name] = item

    # --- per-item checks ---

    def check_qnode(self, qnode: ast.QnodeDef) -> None:
        for dec in qnode.decorators:
            if dec.name not in TRANSFORM_NAMES:
                self.error(dec.span, f"unknown transform '{dec.name}'")
        if qnode.wires < 1:
            self.error(qnode.span, "device needs at least one wire")
        self.check_params(qnode.params, qnode.span)
        scope = set(qnode.params)
        for idx, stmt in enumerate(qnode.body):
            is_last = idx == len(qnode.body) - 1
            if isinstance(stmt, ast.ReturnStmt) and is_last:
                self.check_return(stmt, scope)
            else:
                self.check_stmt(stmt, scope, in_qnode=True)

    def check_fn(self, fn: ast.FnDef) -> None:
        self.check_params(fn.params, fn.span)
        scope = set(fn.params)
        for stmt in fn.body:
            self.check_stmt(stmt, scope, in_qnode=False)

    def check_top_call(self, call: ast.CallStmt) -> None:
        target = self.defs.get(call.name)
        if target is None or isinstance(target, ast.FnDef):
            self.error(call.span, f"top-level call to '{call.name}', which is not a qnode")
        elif len(call.args) != len(target.params):
            self.error(
                call.span,
                f"'{call.name}' expects {len(target.params)} argument(s), got {len(call.args)}",
            )
        for arg in call.args:
            self.check_expr(arg, set())

    def check_params(self, params: tuple[str, ...], span: ast.Span) -> None:
        seen: set[str] = set()
        for p in params:
            if p in seen:
                self.error(span, f"duplicate parameter '{p}'")
            seen.add(p)

    # --- statements ---

    def check_stmt(self, stmt: ast.Node, scope: set[str], in_qnode: bool) -> None:
        if isinstance(stmt, ast.GateStmt):
            n_params, n_wires = GATE_ARITY[stmt.name]
            want = n_params + n_wires
            if len(stmt.args) != want:
                self.error(
                    stmt.span,
                    f"gate '{stmt.name}' expects {want} argument(s), got {len(stmt.args)}",
                )
            for arg in stmt.args:
                self.check_expr(arg, scope)
        elif isinstance(stmt, ast.CallStmt):
            self.check_body_call(stmt, scope)
        elif isinstance(stmt, ast.ForStmt):
            self.check_expr(stmt.start, scope)
            self.check_expr(stmt.stop, scope)
            inner = scope | {stmt.var}
            for s in stmt.body:
                self.check_stmt(s, inner, in_qnode)
            # let bindings inside the loop body stay local to it
        elif isinstance(stmt, ast.IfStmt):
            self.check_expr(stmt.cond, scope)
            for s in stmt.then_body:
                self.check_stmt(s, set(scope), in_qnode)
            if stmt.else_body is not None:
                for s in stmt.else_body:
                    self.check_stmt(s, set(scope), in_qnode)
        elif isinstance(stmt, ast.LetStmt):
            self.check_expr(stmt.value, scope)
            scope.add(stmt.name)
        elif isinstance(stmt, ast.ReturnStmt):
            if in_qnode:
                self.error(stmt.span, "return must be the final statement of a qnode body")
            else:
                self.error(stmt.span, "return is not allowed in a subroutine")
            for meas in stmt.measurements:
                self.check_meas(meas, scope)
        else:
            raise AssertionError(f"unexpected statement node {stmt.kind}")

    def check_body_call(self, call: ast.CallStmt, scope: set[str]) -> None:
        target = self.defs.get(call.name)
        if target is None:
            self.error(call.span, f"unknown gate or subroutine '{call.name}'")
        elif isinstance(target, ast.QnodeDef):
            self.error(
                call.span, f"'{call.name}' is a qnode and can only be called at the top level"
            )
        elif len(call.args) != len(target.params):
            self.error(
                call.span,
                f"'{call.name}' expects {len(target.params)} argument(s), got {len(call.args)}",
            )
        for arg in call.args:
            self.check_expr(arg, scope)

    def check_return(self, stmt: ast.ReturnStmt, scope: set[str]) -> None:
        for meas in stmt.measurements:
            self.check_meas(meas, scope)

    def check_meas(self, meas: ast.Node, scope: set[str]) -> None:
        if isinstance(meas, ast.ExpvalMeas):
            for factor in meas.factors:
                self.check_expr(factor.wire, scope)
        elif isinstance(meas, ast.ProbsMeas):
            for wire in meas.wires:
                self.check_expr(wire, scope)
        elif isinstance(meas, ast.StateMeas):
            pass
        else:
            raise AssertionError(f"unexpected measurement node {meas.kind}")

    # --- expressions ---

    def check_expr(self, expr: ast.Node, scope: set[str]) -> None:
        if isinstance(expr, ast.Num):
            return
        if isinstance(expr, ast.Var):
            if expr.name not in scope:
                self.error(expr.span, f"undefined variable '{expr.name}'")
            return
        if isinstance(expr, ast.UnaryOp):
            self.check_expr(expr.operand, scope)
            return
        if isinstance(expr, ast.BinOp):
            self.check_expr(expr.left, scope)
            self.check_expr(expr.right, scope)
            return
        if isinstance(expr, ast.MeasureExpr):
            self.check_expr(expr.wire, scope)
            return
        raise AssertionError(f"unexpected expression node {expr.kind}")

    # --- call graph ---

    def check_recursion(self) -> None:
        """Reject call cycles among subroutines (qnodes cannot be re-entered)."""
        edges: dict[str, list[tuple[str, ast.Span]]] = {}
        for item in self.program.items:
            if isinstance(item, ast.FnDef):
                edges[item.name] = sorted(
                    self._calls_in(item.body), key=lambda e: (e[1].start_line, e[1].start_col)
                )

        WHITE, GRAY, BLACK = 0, 1, 2
        color = {name: WHITE for name in edges}
        stack: list[str] = []
        reported = False

        def visit(name: str) -> None:
            nonlocal reported
            color[name] = GRAY
            stack.append(name)
            for callee, span in edges[name]:
                if callee not in edges:
                    continue
                if color[callee] == GRAY and not reported:
                    cycle = stack[stack.index(callee) :] + [callee]
                    self.error(span, "recursive call cycle: " + " -> ".join(cycle))
                    reported = True
                elif color[callee] == WHITE:
                    visit(callee)
            stack.pop()
            color[name] = BLACK

        for name in edges:
            if color[name] == WHITE:
                visit(name)

    def _calls_in(self, body: tuple[ast.Node, ...]) -> set[tuple[str, ast.Span]]:
        calls: set[tuple[str, ast.Span]] = set()
        for stmt in body:
            if isinstance(stmt, ast.CallStmt):
                calls.add((stmt.name, stmt.span))
            elif isinstance(stmt, ast.ForStmt):
                calls |= self._calls_in(stmt.body)
            elif isinstance(stmt, ast.IfStmt):
                calls |= self._calls_in(stmt.then_body)
                if stmt.else_body is not None:
                    calls |= self._calls_in(stmt.else_body)
        return calls
