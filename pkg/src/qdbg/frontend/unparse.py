"""Pretty-printer producing source that parses back to an equal AST.

Output uses 4-space indentation and one statement per line. Parentheses are
inserted only where precedence demands them, so `(a + b)` prints as `a + b`
but `(a + b) * c` keeps its parens.
"""
from __future__ import annotations

from . import ast

_INDENT = "    "

# Higher binds tighter. Comparisons are non-associative in practice but the
# grammar treats them as left-assoc; we parenthesize any comparison operand
# that is itself a comparison.
_PREC = {
    "<": 1, "<=": 1, ">": 1, ">=": 1, "==": 1, "!=": 1,
    "+": 2, "-": 2,
    "*": 3, "/": 3,
}


def unparse(node: ast.Node) -> str:
    if isinstance(node, ast.Program):
        return "\n\n".join(_item(item) for item in node.items) + "\n"
    if isinstance(node, (ast.QnodeDef, ast.FnDef, ast.CallStmt)):
        return _item(node) + "\n"
    if isinstance(node, (ast.GateStmt, ast.ForStmt, ast.IfStmt, ast.LetStmt, ast.ReturnStmt)):
        return "\n".join(_stmt(node, 0)) + "\n"
    return _expr(node)


def _item(node: ast.Node) -> str:
    if isinstance(node, ast.QnodeDef):
        lines = [f"@transform({d.name})" for d in node.decorators]
        head = f"qnode {node.name}({', '.join(node.params)}) on device(wires={node.wires}) {{"
        lines.append(head)
        for stmt in node.body:
            lines.extend(_stmt(stmt, 1))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(node, ast.FnDef):
        lines = [f"fn {node.name}({', '.join(node.params)}) {{"]
        for stmt in node.body:
            lines.extend(_stmt(stmt, 1))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(node, ast.CallStmt):
        return _stmt(node, 0)[0]
    raise TypeError(f"not a top-level item: {node.kind}")


def _stmt(node: ast.Node, depth: int) -> list[str]:
    pad = _INDENT * depth
    if isinstance(node, (ast.GateStmt, ast.CallStmt)):
        args = ", ".join(_expr(a) for a in node.args)
        return [f"{pad}{node.name}({args});"]
    if isinstance(node, ast.ForStmt):
        lines = [f"{pad}for {node.var} in {_expr(node.start)}..{_expr(node.stop)} {{"]
        for s in node.body:
            lines.extend(_stmt(s, depth + 1))
        lines.append(pad + "}")
        return lines
    if isinstance(node, ast.IfStmt):
        lines = [f"{pad}if {_expr(node.cond)} {{"]
        for s in node.then_body:
            lines.extend(_stmt(s, depth + 1))
        if node.else_body is None:
            lines.append(pad + "}")
        else:
            lines.append(pad + "} else {")
            for s in node.else_body:
                lines.extend(_stmt(s, depth + 1))
            lines.append(pad + "}")
        return lines
    if isinstance(node, ast.LetStmt):
        return [f"{pad}let {node.name} = {_expr(node.value)};"]
    if isinstance(node, ast.ReturnStmt):
        meas = ", ".join(_meas(m) for m in node.measurements)
        return [f"{pad}return {meas};"]
    raise TypeError(f"not a statement: {node.kind}")


def _meas(node: ast.Node) -> str:
    if isinstance(node, ast.ExpvalMeas):
        word = " @ ".join(f"{f.pauli}({_expr(f.wire)})" for f in node.factors)
        return f"expval({word})"
    if isinstance(node, ast.ProbsMeas):
        return f"probs({', '.join(_expr(w) for w in node.wires)})"
    if isinstance(node, ast.StateMeas):
        return "state()"
    raise TypeError(f"not a measurement: {node.kind}")


def _expr(node: ast.Node, parent_prec: int = 0) -> str:
    if isinstance(node, ast.Num):
        return repr(node.value)
    if isinstance(node, ast.Var):
        return node.name
    if isinstance(node, ast.MeasureExpr):
        return f"measure({_expr(node.wire)})"
    if isinstance(node, ast.UnaryOp):
        # Unary minus binds tighter than * but looser than a bare primary.
        inner = _expr(node.operand, 4)
        text = f"-{inner}"
        return f"({text})" if parent_prec >= 4 else text
    if isinstance(node, ast.BinOp):
        prec = _PREC[node.op]
        left = _expr(node.left, prec - 1)
        right = _expr(node.right, prec)
        text = f"{left} {node.op} {right}"
        return f"({text})" if parent_prec >= prec else text
    raise TypeError(f"not an expression: {node.kind}")
