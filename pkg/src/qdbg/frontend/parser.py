"""Recursive-descent parser for QDL.

`parse` returns the Program on success and a list of syntax Diagnostics on
failure (one diagnostic, pointing at the first offending token; no recovery).

Grammar sketch:

    program    := item* ;
    item       := qnode_def | fn_def | call_stmt ;
    qnode_def  := decorator* "qnode" IDENT "(" params? ")"
                  "on" "device" "(" "wires" "=" INT ")" block ;
    decorator  := "@transform" "(" IDENT ")" ;
    fn_def     := "fn" IDENT "(" params? ")" block ;
    stmt       := gate_stmt | sub_call ";" | for_stmt | if_stmt
                | let_stmt | return_stmt ;
    for_stmt   := "for" IDENT "in" expr ".." expr block ;
    return_stmt:= "return" meas ("," meas)* ";" ;
    meas       := "expval" "(" pauli ")" | "probs" "(" args ")" | "state" "(" ")" ;

Expressions: numbers, identifiers, unary minus, + - * /, comparisons
(< <= > >= == !=, left-associative, lower precedence than arithmetic),
measure(w), and parenthesized grouping.
"""
from __future__ import annotations

import dataclasses

from ..lang import GATES, KEYWORDS, PAULIS
from . import ast
from .ast import Span
from .diagnostics import Diagnostic, syntax_error
from .lexer import LexError, Token, tokenize


class ParseError(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.line = token.line
        self.col = token.col


def parse(source: ast.SourceProgram) -> ast.Program | list[Diagnostic]:
    return parse_text(source.text)


def parse_text(text: str) -> ast.Program | list[Diagnostic]:
    try:
        tokens = tokenize(text)
    except LexError as e:
        return [syntax_error(e.line, e.col, e.message)]
    try:
        return _Parser(tokens).program()
    except ParseError as e:
        return [syntax_error(e.line, e.col, e.message)]


def parse_fragment(text: str, entry: str) -> ast.Node:
    """Parse an isolated fragment: entry is 'program', 'item', 'stmt', 'expr' or 'meas'.

    Raises ParseError/LexError on bad input. Used by span-soundness checks and
    tests; `parse` is the production entry point.
    """
    p = _Parser(tokenize(text))
    node = {
        "program": p.program,
        "item": p.item,
        "stmt": p.statement,
        "expr": p.expression,
        "meas": p.measurement,
    }[entry]()
    if p.peek().type != "EOF":
        raise ParseError("trailing input after fragment", p.peek())
    return node


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token plumbing ---

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def prev(self) -> Token:
        return self.tokens[self.pos - 1]

    def at_sym(self, value: str) -> bool:
        tok = self.peek()
        return tok.type == "SYM" and tok.value == value

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.type == "IDENT" and tok.value == word

    def expect_sym(self, value: str) -> Token:
        if not self.at_sym(value):
            raise ParseError(f"expected '{value}', found {self._describe(self.peek())}", self.peek())
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise ParseError(f"expected '{word}', found {self._describe(self.peek())}", self.peek())
        return self.advance()

    def expect_name(self, what: str) -> Token:
        tok = self.peek()
        if tok.type != "IDENT":
            raise ParseError(f"expected {what}, found {self._describe(tok)}", tok)
        if tok.value in KEYWORDS:
            raise ParseError(f"expected {what}, found keyword '{tok.value}'", tok)
        return self.advance()

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.type == "EOF":
            return "end of input"
        return f"'{tok.value}'"

    def _span_from(self, start: Token) -> Span:
        end = self.prev()
        return Span(start.line, start.col, end.end_line, end.end_col)

    # --- program structure ---

    def program(self) -> ast.Program:
        start = self.peek()
        items = []
        while self.peek().type != "EOF":
            items.append(self.item())
        span = Span(start.line, start.col, self.peek().end_line, self.peek().end_col)
        if items:
            first, last = items[0].span, items[-1].span
            span = Span(first.start_line, first.start_col, last.end_line, last.end_col)
        return ast.Program(tuple(items), span)

    def item(self) -> ast.Node:
        start = self.peek()
        decorators = []
        while self.at_sym("@"):
            decorators.append(self.decorator())
        if self.at_word("qnode"):
            return self.qnode_def(tuple(decorators), start)
        if decorators:
            raise ParseError("expected 'qnode' definition after transform decorator", self.peek())
        if self.at_word("fn"):
            return self.fn_def()
        if self.peek().type == "IDENT":
            return self.call_stmt()
        raise ParseError(
            f"expected qnode, fn, or call, found {self._describe(self.peek())}", self.peek()
        )

    def decorator(self) -> ast.Decorator:
        start = self.expect_sym("@")
        if not self.at_word("transform"):
            raise ParseError("expected 'transform' after '@'", self.peek())
        self.advance()
        self.expect_sym("(")
        name = self.expect_name("transform name")
        self.expect_sym(")")
        return ast.Decorator(str(name.value), self._span_from(start))

    def qnode_def(self, decorators: tuple[ast.Decorator, ...], start: Token) -> ast.QnodeDef:
        self.expect_word("qnode")
        name = self.expect_name("qnode name")
        params = self.param_list()
        self.expect_word("on")
        self.expect_word("device")
        self.expect_sym("(")
        self.expect_word("wires")
        self.expect_sym("=")
        wires_tok = self.peek()
        if wires_tok.type != "NUMBER" or not isinstance(wires_tok.value, int):
            raise ParseError(
                f"expected integer wire count, found {self._describe(wires_tok)}", wires_tok
            )
        self.advance()
        self.expect_sym(")")
        body = self.block()
        return ast.QnodeDef(
            str(name.value), params, wires_tok.value, decorators, body, self._span_from(start)
        )

    def fn_def(self) -> ast.FnDef:
        start = self.expect_word("fn")
        name = self.expect_name("subroutine name")
        params = self.param_list()
        body = self.block()
        return ast.FnDef(str(name.value), params, body, self._span_from(start))

    def param_list(self) -> tuple[str, ...]:
        self.expect_sym("(")
        params: list[str] = []
        if not self.at_sym(")"):
            while True:
                tok = self.peek()
                if tok.type != "IDENT" or tok.value in KEYWORDS:
                    raise ParseError("expected parameter or ')'", tok)
                params.append(str(self.advance().value))
                if self.at_sym(","):
                    self.advance()
                    continue
                break
        if not self.at_sym(")"):
            raise ParseError("expected parameter or ')'", self.peek())
        self.advance()
        return tuple(params)

    def block(self) -> tuple[ast.Node, ...]:
        self.expect_sym("{")
        stmts = []
        while not self.at_sym("}"):
            if self.peek().type == "EOF":
                raise ParseError("expected '}', found end of input", self.peek())
            stmts.append(self.statement())
        self.advance()
        return tuple(stmts)

    # --- statements ---

    def statement(self) -> ast.Node:
        if self.at_word("for"):
            return self.for_stmt()
        if self.at_word("if"):
            return self.if_stmt()
        if self.at_word("let"):
            return self.let_stmt()
        if self.at_word("return"):
            return self.return_stmt()
        tok = self.peek()
        if tok.type == "IDENT" and tok.value not in KEYWORDS:
            return self.gate_or_call_stmt()
        raise ParseError(f"expected statement, found {self._describe(tok)}", tok)

    def gate_or_call_stmt(self) -> ast.Node:
        start = self.advance()
        name = str(start.value)
        self.expect_sym("(")
        args = self.arg_list()
        self.expect_sym(")")
        self.expect_sym(";")
        span = self._span_from(start)
        if name in GATES:
            return ast.GateStmt(name, args, span)
        return ast.CallStmt(name, args, span)

    def call_stmt(self) -> ast.CallStmt:
        node = self.gate_or_call_stmt()
        if isinstance(node, ast.GateStmt):
            # Top level admits calls only; a gate here is caught semantically.
            return ast.CallStmt(node.name, node.args, node.span)
        return node

    def arg_list(self) -> tuple[ast.Node, ...]:
        args = []
        if not self.at_sym(")"):
            args.append(self.expression())
            while self.at_sym(","):
                self.advance()
                args.append(self.expression())
        return tuple(args)

    def for_stmt(self) -> ast.ForStmt:
        start = self.expect_word("for")
        var = self.expect_name("loop variable")
        self.expect_word("in")
        lo = self.expression()
        self.expect_sym("..")
        hi = self.expression()
        body = self.block()
        return ast.ForStmt(str(var.value), lo, hi, body, self._span_from(start))

    def if_stmt(self) -> ast.IfStmt:
        start = self.expect_word("if")
        cond = self.expression()
        then_body = self.block()
        else_body = None
        if self.at_word("else"):
            self.advance()
            else_body = self.block()
        return ast.IfStmt(cond, then_body, else_body, self._span_from(start))

    def let_stmt(self) -> ast.LetStmt:
        start = self.expect_word("let")
        name = self.expect_name("variable name")
        self.expect_sym("=")
        value = self.expression()
        self.expect_sym(";")
        return ast.LetStmt(str(name.value), value, self._span_from(start))

    def return_stmt(self) -> ast.ReturnStmt:
        start = self.expect_word("return")
        measurements = [self.measurement()]
        while self.at_sym(","):
            self.advance()
            measurements.append(self.measurement())
        self.expect_sym(";")
        return ast.ReturnStmt(tuple(measurements), self._span_from(start))

    def measurement(self) -> ast.Node:
        tok = self.peek()
        if self.at_word("expval"):
            start = self.advance()
            self.expect_sym("(")
            factors = [self.pauli_factor()]
            while self.at_sym("@"):
                self.advance()
                factors.append(self.pauli_factor())
            self.expect_sym(")")
            return ast.ExpvalMeas(tuple(factors), self._span_from(start))
        if self.at_word("probs"):
            start = self.advance()
            self.expect_sym("(")
            if self.at_sym(")"):
                raise ParseError("probs needs at least one wire", self.peek())
            wires = self.arg_list()
            self.expect_sym(")")
            return ast.ProbsMeas(wires, self._span_from(start))
        if self.at_word("state"):
            start = self.advance()
            self.expect_sym("(")
            self.expect_sym(")")
            return ast.StateMeas(self._span_from(start))
        raise ParseError(
            f"expected measurement (expval, probs, or state), found {self._describe(tok)}", tok
        )

    def pauli_factor(self) -> ast.PauliFactor:
        tok = self.peek()
        if tok.type != "IDENT" or tok.value not in PAULIS:
            raise ParseError(f"expected Pauli X, Y, or Z, found {self._describe(tok)}", tok)
        start = self.advance()
        self.expect_sym("(")
        wire = self.expression()
        self.expect_sym(")")
        return ast.PauliFactor(str(start.value), wire, self._span_from(start))

    # --- expressions (precedence climbing) ---

    def expression(self) -> ast.Node:
        return self.comparison()

    def comparison(self) -> ast.Node:
        left = self.additive()
        while self.peek().type == "SYM" and self.peek().value in ("<", "<=", ">", ">=", "==", "!="):
            op = str(self.advance().value)
            right = self.additive()
            left = ast.BinOp(op, left, right, _join(left.span, right.span))
        return left

    def additive(self) -> ast.Node:
        left = self.multiplicative()
        while self.peek().type == "SYM" and self.peek().value in ("+", "-"):
            op = str(self.advance().value)
            right = self.multiplicative()
            left = ast.BinOp(op, left, right, _join(left.span, right.span))
        return left

    def multiplicative(self) -> ast.Node:
        left = self.unary()
        while self.peek().type == "SYM" and self.peek().value in ("*", "/"):
            op = str(self.advance().value)
            right = self.unary()
            left = ast.BinOp(op, left, right, _join(left.span, right.span))
        return left

    def unary(self) -> ast.Node:
        if self.at_sym("-"):
            start = self.advance()
            operand = self.unary()
            return ast.UnaryOp("-", operand, Span(start.line, start.col, operand.span.end_line, operand.span.end_col))
        return self.primary()

    def primary(self) -> ast.Node:
        tok = self.peek()
        if tok.type == "NUMBER":
            self.advance()
            return ast.Num(tok.value, Span(tok.line, tok.col, tok.end_line, tok.end_col))
        if tok.type == "IDENT" and tok.value == "measure" and self.peek(1).type == "SYM" and self.peek(1).value == "(":
            start = self.advance()
            self.expect_sym("(")
            wire = self.expression()
            self.expect_sym(")")
            return ast.MeasureExpr(wire, self._span_from(start))
        if tok.type == "IDENT" and tok.value not in KEYWORDS:
            self.advance()
            return ast.Var(str(tok.value), Span(tok.line, tok.col, tok.end_line, tok.end_col))
        if self.at_sym("("):
            lp = self.advance()
            inner = self.expression()
            rp = self.expect_sym(")")
            # Widen to cover the parens so the span slices to balanced text.
            widened = Span(lp.line, lp.col, rp.end_line, rp.end_col)
            return dataclasses.replace(inner, span=widened)
        raise ParseError(f"expected expression, found {self._describe(tok)}", tok)


def _join(a: Span, b: Span) -> Span:
    return Span(a.start_line, a.start_col, b.end_line, b.end_col)
