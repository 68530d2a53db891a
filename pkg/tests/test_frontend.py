"""Lexer, parser, span, and round-trip checks."""
from __future__ import annotations

import pytest

from qdbg.frontend import (
    Diagnostic,
    LexError,
    ast,
    executable_lines,
    parse_fragment,
    parse_text,
    tokenize,
    unparse,
)
from qdbg.rng import next_u64, rng_from_seed

from corpus import VALID, src

# --- lexer ---


def test_token_stream_basic():
    toks = tokenize("h(0); rx(1.5, w)")
    got = [(t.type, t.value) for t in toks]
    assert got == [
        ("IDENT", "h"),
        ("SYM", "("),
        ("NUMBER", 0),
        ("SYM", ")"),
        ("SYM", ";"),
        ("IDENT", "rx"),
        ("SYM", "("),
        ("NUMBER", 1.5),
        ("SYM", ","),
        ("IDENT", "w"),
        ("SYM", ")"),
        ("EOF", ""),
    ]


def test_token_positions():
    toks = tokenize("ab cd\n  ef")
    ab, cd, ef = toks[0], toks[1], toks[2]
    assert (ab.line, ab.col, ab.end_col) == (1, 1, 3)
    assert (cd.line, cd.col) == (1, 4)
    assert (ef.line, ef.col) == (2, 3)


def test_comments_skipped_to_end_of_line():
    toks = tokenize("x(0); # x(1); not code\ny(0);")
    names = [t.value for t in toks if t.type == "IDENT"]
    assert names == ["x", "y"]
    assert toks[-2].line == 2


def test_range_dots_lex_as_one_symbol():
    toks = tokenize("0..3")
    assert [(t.type, t.value) for t in toks[:3]] == [
        ("NUMBER", 0),
        ("SYM", ".."),
        ("NUMBER", 3),
    ]


def test_two_char_operators_win_over_one_char():
    toks = tokenize("a <= b == c != d >= e")
    syms = [t.value for t in toks if t.type == "SYM"]
    assert syms == ["<=", "==", "!=", ">="]


def test_number_forms():
    for text, want in [("42", 42), ("3.25", 3.25), ("2.5e-1", 0.25), ("1E2", 100.0)]:
        tok = tokenize(text)[0]
        assert tok.type == "NUMBER"
        assert tok.value == want
        assert isinstance(tok.value, type(want))


def test_trailing_dot_is_not_a_number():
    with pytest.raises(LexError, match="unexpected character '\\.'"):
        tokenize("let a = 1.;")


def test_unknown_character_reports_position():
    with pytest.raises(LexError) as exc:
        tokenize("x(0);\n  $")
    assert "unexpected character '$'" in str(exc.value)
    assert exc.value.line == 2
    assert exc.value.col == 3


# --- parser errors ---


def _first_diag(text: str) -> Diagnostic:
    result = parse_text(text)
    assert isinstance(result, list) and result, f"expected diagnostics, got {result!r}"
    return result[0]


def test_missing_close_brace():
    d = _first_diag("qnode m() on device(wires=1) { h(0);")
    assert "expected '}'" in d.message
    assert "end of input" in d.message


def test_bad_parameter_list():
    d = _first_diag("qnode m( {")
    assert d.message == "expected parameter or ')'"
    assert (d.line, d.col) == (1, 10)


def test_missing_semicolon():
    d = _first_diag("qnode m() on device(wires=1) { h(0) }")
    assert "expected ';'" in d.message


def test_decorator_requires_transform_word():
    d = _first_diag("@apply(foo)\nqnode m() on device(wires=1) { h(0); }")
    assert d.message == "expected 'transform' after '@'"
    assert d.line == 1


def test_device_wire_count_must_be_integer_literal():
    d = _first_diag("qnode m() on device(wires=1.5) { h(0); }")
    assert "expected integer wire count" in d.message


def test_keyword_cannot_name_a_qnode():
    d = _first_diag("qnode for() on device(wires=1) { h(0); }")
    assert "found keyword 'for'" in d.message


def test_probs_needs_at_least_one_wire():
    d = _first_diag("qnode m() on device(wires=1) { return probs(); }")
    assert isinstance(d, Diagnostic)


def test_lex_error_surfaces_as_diagnostic():
    d = _first_diag("qnode m() on device(wires=1) { h(0); ~ }")
    assert d.severity == "error"
    assert "unexpected character" in d.message


# --- spans ---

_STMT_KINDS = (
    ast.GateStmt,
    ast.CallStmt,
    ast.ForStmt,
    ast.IfStmt,
    ast.LetStmt,
    ast.ReturnStmt,
)
_EXPR_KINDS = (ast.Num, ast.Var, ast.UnaryOp, ast.BinOp, ast.MeasureExpr)
_MEAS_KINDS = (ast.ExpvalMeas, ast.ProbsMeas, ast.StateMeas)


def _fragment_entry(node: ast.Node) -> str | None:
    if isinstance(node, (ast.QnodeDef, ast.FnDef)):
        return "item"
    if isinstance(node, _STMT_KINDS):
        return "stmt"
    if isinstance(node, _MEAS_KINDS):
        return "meas"
    if isinstance(node, _EXPR_KINDS):
        return "expr"
    return None


def _walk(node: ast.Node):
    yield node
    for child in node.children():
        yield from _walk(child)


def test_spans_slice_back_to_equal_nodes():
    for name, text in VALID:
        program = parse_text(text)
        assert isinstance(program, ast.Program), name
        for node in _walk(program):
            entry = _fragment_entry(node)
            if entry is None:
                continue
            cut = node.span.slice(text)
            again = parse_fragment(cut, entry)
            assert again == node, f"{name}: {entry} span sliced to {cut!r}"


def test_child_spans_nest_inside_parents():
    for name, text in VALID:
        program = parse_text(text)
        assert isinstance(program, ast.Program)
        for node in _walk(program):
            for child in node.children():
                assert node.span.contains(child.span), name


def test_multiline_span_slice():
    text = src(
        """
        qnode m() on device(wires=1) {
            h(0);
        }
        m();
        """
    )
    program = parse_text(text)
    qnode = program.items[0]
    assert qnode.span.slice(text).startswith("qnode m()")
    assert qnode.span.slice(text).endswith("}")


# --- round trip ---


def test_unparse_reparse_fixpoint_over_corpus():
    for name, text in VALID:
        program = parse_text(text)
        assert isinstance(program, ast.Program), f"{name} failed to parse"
        printed = unparse(program)
        again = parse_text(printed)
        assert isinstance(again, ast.Program), f"{name} unparse does not reparse:\n{printed}"
        assert again == program, name
        assert unparse(again) == printed, name


def test_unparse_preserves_precedence():
    cases = [
        "(a + b) * c",
        "a - (b - c)",
        "a / (b * c)",
        "-(a + b)",
        "(a < b) == (c < d)",
        "measure(w + 1) * 2",
    ]
    for text in cases:
        node = parse_fragment(text, "expr")
        printed = unparse(node)
        assert parse_fragment(printed, "expr") == node, f"{text!r} -> {printed!r}"


def test_unparse_random_expressions():
    # Random expression trees survive print -> parse unchanged.
    rng = rng_from_seed(2024)

    def pick(n, options):
        nonlocal rng
        u, rng = next_u64(rng)
        return options[u % len(options)]

    def build(depth) -> ast.Node:
        sp = ast.Span(1, 1, 1, 1)
        if depth == 0:
            return pick(0, [ast.Num(3.0, sp), ast.Num(2, sp), ast.Var("a", sp)])
        op = pick(0, ["+", "-", "*", "/", "<", "<=", ">", ">=", "==", "!="])
        kind = pick(0, ["bin", "bin", "bin", "neg", "measure"])
        if kind == "neg":
            return ast.UnaryOp("-", build(depth - 1), sp)
        if kind == "measure":
            return ast.MeasureExpr(build(depth - 1), sp)
        return ast.BinOp(op, build(depth - 1), build(depth - 1), sp)

    for _ in range(300):
        tree = build(3)
        printed = unparse(tree)
        assert parse_fragment(printed, "expr") == tree, printed


# --- executable lines ---


def test_executable_lines_grover_shape():
    text = src(
        """
        fn prep() {
            h(0);
            h(1);
        }
        @transform(cancel_inverses)
        qnode m() on device(wires=2) {
            prep();
            for i in 0..2 {
                x(0);
            }
            return probs(0, 1);
        }
        m();
        """
    )
    program = parse_text(text)
    lines = executable_lines(program)
    assert lines == {2, 3, 5, 7, 8, 9, 11, 13}


def test_executable_lines_multiple_statements_one_line():
    program = parse_text("qnode m() on device(wires=1) { h(0); x(0); }\nm();")
    assert executable_lines(program) == {1, 2}
