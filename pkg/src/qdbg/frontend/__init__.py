"""QDL language frontend: lexer, parser, semantic checker, pretty-printer."""
from . import ast
from .ast import Ast, SourceProgram, Span
from .checker import check, executable_lines
from .diagnostics import Diagnostic
from .lexer import LexError, Token, tokenize
from .parser import ParseError, parse, parse_fragment, parse_text
from .unparse import unparse

__all__ = [
    "Ast",
    "Diagnostic",
    "LexError",
    "ParseError",
    "SourceProgram",
    "Span",
    "Token",
    "ast",
    "check",
    "executable_lines",
    "parse",
    "parse_fragment",
    "parse_text",
    "tokenize",
    "unparse",
]
