from .lexer import Token, TokenKind, KEYWORDS, canonicalize, detokenize, tokenize
from .parser import LoopNest, Statement, StmtKind, parse_loop, parse_source, parse_statements, render

__all__ = [
    "KEYWORDS",
    "LoopNest",
    "Statement",
    "StmtKind",
    "Token",
    "TokenKind",
    "canonicalize",
    "detokenize",
    "parse_loop",
    "parse_source",
    "parse_statements",
    "render",
    "tokenize",
]
