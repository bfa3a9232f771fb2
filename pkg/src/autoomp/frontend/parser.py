"""Statement-level parser for a single Fortran DO-loop fragment.

This is deliberately not a Fortran parser.  It recognises just enough shape to
drive the privatisation analysis: assignments, DO headers, CALLs, IF/ELSE/END
markers.  Anything else becomes an ``OTHER`` statement so real legacy code
always parses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from ..errors import NotALoop, UnbalancedLoop
from .lexer import NAME_KINDS, Token, TokenKind, detokenize, tokenize

Expr = tuple  # tuple[Token, ...], significant tokens only


class StmtKind(str, Enum):
    ASSIGNMENT = "Assignment"
    DO_HEADER = "DoHeader"
    CALL = "CallStmt"
    IF_HEADER = "IfHeader"
    ELSE = "ElseMarker"
    END = "EndMarker"
    OTHER = "Other"


@dataclass
class Statement:
    kind: StmtKind
    tokens: tuple  # raw tokens owned by this statement, trivia included
    line: int
    end_line: int
    depth: int = 0
    label: int | None = None
    guards: tuple = ()  # conditions (Expr) of every enclosing IF, outermost first
    # Assignment
    target: str | None = None
    subscripts: tuple = ()  # tuple[Expr, ...]
    subscripted: bool = False
    rhs: Expr = ()
    # DoHeader
    index: str | None = None
    bounds: tuple = ()
    do_label: int | None = None
    # CallStmt
    callee: str | None = None
    args: tuple = ()
    # IfHeader / ElseMarker
    condition: Expr = ()
    action: "Statement | None" = None  # statement of a one-line IF
    # EndMarker
    closes: str = ""

    @property
    def significant(self) -> tuple:
        return tuple(t for t in self.tokens if not t.is_trivia)

    @property
    def inline(self) -> bool:
        return self.action is not None

    def signature(self) -> tuple:
        """Case-insensitive structural summary (no layout, no comments)."""
        def canon(expr):
            return tuple((t.kind.value, t.text.upper()) for t in expr)

        return (
            self.kind.value,
            self.depth,
            self.label,
            tuple(canon(g) for g in self.guards),
            self.target,
            tuple(canon(s) for s in self.subscripts),
            canon(self.rhs),
            self.index,
            tuple(canon(b) for b in self.bounds),
            self.callee,
            tuple(canon(a) for a in self.args),
            canon(self.condition),
            self.action.signature() if self.action else None,
            self.closes,
        )


@dataclass
class LoopNest:
    parallel_index: str
    inner_indices: tuple
    body: list
    header: Statement
    footer: Statement | None = None
    trailing: tuple = ()  # raw tokens after the loop
    extra_loops: int = 0  # further top-level DO loops found after this one
    extra_loop_lines: tuple = ()

    @property
    def end_line(self) -> int:
        if self.footer is not None:
            return self.footer.end_line
        if self.body:
            return self.body[-1].end_line
        return self.header.end_line

    def statements(self) -> Iterator[Statement]:
        """Body statements in source order, one-line IF actions included."""
        for stmt in self.body:
            yield stmt
            if stmt.action is not None:
                yield stmt.action

    def tokens(self) -> list[Token]:
        out = list(self.header.tokens)
        for stmt in self.body:
            out.extend(stmt.tokens)
        if self.footer is not None:
            out.extend(self.footer.tokens)
        out.extend(self.trailing)
        return out

    def structure(self) -> tuple:
        return (
            self.parallel_index,
            tuple(self.inner_indices),
            self.header.signature(),
            tuple(s.signature() for s in self.body),
            self.footer.signature() if self.footer else None,
            self.extra_loops,
        )

    def spellings(self) -> dict[str, str]:
        """First source spelling of every name, keyed by canonical name."""
        seen: dict[str, str] = {}
        for tok in self.tokens():
            if tok.kind in NAME_KINDS:
                seen.setdefault(tok.name, tok.text)
        return seen


def render(loop: LoopNest) -> str:
    return detokenize(loop.tokens())


# -- token-list helpers ------------------------------------------------------

def split_top_level(expr, sep: str = ",") -> list[tuple]:
    """Split on *sep* punctuation outside any brackets."""
    parts: list[list] = [[]]
    depth = 0
    for tok in expr:
        if tok.kind is TokenKind.PUNCTUATION:
            if tok.text in "([":
                depth += 1
            elif tok.text in ")]":
                depth -= 1
            elif tok.text == sep and depth == 0:
                parts.append([])
                continue
        parts[-1].append(tok)
    return [tuple(p) for p in parts]


def matching_paren(expr, start: int) -> int:
    """Index of the bracket closing the one at *start*, or -1."""
    depth = 0
    for i in range(start, len(expr)):
        tok = expr[i]
        if tok.kind is TokenKind.PUNCTUATION:
            if tok.text in "([":
                depth += 1
            elif tok.text in ")]":
                depth -= 1
                if depth == 0:
                    return i
    return -1


def identifiers(expr) -> set[str]:
    """Canonical names occurring in *expr*, skipping derived-type component names."""
    names = set()
    prev = None
    for tok in expr:
        if tok.kind is TokenKind.IDENTIFIER and not (prev is not None and prev.is_punct("%")):
            names.add(tok.name)
        prev = tok
    return names


def parse_designator(expr):
    """Match ``name [(...)] [% name [(...)]]...`` covering all of *expr*.

    Returns ``(base_name, subscripts, subscripted)`` where *subscripts* are the
    comma-separated parts of the first bracket group after the base name, or
    None when *expr* is not a designator.
    """
    if not expr or expr[0].kind not in NAME_KINDS:
        return None
    base = expr[0].name
    subscripts: tuple = ()
    subscripted = False
    i = 1
    first_part = True
    while i < len(expr):
        tok = expr[i]
        if tok.is_punct("("):
            close = matching_paren(expr, i)
            if close < 0:
                return None
            if first_part and not subscripted:
                inner = expr[i + 1 : close]
                subscripts = tuple(split_top_level(inner)) if inner else ((),)
                subscripted = True
            i = close + 1
        elif tok.is_punct("%") and i + 1 < len(expr) and expr[i + 1].kind in NAME_KINDS:
            first_part = False
            i += 2
        else:
            return None
    return base, subscripts, subscripted


def _first_top_level(expr, pred) -> int:
    depth = 0
    for i, tok in enumerate(expr):
        if tok.kind is TokenKind.PUNCTUATION:
            if tok.text in "([":
                depth += 1
            elif tok.text in ")]":
                depth -= 1
        if depth == 0 and pred(tok):
            return i
    return -1


# -- statement splitting -----------------------------------------------------

def _split_chunks(tokens):
    """Group raw tokens into statements.

    Yields ``(raw_tokens, significant_tokens)``; blank and comment-only lines
    are carried forward onto the next statement.  A final chunk with no
    significant tokens holds whatever trivia ends the file.
    """
    raw: list[Token] = []
    sig: list[Token] = []
    continued = False
    for tok in tokens:
        raw.append(tok)
        if tok.kind is TokenKind.CONTINUATION:
            continued = True
        elif tok.kind is TokenKind.COMMENT:
            pass
        elif tok.kind is TokenKind.EOL:
            if continued:
                continue
            if sig:
                yield tuple(raw), tuple(sig)
                raw, sig = [], []
        elif tok.is_punct(";"):
            if sig:
                yield tuple(raw), tuple(sig)
                raw, sig = [], []
        else:
            continued = False
            sig.append(tok)
    if sig or raw:
        yield tuple(raw), tuple(sig)


# -- statement classification --------------------------------------------------

def _classify(raw, sig) -> Statement:
    line = sig[0].line if sig else (raw[0].line if raw else 1)
    end_line = sig[-1].line if sig else line
    stmt = Statement(StmtKind.OTHER, tuple(raw), line, end_line)
    rest = list(sig)
    if rest and rest[0].kind is TokenKind.INTEGER and rest[0].text.isdigit():
        stmt.label = int(rest[0].text)
        rest = rest[1:]
    # construct name, e.g. "outer: do i = 1, n"
    if len(rest) >= 3 and rest[0].kind is TokenKind.IDENTIFIER and rest[1].is_punct(":"):
        rest = rest[2:]
    _fill(stmt, tuple(rest))
    return stmt


def _fill(stmt: Statement, s: tuple) -> None:
    if not s:
        return
    eq = _first_top_level(s, lambda t: t.is_op("="))
    if eq > 0:
        designator = parse_designator(s[:eq])
        if designator is not None:
            stmt.kind = StmtKind.ASSIGNMENT
            stmt.target, stmt.subscripts, stmt.subscripted = designator
            stmt.rhs = s[eq + 1 :]
            return
    head = s[0].name if s[0].kind in NAME_KINDS else ""
    if head == "DO":
        _fill_do(stmt, s[1:])
    elif head in ("ENDDO", "ENDIF"):
        stmt.kind = StmtKind.END
        stmt.closes = head[3:]
    elif head == "END":
        stmt.kind = StmtKind.END
        if len(s) > 1 and s[1].kind in NAME_KINDS:
            stmt.closes = s[1].name
    elif head in ("ELSE", "ELSEIF"):
        stmt.kind = StmtKind.ELSE
        rest = s[1:]
        if head == "ELSE" and rest and rest[0].name == "IF":
            rest = rest[1:]
        if rest and rest[0].is_punct("("):
            close = matching_paren(rest, 0)
            if close > 0:
                stmt.condition = tuple(rest[1:close])
        elif head == "ELSE" and rest and rest[0].kind is TokenKind.IDENTIFIER and rest[0].name == "WHERE":
            stmt.kind = StmtKind.OTHER
    elif head == "IF":
        _fill_if(stmt, s)
    elif head == "CALL":
        _fill_call(stmt, s)


def _fill_do(stmt: Statement, s: tuple) -> None:
    stmt.kind = StmtKind.DO_HEADER
    if s and s[0].kind is TokenKind.INTEGER and s[0].text.isdigit():
        stmt.do_label = int(s[0].text)
        s = s[1:]
        if s and s[0].is_punct(","):
            s = s[1:]
    if len(s) >= 3 and s[0].kind in NAME_KINDS and s[1].is_op("="):
        bounds = split_top_level(s[2:])
        if 2 <= len(bounds) <= 3 and all(bounds):
            stmt.index = s[0].name
            stmt.bounds = tuple(bounds)
    # DO WHILE, DO CONCURRENT, bare DO: index stays None


def _fill_if(stmt: Statement, s: tuple) -> None:
    if len(s) < 3 or not s[1].is_punct("("):
        return
    close = matching_paren(s, 1)
    if close < 0:
        return
    condition = tuple(s[2:close])
    rest = s[close + 1 :]
    if len(rest) == 1 and rest[0].name == "THEN":
        stmt.kind = StmtKind.IF_HEADER
        stmt.condition = condition
    elif rest:
        stmt.kind = StmtKind.IF_HEADER
        stmt.condition = condition
        action = Statement(StmtKind.OTHER, (), rest[0].line, rest[-1].line)
        _fill(action, rest)
        if action.kind in (StmtKind.ASSIGNMENT, StmtKind.CALL, StmtKind.OTHER):
            stmt.action = action
        else:
            stmt.kind = StmtKind.OTHER
            stmt.condition = ()


def _fill_call(stmt: Statement, s: tuple) -> None:
    if len(s) < 2 or s[1].kind not in NAME_KINDS:
        return
    callee = s[1].name
    rest = s[2:]
    args: tuple = ()
    if rest:
        if not rest[0].is_punct("(") or matching_paren(rest, 0) != len(rest) - 1:
            return
        inner = rest[1:-1]
        args = tuple(split_top_level(inner)) if inner else ()
    stmt.kind = StmtKind.CALL
    stmt.callee = callee
    stmt.args = args


def parse_statements(tokens) -> tuple[list[Statement], tuple]:
    """Classify every statement of *tokens*; returns (statements, trailing trivia)."""
    stmts = []
    trailing: tuple = ()
    for raw, sig in _split_chunks(tokens):
        if not sig:
            trailing = raw
            continue
        stmts.append(_classify(raw, sig))
    return stmts, trailing


# -- loop nest ---------------------------------------------------------------

@dataclass
class _Frame:
    kind: str  # "DO" or "IF"
    line: int
    label: int | None = None
    conditions: list = field(default_factory=list)


def _guards(stack) -> tuple:
    out = []
    for frame in stack:
        out.extend(frame.conditions)
    return tuple(out)


def _depth(stack) -> int:
    return sum(1 for f in stack if f.kind == "DO")


def parse_loop(tokens) -> LoopNest:
    """Build the LoopNest of the first DO loop in *tokens*.

    The first statement must be a counted DO header (NotALoop otherwise); every
    DO opened inside must be closed (UnbalancedLoop otherwise).  Statements
    after the loop are kept as trailing tokens and further top-level DO loops
    are counted in ``extra_loops``.
    """
    stmts, final_trivia = parse_statements(tokens)
    if not stmts:
        raise NotALoop("no statements found; expected a DO loop", line=1)
    header = stmts[0]
    if header.kind is not StmtKind.DO_HEADER or header.index is None:
        raise NotALoop(
            "first statement is not a counted DO loop header", line=header.line
        )
    parallel_index = header.index
    inner: list[str] = []
    body: list[Statement] = []
    footer = None
    stack = [_Frame("DO", header.line, header.do_label)]
    closed_at = None

    for pos in range(1, len(stmts)):
        stmt = stmts[pos]
        stmt.guards = _guards(stack)
        stmt.depth = _depth(stack)
        if stmt.action is not None:
            stmt.action.guards = stmt.guards + (stmt.condition,)
            stmt.action.depth = stmt.depth
            stmt.action.label = stmt.label
        kind = stmt.kind
        if kind is StmtKind.DO_HEADER:
            if stmt.index is not None and stmt.index != parallel_index and stmt.index not in inner:
                inner.append(stmt.index)
            stack.append(_Frame("DO", stmt.line, stmt.do_label))
        elif kind is StmtKind.IF_HEADER and not stmt.inline:
            stack.append(_Frame("IF", stmt.line, conditions=[stmt.condition]))
        elif kind is StmtKind.ELSE:
            if stack[-1].kind == "IF":
                stmt.guards = _guards(stack)
                if stmt.condition:
                    stack[-1].conditions.append(stmt.condition)
        elif kind is StmtKind.END and stmt.closes == "IF":
            if stack[-1].kind == "IF":
                stack.pop()
                stmt.guards = _guards(stack)
        elif kind is StmtKind.END and stmt.closes == "DO":
            if stack[-1].kind != "DO":
                raise UnbalancedLoop(
                    f"END DO closes a DO while the IF block opened on line {stack[-1].line} is still open",
                    line=stmt.line,
                )
            stack.pop()
            stmt.guards = _guards(stack)
            stmt.depth = _depth(stack)
            if not stack:
                footer = stmt
                closed_at = pos
                break
        if stmt.label is not None and kind is not StmtKind.END:
            while stack and stack[-1].kind == "DO" and stack[-1].label == stmt.label:
                stack.pop()
            if not stack:
                body.append(stmt)
                closed_at = pos
                break
        body.append(stmt)

    if closed_at is None:
        open_do = next(f for f in reversed(stack) if f.kind == "DO")
        raise UnbalancedLoop(f"DO loop opened on line {open_do.line} is never closed", line=open_do.line)

    trailing: list[Token] = []
    extra_lines = []
    depth = 0
    for stmt in stmts[closed_at + 1 :]:
        trailing.extend(stmt.tokens)
        if stmt.kind is StmtKind.DO_HEADER:
            if depth == 0:
                extra_lines.append(stmt.line)
            depth += 1
        elif stmt.kind is StmtKind.END and stmt.closes == "DO" and depth > 0:
            depth -= 1
    trailing.extend(final_trivia)

    return LoopNest(
        parallel_index=parallel_index,
        inner_indices=tuple(inner),
        body=body,
        header=header,
        footer=footer,
        trailing=tuple(trailing),
        extra_loops=len(extra_lines),
        extra_loop_lines=tuple(extra_lines),
    )


def parse_source(source_text: str) -> LoopNest:
    return parse_loop(tokenize(source_text))
