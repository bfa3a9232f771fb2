"""Lossless lexer for free-form Fortran loop fragments.

Whitespace is not emitted as tokens; instead every token remembers the run of
blanks that preceded it (``Token.prefix``), so ``detokenize(tokenize(s)) == s``
for any input the lexer accepts.  Blanks trailing the last line of a file
without a final newline are kept on an empty end-of-line token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..errors import IllegalCharacter, InvalidName, UnterminatedString

KEYWORDS = frozenset({"DO", "END", "CALL", "IF", "THEN", "ELSE", "ENDIF", "ENDDO"})

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    INTEGER = "integer-literal"
    REAL = "real-literal"
    STRING = "string-literal"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"
    CONTINUATION = "continuation"
    COMMENT = "comment"
    EOL = "end-of-line"


# significant tokens carry program text; the others are layout
TRIVIA = frozenset({TokenKind.CONTINUATION, TokenKind.COMMENT, TokenKind.EOL})
NAME_KINDS = frozenset({TokenKind.IDENTIFIER, TokenKind.KEYWORD})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int
    prefix: str = ""

    @property
    def name(self) -> str:
        """Canonical (upper-case) spelling; meaningful for names and dotted operators."""
        return self.text.upper()

    @property
    def is_trivia(self) -> bool:
        return self.kind in TRIVIA

    def is_punct(self, text: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.text == text

    def is_op(self, text: str) -> bool:
        return self.kind is TokenKind.OPERATOR and self.text.upper() == text

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r}, {self.line}:{self.column})"


_TOKEN_RE = re.compile(
    r"""
     (?P<ws>[ \t\f]+)
    |(?P<eol>\r\n|\r|\n)
    |(?P<comment>![^\r\n]*)
    |(?P<string>'(?:''|[^'\r\n])*'|"(?:""|[^"\r\n])*")
    |(?P<badstring>['"])
    |(?P<real>(?:\d+\.(?![A-Za-z]+\.)\d*|\.\d+)(?:[EeDdQq][+-]?\d+)?(?:_\w+)?
              |\d+[EeDdQq][+-]?\d+(?:_\w+)?)
    |(?P<integer>\d+(?:_\w+)?)
    |(?P<dotop>\.[A-Za-z]+\.)
    |(?P<name>[A-Za-z][A-Za-z0-9_]*)
    |(?P<amp>&)
    |(?P<op>\*\*|//|==|/=|<=|>=|=>|[=+\-*/<>])
    |(?P<punct>::|[(),:;%\[\]])
    """,
    re.VERBOSE,
)

_KIND_OF_GROUP = {
    "eol": TokenKind.EOL,
    "comment": TokenKind.COMMENT,
    "string": TokenKind.STRING,
    "real": TokenKind.REAL,
    "integer": TokenKind.INTEGER,
    "dotop": TokenKind.OPERATOR,
    "amp": TokenKind.CONTINUATION,
    "op": TokenKind.OPERATOR,
    "punct": TokenKind.PUNCTUATION,
}


def tokenize(source_text: str) -> list[Token]:
    """Split *source_text* into tokens.

    Raises UnterminatedString for a quote with no closing partner on the same
    line and IllegalCharacter for anything outside the Fortran character set
    (comments and character literals may contain anything).
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    prefix = ""
    size = len(source_text)
    while pos < size:
        m = _TOKEN_RE.match(source_text, pos)
        column = pos - line_start + 1
        if m is None:
            raise IllegalCharacter(
                f"illegal character {source_text[pos]!r}", line=line, column=column
            )
        group = m.lastgroup
        text = m.group()
        pos = m.end()
        if group == "ws":
            prefix += text
            continue
        if group == "badstring":
            raise UnterminatedString("unterminated character literal", line=line, column=column)
        if group == "name":
            kind = TokenKind.KEYWORD if text.upper() in KEYWORDS else TokenKind.IDENTIFIER
        else:
            kind = _KIND_OF_GROUP[group]
        tokens.append(Token(kind, text, line, column, prefix))
        prefix = ""
        if group == "eol":
            line += 1
            line_start = pos
    if prefix:
        tokens.append(Token(TokenKind.EOL, "", line, size - line_start + 1, prefix))
    return tokens


def detokenize(tokens) -> str:
    return "".join(t.prefix + t.text for t in tokens)


def canonicalize(raw: str) -> str:
    """Upper-case a Fortran name; raises InvalidName for anything else."""
    if not isinstance(raw, str) or not _NAME_RE.match(raw):
        raise InvalidName(f"not a legal Fortran name: {raw!r}")
    return raw.upper()
