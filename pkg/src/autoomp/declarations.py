"""Reader for the companion declaration file.

Two layouts are accepted and may be mixed freely:

* Fortran declarations, ``REAL(8), DIMENSION(10) :: A, B(3) = 0`` or the
  older ``DOUBLE PRECISION X, Y(N)`` form;
* bare name lists, ``A, AB, AL`` one or more per line, including the quoted
  bracketed form that the text report prints (``['A', 'AB']``).

Array specs, character lengths and initialisers are dropped; only names are
kept.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyDeclarationFile, InvalidName, MalformedDeclaration
from .frontend.lexer import NAME_KINDS, TokenKind, canonicalize, tokenize
from .frontend.parser import matching_paren, parse_statements, split_top_level

TYPE_WORDS = frozenset(
    {"INTEGER", "REAL", "COMPLEX", "LOGICAL", "CHARACTER", "DOUBLE",
     "DOUBLEPRECISION", "DOUBLECOMPLEX", "TYPE", "CLASS", "DIMENSION", "BYTE"}
)

# statements that can sit in a declaration part without declaring local names
SKIPPED_WORDS = frozenset(
    {"IMPLICIT", "USE", "SAVE", "COMMON", "EQUIVALENCE", "DATA", "PARAMETER",
     "INTENT", "EXTERNAL", "INTRINSIC", "CONTAINS", "SUBROUTINE", "FUNCTION",
     "PROGRAM", "MODULE", "END", "INCLUDE", "FORMAT", "NAMELIST", "PUBLIC",
     "PRIVATE", "POINTER", "TARGET", "ALLOCATABLE", "OPTIONAL", "INTERFACE"}
)


@dataclass(frozen=True)
class DeclarationSet:
    names: tuple
    source: str | None = None

    def __post_init__(self):
        if list(self.names) != sorted(set(self.names)):
            raise ValueError("declaration names must be sorted and unique")

    def __contains__(self, name) -> bool:
        return name in self.names

    def render(self) -> str:
        return ", ".join(self.names)


def parse_declarations(decl_text: str, source: str | None = None) -> DeclarationSet:
    names: set[str] = set()
    stmts, _ = parse_statements(tokenize(decl_text))
    for stmt in stmts:
        names.update(_names_of(stmt.significant, stmt.line))
    if not names:
        raise EmptyDeclarationFile("no variable names found in declaration file", line=1)
    return DeclarationSet(tuple(sorted(names)), source)


def _names_of(sig: tuple, line: int) -> list[str]:
    if any(t.is_punct("::") for t in sig):
        sep = next(i for i, t in enumerate(sig) if t.is_punct("::"))
        return _entity_list(sig[sep + 1 :], line)
    head = sig[0].name if sig[0].kind in NAME_KINDS else ""
    if head in SKIPPED_WORDS:
        return []
    if head in TYPE_WORDS and len(sig) > 1:
        rest = _skip_type_spec(sig)
        if rest is not None and rest:
            return _entity_list(rest, line)
    if sig[0].is_punct("["):
        return _quoted_list(sig, line)
    return _entity_list(sig, line)


def _skip_type_spec(sig):
    """Drop ``REAL*8`` / ``DOUBLE PRECISION`` / ``CHARACTER(LEN=4)`` leaders."""
    i = 1
    if sig[0].name == "DOUBLE" and i < len(sig) and sig[i].name in ("PRECISION", "COMPLEX"):
        i += 1
    if i < len(sig) and sig[i].is_punct("("):
        close = matching_paren(sig, i)
        if close < 0:
            return None
        i = close + 1
    elif i < len(sig) and sig[i].is_op("*"):
        i += 1
        if i < len(sig) and sig[i].is_punct("("):
            close = matching_paren(sig, i)
            if close < 0:
                return None
            i = close + 1
        elif i < len(sig) and sig[i].kind is TokenKind.INTEGER:
            i += 1
        else:
            return None
    if i < len(sig) and sig[i].is_punct(","):
        i += 1
    return sig[i:]


def _entity_list(tokens, line: int) -> list[str]:
    if not tokens:
        raise MalformedDeclaration("empty name list", line=line)
    names = []
    for entity in split_top_level(tokens):
        names.append(_entity_name(entity, line))
    return names


def _entity_name(entity, line: int) -> str:
    """``name [(spec)] [*len] [= init | => init]`` -> canonical name."""
    if not entity or entity[0].kind not in NAME_KINDS:
        text = " ".join(t.text for t in entity) or "<nothing>"
        raise MalformedDeclaration(f"cannot read a name from {text!r}", line=line)
    i = 1
    if i < len(entity) and entity[i].is_punct("("):
        close = matching_paren(entity, i)
        if close < 0:
            raise MalformedDeclaration(f"unbalanced bracket after {entity[0].text}", line=line)
        i = close + 1
    if i < len(entity) and entity[i].is_op("*"):
        i += 1
        if i < len(entity) and entity[i].is_punct("("):
            close = matching_paren(entity, i)
            i = len(entity) if close < 0 else close + 1
        elif i < len(entity) and entity[i].kind is TokenKind.INTEGER:
            i += 1
    if i < len(entity) and (entity[i].is_op("=") or entity[i].is_op("=>")):
        i = len(entity)
    if i != len(entity):
        raise MalformedDeclaration(f"unexpected {entity[i].text!r} after {entity[0].text}", line=line)
    return canonicalize(entity[0].text)


def _quoted_list(sig, line: int) -> list[str]:
    close = matching_paren(sig, 0)
    if close != len(sig) - 1:
        raise MalformedDeclaration("unterminated bracketed name list", line=line)
    names = []
    for item in split_top_level(sig[1:-1]):
        if not item:
            continue
        if len(item) != 1 or item[0].kind is not TokenKind.STRING:
            raise MalformedDeclaration("bracketed lists must hold quoted names", line=line)
        try:
            names.append(canonicalize(item[0].text[1:-1]))
        except InvalidName as exc:
            raise MalformedDeclaration(exc.message, line=line) from None
    return names
