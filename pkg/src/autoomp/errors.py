"""Exception hierarchy for autoomp.

Every error that maps to "input/parse error" at the command line derives from
:class:`AutoOMPError` and carries an optional source line (and column) so the
CLI can point at the offending spot.
"""

from __future__ import annotations


class AutoOMPError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        where = ""
        if self.line is not None:
            where = f"line {self.line}"
            if self.column is not None:
                where += f", column {self.column}"
            where += ": "
        return where + self.message


# frontend
class LexError(AutoOMPError):
    pass


class UnterminatedString(LexError):
    pass


class IllegalCharacter(LexError):
    pass


class InvalidName(AutoOMPError, ValueError):
    pass


class ParseError(AutoOMPError):
    pass


class NotALoop(ParseError):
    pass


class UnbalancedLoop(ParseError):
    pass


# declarations
class DeclarationError(AutoOMPError):
    pass


class EmptyDeclarationFile(DeclarationError):
    pass


class MalformedDeclaration(DeclarationError):
    pass


# directive
class InvalidGeometry(AutoOMPError, ValueError):
    pass
