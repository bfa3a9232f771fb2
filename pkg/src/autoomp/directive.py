"""OpenMP ``parallel do`` directive model, renderer and a small clause parser."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidGeometry
from .reductions import OPERATORS, ReductionSpec

SENTINEL = "!$omp "
END_DIRECTIVE = "!$omp end parallel do"
POLICIES = ("dynamic", "static")
DEFAULT_CACHE_LINE = 64
DEFAULT_ELEMENT_BYTES = 8  # REAL(8)
DEFAULT_LINE_WIDTH = 72


def compute_chunk(cache_line_bytes: int, element_bytes: int) -> int:
    """Iterations per chunk so that one chunk covers one cache line."""
    if cache_line_bytes <= 0 or element_bytes <= 0:
        raise InvalidGeometry(
            f"cache line ({cache_line_bytes}) and element size ({element_bytes}) must be positive"
        )
    return max(1, cache_line_bytes // element_bytes)


@dataclass(frozen=True)
class ScheduleSpec:
    policy: str = "dynamic"
    chunk: int = compute_chunk(DEFAULT_CACHE_LINE, DEFAULT_ELEMENT_BYTES)

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"schedule policy must be one of {POLICIES}, got {self.policy!r}")
        if self.chunk < 1:
            raise ValueError("schedule chunk must be >= 1")

    def render(self) -> str:
        return f"schedule({self.policy}, {self.chunk})"


@dataclass(frozen=True)
class Directive:
    private: tuple = ()
    reductions: tuple = ()
    schedule: ScheduleSpec = ScheduleSpec()

    def __post_init__(self):
        object.__setattr__(self, "private", tuple(self.private))
        object.__setattr__(self, "reductions", tuple(self.reductions))
        if list(self.private) != sorted(set(self.private)):
            raise ValueError("private list must be sorted and duplicate-free")
        reduced = [r.variable for r in self.reductions]
        if len(reduced) != len(set(reduced)):
            raise ValueError("a variable appears in more than one reduction")
        both = set(self.private) & set(reduced)
        if both:
            raise ValueError(f"variables both private and reduced: {sorted(both)}")

    def grouped_reductions(self) -> list[tuple[str, list[str]]]:
        """``[(op, [vars...]), ...]`` in +, -, * order, variables in input order."""
        groups = []
        for op in OPERATORS:
            names = [r.variable for r in self.reductions if r.op == op]
            if names:
                groups.append((op, names))
        return groups

    def reduction_map(self) -> dict[str, str]:
        return {r.variable: r.op for r in self.reductions}


def _pieces(d: Directive, spell) -> list[tuple[str, str]]:
    """Breakable pieces of the logical directive as ``(separator, text)``."""
    out = [("", "parallel do")]

    def add_list(head: str, names: list[str]):
        names = [spell(n) for n in names]
        for i, name in enumerate(names):
            text = name + ("," if i < len(names) - 1 else ")")
            if i == 0:
                out.append((" ", head + text))
            else:
                out.append(("", text))

    if d.private:
        add_list("private(", list(d.private))
    out.append((" ", d.schedule.render()))
    for op, names in d.grouped_reductions():
        add_list(f"reduction({op}:", names)
    return out


def render_directive_lines(d: Directive, line_width: int = DEFAULT_LINE_WIDTH, spellings=None) -> list[str]:
    """Physical lines of the opening directive, wrapped with ``&`` continuations."""
    spell = (lambda n: spellings.get(n, n)) if spellings else (lambda n: n)
    pieces = _pieces(d, spell)
    widest = max(len(SENTINEL) + len(text) + 2 for _, text in pieces)
    if line_width < widest:
        raise ValueError(f"line width {line_width} is too small; need at least {widest}")
    lines = []
    current = SENTINEL + pieces[0][1]
    for i, (sep, text) in enumerate(pieces[1:], start=1):
        last = i == len(pieces) - 1
        candidate = current + sep + text
        limit = line_width if last else line_width - 2
        if len(candidate) <= limit:
            current = candidate
        else:
            lines.append(current + " &")
            current = SENTINEL + text
    lines.append(current)
    return lines


def render_directive(d: Directive, line_width: int = DEFAULT_LINE_WIDTH, spellings=None) -> str:
    """Opening directive lines followed by the matching end line."""
    return "\n".join(render_directive_lines(d, line_width, spellings) + [END_DIRECTIVE])


def render_legacy_style(d: Directive, spellings=None) -> str:
    """Unwrapped legacy layout: one ``!$omp reduction`` line per variable.

    Not valid OpenMP (the reduction lines are separate directives); kept only
    for comparing against old reports.
    """
    spell = (lambda n: spellings.get(n, n)) if spellings else (lambda n: n)
    lines = ["!$omp parallel do private &"]
    lines.append("(" + ", ".join(spell(n) for n in d.private) + ") &")
    lines.append(d.schedule.render())
    for r in d.reductions:
        lines.append(f"!$omp reduction({r.op}:{spell(r.variable)})")
    return "\n".join(lines)


# -- parsing back --------------------------------------------------------------

_CLAUSE_RE = re.compile(
    r"""\s*(?:
        (?P<private>private)\s*\((?P<plist>[^)]*)\)
       |(?P<schedule>schedule)\s*\(\s*(?P<policy>\w+)\s*,\s*(?P<chunk>\d+)\s*\)
       |(?P<reduction>reduction)\s*\(\s*(?P<op>[-+*])\s*:(?P<rlist>[^)]*)\)
    )""",
    re.IGNORECASE | re.VERBOSE,
)


def join_directive_lines(lines) -> str:
    """Logical directive text of continued ``!$omp`` lines (sentinels and ``&`` removed)."""
    parts = []
    for raw in lines:
        text = raw.strip()
        if not text.lower().startswith("!$omp"):
            raise ValueError(f"not an OpenMP directive line: {raw!r}")
        text = text[5:].strip()
        if text.startswith("&"):
            text = text[1:].strip()
        if text.endswith("&"):
            text = text[:-1].rstrip()
        parts.append(text)
    out = ""
    for part in parts:
        # a break inside a name list must not leave a blank behind
        glue = "" if not out or out.endswith((",", "(", ":")) else " "
        out += glue + part
    return out


def _names(text: str) -> list[str]:
    return [n.strip().upper() for n in text.split(",") if n.strip()]


def parse_directive(text: str) -> Directive:
    """Parse rendered directive text (the end line, if present, is ignored)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    lines = [ln for ln in lines if not re.match(r"\s*!\$omp\s+end\b", ln, re.IGNORECASE)]
    logical = join_directive_lines(lines)
    m = re.match(r"parallel\s+do\b", logical, re.IGNORECASE)
    if not m:
        raise ValueError("directive does not start with 'parallel do'")
    pos = m.end()
    private: list[str] = []
    reductions: list[ReductionSpec] = []
    schedule = None
    while pos < len(logical):
        if not logical[pos:].strip():
            break
        cm = _CLAUSE_RE.match(logical, pos)
        if cm is None:
            raise ValueError(f"unrecognised clause at {logical[pos:]!r}")
        if cm.group("private"):
            private.extend(_names(cm.group("plist")))
        elif cm.group("schedule"):
            schedule = ScheduleSpec(cm.group("policy").lower(), int(cm.group("chunk")))
        else:
            reductions.extend(ReductionSpec(n, cm.group("op")) for n in _names(cm.group("rlist")))
        pos = cm.end()
    if schedule is None:
        raise ValueError("directive has no schedule clause")
    return Directive(tuple(private), tuple(reductions), schedule)
