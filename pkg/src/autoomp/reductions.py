"""Reduction detection over privatisation candidates.

A scalar is a reduction when every direct assignment to it has one of the
shapes ``V = V + e``, ``V = e + V``, ``V = V - e``, ``V = V * e`` or
``V = e * V`` at the top level of the right-hand side, with ``e`` free of
``V`` and all updates sharing one operator.  ``V = e - V`` is never accepted:
per-thread partials of that update do not compose.

Self-referencing updates that fit none of the shapes, updates guarded by a
condition on the variable itself (running max/min), mixed operators and
array-element accumulation are reported as needing manual synchronisation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import diagnostics as dg
from .diagnostics import Diagnostic
from .frontend.lexer import NAME_KINDS, TokenKind
from .frontend.parser import LoopNest, StmtKind, identifiers, parse_designator
from .scope import WriteKind, collect_assignments

OPERATORS = ("+", "-", "*")

# relational, logical and concatenation operators bind looser than + - *; any
# of them (or a dotted operator) at top level rules out a pattern
_NON_ARITHMETIC = frozenset({"//", "==", "/=", "<", "<=", ">", ">=", "=", "=>"})
_OPERAND_END = frozenset({TokenKind.IDENTIFIER, TokenKind.KEYWORD, TokenKind.INTEGER,
                          TokenKind.REAL, TokenKind.STRING})


@dataclass(frozen=True)
class ReductionSpec:
    variable: str
    op: str
    lines: tuple = ()

    def __post_init__(self):
        if self.op not in OPERATORS:
            raise ValueError(f"unsupported reduction operator {self.op!r}")


def _split_binary(expr, ops):
    """Split *expr* at top-level binary operators in *ops*.

    Returns ``[(op, operand_tokens), ...]`` with ``op=None`` for the first
    operand, or None when a lower-precedence operator sits at top level.
    """
    parts = [[None, []]]
    depth = 0
    prev = None
    for tok in expr:
        if tok.kind is TokenKind.PUNCTUATION and tok.text in "([":
            depth += 1
        elif tok.kind is TokenKind.PUNCTUATION and tok.text in ")]":
            depth -= 1
        elif depth == 0 and tok.kind is TokenKind.OPERATOR:
            if tok.name in _NON_ARITHMETIC or tok.name.startswith("."):
                return None
            binary = prev is not None and (
                prev.kind in _OPERAND_END or prev.is_punct(")") or prev.is_punct("]")
            )
            if binary and tok.text in ops:
                parts.append([tok.text, []])
                prev = tok
                continue
        parts[-1][1].append(tok)
        prev = tok
    return [(op, tuple(toks)) for op, toks in parts]


def _is_name(expr, name: str) -> bool:
    return len(expr) == 1 and expr[0].kind in NAME_KINDS and expr[0].name == name


def _mentions(parts, name: str) -> bool:
    return any(name in identifiers(toks) for _, toks in parts)


def match_update(rhs, name: str) -> str | None:
    """Reduction operator of ``name = rhs``, or None when no pattern fits."""
    terms = _split_binary(rhs, ("+", "-"))
    if terms is None:
        return None
    if len(terms) >= 2:
        if _is_name(terms[0][1], name) and not _mentions(terms[1:], name):
            return terms[1][0]
        if _is_name(terms[-1][1], name) and terms[-1][0] == "+" and not _mentions(terms[:-1], name):
            return "+"
        return None
    factors = _split_binary(terms[0][1], ("*", "/"))
    if factors is None or len(factors) < 2:
        return None
    if _is_name(factors[0][1], name) and factors[1][0] == "*" and not _mentions(factors[1:], name):
        return "*"
    if _is_name(factors[-1][1], name) and factors[-1][0] == "*" and not _mentions(factors[:-1], name):
        return "*"
    return None


def _guard_mentions(stmt, names) -> bool:
    return any(names & identifiers(cond) for cond in stmt.guards)


def _written_names(stmt) -> set[str]:
    if stmt.kind is StmtKind.ASSIGNMENT:
        return {stmt.target}
    if stmt.kind is StmtKind.CALL:
        out = set()
        for arg in stmt.args:
            if len(arg) > 2 and arg[1].is_op("="):
                arg = arg[2:]
            designator = parse_designator(arg)
            if designator is not None:
                out.add(designator[0])
        return out
    return set()


def _manual(name, lines, reason) -> Diagnostic:
    where = ", ".join(str(n) for n in lines)
    return Diagnostic(
        dg.ERROR, dg.MANUAL_SYNC,
        f"{name} needs manual synchronisation (critical/atomic) on line(s) {where}: {reason}",
        lines[0] if lines else None, name,
    )


def detect_reductions(loop: LoopNest, candidates):
    """Find reduction variables among *candidates*.

    Returns ``(specs, diagnostics)``: specs ordered by first update, and one
    ManualSynchronizationRequired diagnostic per variable that cannot be
    handled by a private or reduction clause.
    """
    candidates = set(candidates)
    scope = collect_assignments(loop)
    assignments = [s for s in loop.statements() if s.kind is StmtKind.ASSIGNMENT]
    specs: list[ReductionSpec] = []
    manual: dict[str, Diagnostic] = {}

    for name in sorted(candidates):
        recs = scope.records_for(name)
        direct = [s for s in assignments if s.target == name]
        own = {name}

        def self_ref(s):
            return name in identifiers(s.rhs) or _guard_mentions(s, own)

        if any(r.subscripted for r in recs if r.kind is WriteKind.DIRECT):
            bad = [s.line for s in direct if self_ref(s)]
            if bad:
                manual[name] = _manual(name, bad, "array-element accumulation is not a supported reduction")
            continue
        matched = [(s, None if _guard_mentions(s, own) else match_update(s.rhs, name)) for s in direct]
        misfits = [s.line for s, op in matched if op is None and self_ref(s)]
        ops = {op for _, op in matched if op}
        if misfits:
            guarded = any(_guard_mentions(s, own) for s, _ in matched if s.line in misfits)
            reason = ("updated under a condition on itself (running max/min)" if guarded
                      else "self-referencing update fits no +, -, * reduction pattern")
            manual[name] = _manual(name, misfits, reason)
        elif len(ops) > 1:
            lines = [s.line for s, op in matched if op]
            manual[name] = _manual(name, lines, "updates use different operators " + ", ".join(sorted(ops)))
        elif ops and all(op for _, op in matched):
            other = [r for r in recs if r.kind is not WriteKind.DIRECT]
            if other:
                manual[name] = _manual(
                    name, [s.line for s in direct] + [r.line for r in other],
                    "reduction variable is also written outside its update statements",
                )
            else:
                specs.append(ReductionSpec(name, ops.pop(), tuple(s.line for s in direct)))

    # writes guarded by a test on a hand-synchronised variable (the index of a
    # running maximum) inherit its status
    reduced = {s.variable for s in specs}
    changed = True
    while changed:
        changed = False
        for stmt in loop.statements():
            if not stmt.guards or not _guard_mentions(stmt, set(manual)):
                continue
            for name in sorted(_written_names(stmt) & candidates - reduced - set(manual)):
                drivers = sorted(set(manual) & set().union(*(identifiers(g) for g in stmt.guards)))
                manual[name] = _manual(
                    name, [stmt.line], "written under a condition on " + ", ".join(drivers)
                )
                changed = True

    specs.sort(key=lambda s: (s.lines[0], s.variable))
    diags = sorted(manual.values(), key=lambda d: (d.line or 0, d.variable))
    return specs, diags


def split_private_and_reduction(candidates, reductions, manual=()):
    """``(sorted private names, reductions)``; manual-sync names land in neither."""
    reduced = {r.variable for r in reductions}
    private = sorted(set(candidates) - reduced - set(manual))
    return private, list(reductions)
