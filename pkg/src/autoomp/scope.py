"""Collect everything a loop writes and split it into shared / private candidates.

A write counts when the loop body assigns a name directly, uses it as the
index of a nested DO, or passes it (bare or as an array element) to a CALL.
An array written only through subscripts that mention the parallel index is
partitioned across threads and stays shared; every other written name must be
privatised, reduced, or synchronised by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import diagnostics as dg
from .declarations import DeclarationSet
from .diagnostics import Diagnostic
from .frontend.parser import LoopNest, StmtKind, identifiers, parse_designator


class WriteKind(str, Enum):
    DIRECT = "Direct"
    SUB_LOOP_INDEX = "SubLoopIndex"
    CALL_ARGUMENT = "CallArgument"


@dataclass(frozen=True)
class AssignmentRecord:
    target: str
    kind: WriteKind
    subscript_identifiers: frozenset = frozenset()
    line: int = 0
    subscripted: bool = False


@dataclass(frozen=True)
class ScopeSet:
    records: tuple
    all_targets: tuple

    def records_for(self, name: str) -> list[AssignmentRecord]:
        return [r for r in self.records if r.target == name]


@dataclass(frozen=True)
class PreClassification:
    shared_by_index_rule: frozenset
    privatization_candidates: frozenset
    loop_indices: frozenset
    diagnostics: tuple = field(default=(), compare=False)


def _subscript_names(subscripts) -> frozenset:
    names: set[str] = set()
    for sub in subscripts:
        names |= identifiers(sub)
    return frozenset(names)


def _call_argument_record(arg, line: int) -> AssignmentRecord | None:
    # keyword argument: NAME = actual
    if len(arg) > 2 and arg[1].is_op("="):
        arg = arg[2:]
    designator = parse_designator(arg)
    if designator is None:
        return None
    base, subscripts, subscripted = designator
    return AssignmentRecord(
        base, WriteKind.CALL_ARGUMENT, _subscript_names(subscripts), line, subscripted
    )


def collect_assignments(loop: LoopNest) -> ScopeSet:
    records: list[AssignmentRecord] = []
    for stmt in loop.statements():
        if stmt.kind is StmtKind.ASSIGNMENT:
            records.append(
                AssignmentRecord(
                    stmt.target,
                    WriteKind.DIRECT,
                    _subscript_names(stmt.subscripts),
                    stmt.line,
                    stmt.subscripted,
                )
            )
        elif stmt.kind is StmtKind.DO_HEADER and stmt.index is not None:
            records.append(AssignmentRecord(stmt.index, WriteKind.SUB_LOOP_INDEX, frozenset(), stmt.line))
        elif stmt.kind is StmtKind.CALL:
            for arg in stmt.args:
                rec = _call_argument_record(arg, stmt.line)
                if rec is not None:
                    records.append(rec)
    targets = tuple(sorted({r.target for r in records}))
    return ScopeSet(tuple(records), targets)


def pre_classify(scope: ScopeSet, loop: LoopNest) -> PreClassification:
    indices = {loop.parallel_index, *loop.inner_indices}
    shared: set[str] = set()
    candidates: set[str] = set()
    loop_indices: set[str] = set()
    diags: list[Diagnostic] = []
    for name in scope.all_targets:
        recs = scope.records_for(name)
        if name in indices:
            loop_indices.add(name)
            direct = [r for r in recs if r.kind is not WriteKind.SUB_LOOP_INDEX]
            if direct:
                what = "parallel loop index" if name == loop.parallel_index else "loop index"
                diags.append(Diagnostic(
                    dg.WARNING, dg.INDEX_ASSIGNED,
                    f"{name} is a {what} but is also written on line {direct[0].line}; treated as loop index",
                    direct[0].line, name,
                ))
            continue
        if all(r.subscripted and loop.parallel_index in r.subscript_identifiers for r in recs):
            shared.add(name)
            continue
        candidates.add(name)
        scalar = [r for r in recs if not r.subscripted]
        subscripted = [r for r in recs if r.subscripted]
        if scalar and subscripted:
            diags.append(Diagnostic(
                dg.WARNING, dg.MIXED_USAGE,
                f"{name} is written both as a scalar (line {scalar[0].line}) and with subscripts "
                f"(line {subscripted[0].line}); treated as a privatisation candidate",
                scalar[0].line, name,
            ))
    return PreClassification(frozenset(shared), frozenset(candidates), frozenset(loop_indices), tuple(diags))


def intersect_with_declarations(pre: PreClassification, decls: DeclarationSet, scope: ScopeSet | None = None):
    """Privatisation candidates that are declared locally.

    Returns ``(names, diagnostics)``; every candidate missing from the
    declaration file gets a warning instead of being dropped quietly.  Pass
    *scope* to have the warnings carry the line of the first write.
    """
    kept = sorted(n for n in pre.privatization_candidates if n in decls)
    diags = []
    for name in sorted(pre.privatization_candidates):
        if name in decls:
            continue
        line = scope.records_for(name)[0].line if scope is not None else None
        diags.append(Diagnostic(
            dg.WARNING, dg.UNDECLARED_CANDIDATE,
            f"{name} is written in the loop but not declared locally "
            "(global or dummy argument?); left shared, review by hand",
            line, name,
        ))
    return kept, diags
