"""End-to-end analysis of one loop against one declaration file."""

from __future__ import annotations

from dataclasses import dataclass

from . import diagnostics as dg
from .declarations import DeclarationSet, parse_declarations
from .diagnostics import Diagnostic
from .directive import (
    DEFAULT_CACHE_LINE,
    DEFAULT_ELEMENT_BYTES,
    DEFAULT_LINE_WIDTH,
    Directive,
    ScheduleSpec,
    compute_chunk,
    render_directive,
    render_legacy_style,
)
from .frontend import LoopNest, parse_loop, tokenize
from .reductions import ReductionSpec, detect_reductions, split_private_and_reduction
from .report import AnalysisReport
from .scope import PreClassification, ScopeSet, collect_assignments, intersect_with_declarations, pre_classify

EXIT_CLEAN = 0
EXIT_MANUAL_SYNC = 1
EXIT_INPUT_ERROR = 2


@dataclass
class Analysis:
    loop: LoopNest
    declarations: DeclarationSet
    scope: ScopeSet
    pre: PreClassification
    intersection: list
    reductions: list
    private: list
    manual: list
    directive: Directive
    report: AnalysisReport

    @property
    def shared(self) -> list[str]:
        return sorted(self.pre.shared_by_index_rule)

    @property
    def diagnostics(self) -> tuple:
        return self.report.diagnostics

    @property
    def exit_code(self) -> int:
        return EXIT_MANUAL_SYNC if self.manual else EXIT_CLEAN


def analyze(
    loop_text: str,
    decl_text: str,
    *,
    decl_source: str | None = None,
    cache_line_bytes: int = DEFAULT_CACHE_LINE,
    element_bytes: int = DEFAULT_ELEMENT_BYTES,
    schedule_policy: str = "dynamic",
    line_width: int = DEFAULT_LINE_WIDTH,
    preserve_case: bool = False,
    legacy_style: bool = False,
) -> Analysis:
    loop = parse_loop(tokenize(loop_text))
    decls = parse_declarations(decl_text, source=decl_source)
    return analyze_loop(
        loop,
        decls,
        cache_line_bytes=cache_line_bytes,
        element_bytes=element_bytes,
        schedule_policy=schedule_policy,
        line_width=line_width,
        preserve_case=preserve_case,
        legacy_style=legacy_style,
    )


def analyze_loop(
    loop: LoopNest,
    decls: DeclarationSet,
    *,
    cache_line_bytes: int = DEFAULT_CACHE_LINE,
    element_bytes: int = DEFAULT_ELEMENT_BYTES,
    schedule_policy: str = "dynamic",
    line_width: int = DEFAULT_LINE_WIDTH,
    preserve_case: bool = False,
    legacy_style: bool = False,
) -> Analysis:
    scope = collect_assignments(loop)
    pre = pre_classify(scope, loop)
    candidates, undeclared = intersect_with_declarations(pre, decls, scope)
    reductions, sync_diags = detect_reductions(loop, candidates)
    manual = sorted(dg.manual_sync_variables(sync_diags))
    private, reductions = split_private_and_reduction(candidates, reductions, manual)

    # inner DO indices are private whether declared or not; the parallel index
    # is private implicitly
    inner = pre.loop_indices - {loop.parallel_index}
    private = sorted(set(private) | inner)
    intersection = sorted(set(candidates) | (inner & set(decls.names)))

    schedule = ScheduleSpec(schedule_policy, compute_chunk(cache_line_bytes, element_bytes))
    directive = Directive(tuple(private), tuple(reductions), schedule)
    spellings = loop.spellings() if preserve_case else None

    diags: list[Diagnostic] = list(pre.diagnostics) + list(undeclared)
    if loop.extra_loops:
        lines = ", ".join(str(n) for n in loop.extra_loop_lines)
        diags.append(Diagnostic(
            dg.INFO, dg.EXTRA_LOOPS,
            f"{loop.extra_loops} further top-level loop(s) ignored (line {lines}); "
            "only the first loop is analysed",
            loop.extra_loop_lines[0],
        ))
    diags.extend(sync_diags)

    report = AnalysisReport(
        declared=decls,
        scope=scope.all_targets,
        intersection=tuple(intersection),
        reduction_vars=tuple(r.variable for r in reductions),
        reduction_ops=tuple(r.op for r in reductions),
        private=tuple(private),
        directive_text=render_directive(directive, line_width, spellings),
        diagnostics=tuple(diags),
        legacy_directive=render_legacy_style(directive, spellings) if legacy_style else None,
    )
    return Analysis(
        loop=loop,
        declarations=decls,
        scope=scope,
        pre=pre,
        intersection=intersection,
        reductions=list(reductions),
        private=private,
        manual=manual,
        directive=directive,
        report=report,
    )


__all__ = ["Analysis", "ReductionSpec", "analyze", "analyze_loop", "EXIT_CLEAN", "EXIT_MANUAL_SYNC", "EXIT_INPUT_ERROR"]
