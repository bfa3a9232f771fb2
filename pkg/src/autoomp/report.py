"""Staged analysis report, as text (the six classic sections) or JSON."""

from __future__ import annotations

import json
import textwrap
from dataclasses import dataclass

from .declarations import DeclarationSet
from .diagnostics import Diagnostic

HEADERS = (
    "All Private Arguments in the Declaration",
    "All Arguments in the Scope",
    "Intersection Between Declaration and Scope Arguments",
    "Reduction Clauses Args",
    "Reduction Clauses Operators",
    "Ready to OpenMP Parallel Code",
)
LEGACY_STYLE_HEADER = "Legacy-Style Directive (one reduction per line, not valid OpenMP)"
DIAGNOSTICS_HEADER = "Diagnostics"
LIMITATION_NOTE = (
    "Note: read-before-write is not analysed; no firstprivate/lastprivate "
    "clauses are inferred."
)
REPORT_WIDTH = 72


@dataclass(frozen=True)
class AnalysisReport:
    declared: DeclarationSet
    scope: tuple = ()
    intersection: tuple = ()
    reduction_vars: tuple = ()
    reduction_ops: tuple = ()
    private: tuple = ()
    directive_text: str = ""
    diagnostics: tuple = ()
    legacy_directive: str | None = None

    def __post_init__(self):
        for name in ("scope", "intersection", "reduction_vars", "reduction_ops", "private", "diagnostics"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.reduction_vars) != len(self.reduction_ops):
            raise ValueError("reduction_vars and reduction_ops differ in length")
        stray = set(self.intersection) - set(self.declared.names)
        stray |= set(self.intersection) - set(self.scope)
        if stray:
            raise ValueError(f"intersection names outside declared/scope: {sorted(stray)}")


def format_list(items) -> str:
    """``['A', 'AB', ...]`` wrapped at word boundaries."""
    text = "[" + ", ".join(f"'{x}'" for x in items) + "]"
    return textwrap.fill(text, REPORT_WIDTH, break_on_hyphens=False, break_long_words=False)


def render_text_report(r: AnalysisReport) -> str:
    lists = (
        r.declared.names,
        r.scope,
        r.intersection,
        r.reduction_vars,
        r.reduction_ops,
    )
    blocks = [f"{head}:\n{format_list(items)}" for head, items in zip(HEADERS, lists)]
    blocks.append(f"{HEADERS[5]}:\n{r.directive_text}")
    if r.legacy_directive is not None:
        blocks.append(f"{LEGACY_STYLE_HEADER}:\n{r.legacy_directive}")
    if r.diagnostics:
        diag_text = "\n".join(d.format() for d in r.diagnostics)
    else:
        diag_text = "none"
    blocks.append(f"{DIAGNOSTICS_HEADER}:\n{diag_text}\n{LIMITATION_NOTE}")
    return "\n\n".join(blocks) + "\n"


def report_to_dict(r: AnalysisReport) -> dict:
    return {
        "declared": list(r.declared.names),
        "declaration_source": r.declared.source,
        "scope": list(r.scope),
        "intersection": list(r.intersection),
        "reductions": [{"var": v, "op": op} for v, op in zip(r.reduction_vars, r.reduction_ops)],
        "private": list(r.private),
        "directive": r.directive_text,
        "legacy_directive": r.legacy_directive,
        "diagnostics": [d.to_dict() for d in r.diagnostics],
    }


def render_json_report(r: AnalysisReport) -> str:
    return json.dumps(report_to_dict(r), indent=2) + "\n"


def parse_json_report(text: str) -> AnalysisReport:
    data = json.loads(text)
    reductions = data["reductions"]
    return AnalysisReport(
        declared=DeclarationSet(tuple(data["declared"]), data.get("declaration_source")),
        scope=tuple(data["scope"]),
        intersection=tuple(data["intersection"]),
        reduction_vars=tuple(x["var"] for x in reductions),
        reduction_ops=tuple(x["op"] for x in reductions),
        private=tuple(data["private"]),
        directive_text=data["directive"],
        legacy_directive=data.get("legacy_directive"),
        diagnostics=tuple(Diagnostic.from_dict(d) for d in data["diagnostics"]),
    )
