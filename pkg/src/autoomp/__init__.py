"""autoomp: OpenMP ``parallel do`` directives for Fortran loops.

Reads a DO loop and the list of variables declared in its routine, sorts every
written variable into private / shared / reduction, and prints the directive.
"""

from .declarations import DeclarationSet, parse_declarations
from .directive import Directive, ScheduleSpec, compute_chunk, parse_directive, render_directive
from .frontend import LoopNest, canonicalize, parse_loop, tokenize
from .pipeline import Analysis, analyze
from .reductions import ReductionSpec, detect_reductions, split_private_and_reduction
from .report import AnalysisReport, render_json_report, render_text_report
from .scope import collect_assignments, intersect_with_declarations, pre_classify

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "AnalysisReport",
    "DeclarationSet",
    "Directive",
    "LoopNest",
    "ReductionSpec",
    "ScheduleSpec",
    "analyze",
    "canonicalize",
    "collect_assignments",
    "compute_chunk",
    "detect_reductions",
    "intersect_with_declarations",
    "parse_declarations",
    "parse_directive",
    "parse_loop",
    "pre_classify",
    "render_directive",
    "render_json_report",
    "render_text_report",
    "split_private_and_reduction",
    "tokenize",
]
