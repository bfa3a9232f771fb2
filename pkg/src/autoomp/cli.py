"""Command-line driver.

Exit status: 0 when a complete directive was produced, 1 when the directive
was produced but some variables need manual synchronisation, 2 on input or
parse errors (no directive).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass

from .directive import (
    DEFAULT_CACHE_LINE,
    DEFAULT_ELEMENT_BYTES,
    DEFAULT_LINE_WIDTH,
    END_DIRECTIVE,
    POLICIES,
    render_directive_lines,
)
from .errors import AutoOMPError, DeclarationError
from .pipeline import EXIT_CLEAN, EXIT_INPUT_ERROR, Analysis, analyze
from .report import render_json_report, render_text_report


@dataclass
class Config:
    loop_path: str
    decl_path: str
    cache_line_bytes: int = DEFAULT_CACHE_LINE
    element_bytes: int = DEFAULT_ELEMENT_BYTES
    schedule_policy: str = "dynamic"
    format: str = "text"
    in_place: bool = False
    preserve_case: bool = False
    paper_style_report: bool = False
    line_width: int = DEFAULT_LINE_WIDTH


def _read(path: str) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def insert_directive(source: str, analysis: Analysis, line_width: int = DEFAULT_LINE_WIDTH,
                     preserve_case: bool = False) -> str:
    """Return *source* with the directive above the loop and the end line below it."""
    lines = source.splitlines(keepends=True)
    newline = "\r\n" if lines and lines[0].endswith("\r\n") else "\n"
    start = analysis.loop.header.line - 1
    stop = analysis.loop.end_line
    header_text = lines[start]
    indent = header_text[: len(header_text) - len(header_text.lstrip(" \t"))]
    spellings = analysis.loop.spellings() if preserve_case else None
    opening = render_directive_lines(analysis.directive, line_width - len(indent), spellings)
    if stop >= len(lines) and lines and not lines[-1].endswith(("\n", "\r")):
        lines[-1] += newline
    before = [indent + text + newline for text in opening]
    after = [indent + END_DIRECTIVE + newline]
    return "".join(lines[:start] + before + lines[start:stop] + after + lines[stop:])


def write_atomic(path: str, text: str) -> None:
    """Replace *path* with *text* via a temp file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".autoomp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        try:
            os.chmod(tmp, os.stat(path).st_mode & 0o7777)
        except OSError:
            pass
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: Config, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    current = config.loop_path
    try:
        loop_text = _read(config.loop_path)
        current = config.decl_path
        decl_text = _read(config.decl_path)
        current = config.loop_path
        analysis = analyze(
            loop_text,
            decl_text,
            decl_source=config.decl_path,
            cache_line_bytes=config.cache_line_bytes,
            element_bytes=config.element_bytes,
            schedule_policy=config.schedule_policy,
            line_width=config.line_width,
            preserve_case=config.preserve_case,
            legacy_style=config.paper_style_report,
        )
    except FileNotFoundError as exc:
        print(f"autoomp: error: {exc.filename or current}: file not found", file=stderr)
        return EXIT_INPUT_ERROR
    except (OSError, UnicodeDecodeError) as exc:
        print(f"autoomp: error: {current}: {exc}", file=stderr)
        return EXIT_INPUT_ERROR
    except AutoOMPError as exc:
        path = config.decl_path if isinstance(exc, DeclarationError) else config.loop_path
        where = f"{path}:{exc.line}" if exc.line is not None else path
        print(f"autoomp: error: {where}: {type(exc).__name__}: {exc.message}", file=stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"autoomp: error: {exc}", file=stderr)
        return EXIT_INPUT_ERROR

    report = analysis.report
    if config.format == "json":
        stdout.write(render_json_report(report))
    else:
        stdout.write(render_text_report(report))
    for diag in report.diagnostics:
        print(diag.format(config.loop_path), file=stderr)

    code = analysis.exit_code
    if config.in_place:
        if code == EXIT_CLEAN:
            write_atomic(
                config.loop_path,
                insert_directive(loop_text, analysis, config.line_width, config.preserve_case),
            )
        else:
            print(f"autoomp: {config.loop_path} left unchanged: manual synchronisation required",
                  file=stderr)
    return code


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="autoomp",
        description="Classify the variables of a Fortran DO loop and print an OpenMP parallel do directive.",
    )
    p.add_argument("loop_file", help="file holding the DO loop")
    p.add_argument("decl_file", help="file listing the variables declared in the enclosing routine")
    p.add_argument("--cache-line", type=_positive, default=DEFAULT_CACHE_LINE, metavar="N",
                   help="cache line size in bytes (default: %(default)s)")
    p.add_argument("--element-bytes", type=_positive, default=DEFAULT_ELEMENT_BYTES, metavar="N",
                   help="array element size in bytes (default: %(default)s)")
    p.add_argument("--schedule", choices=POLICIES, default="dynamic")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--line-width", type=_positive, default=DEFAULT_LINE_WIDTH, metavar="N",
                   help="maximum directive line length (default: %(default)s)")
    p.add_argument("--in-place", action="store_true",
                   help="insert the directive into LOOP_FILE (only when no manual synchronisation is needed)")
    p.add_argument("--preserve-case", action="store_true",
                   help="spell names in the directive as they appear in the source")
    p.add_argument("--paper-style-report", action="store_true",
                   help="also print the directive in the legacy one-reduction-per-line layout")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = Config(
        loop_path=args.loop_file,
        decl_path=args.decl_file,
        cache_line_bytes=args.cache_line,
        element_bytes=args.element_bytes,
        schedule_policy=args.schedule,
        format=args.format,
        in_place=args.in_place,
        preserve_case=args.preserve_case,
        paper_style_report=args.paper_style_report,
        line_width=args.line_width,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
