import pytest
from hypothesis import given, strategies as st

from autoomp import Directive, ReductionSpec, ScheduleSpec, compute_chunk, parse_directive, render_directive
from autoomp.directive import END_DIRECTIVE, join_directive_lines, render_directive_lines, render_legacy_style
from autoomp.errors import InvalidGeometry

SUM = Directive(("I", "X"), (ReductionSpec("SUM", "+"),), ScheduleSpec("dynamic", 8))
MIXED_OPS = (ReductionSpec("VOLPH", "+"), ReductionSpec("TOTM", "-"),
           ReductionSpec("TOTSIE", "*"), ReductionSpec("XMR", "+"))


@pytest.mark.parametrize("line,elem,chunk", [(64, 8, 8), (8, 8, 1), (128, 8, 16), (64, 3, 21), (4, 8, 1)])
def test_compute_chunk(line, elem, chunk):
    assert compute_chunk(line, elem) == chunk


@pytest.mark.parametrize("line,elem", [(0, 8), (64, 0), (-64, 8)])
def test_compute_chunk_rejects(line, elem):
    with pytest.raises(InvalidGeometry):
        compute_chunk(line, elem)


def test_schedule_validation():
    assert ScheduleSpec().render() == "schedule(dynamic, 8)"
    with pytest.raises(ValueError):
        ScheduleSpec("guided", 8)
    with pytest.raises(ValueError):
        ScheduleSpec("dynamic", 0)


def test_sum_directive():
    assert render_directive(SUM) == (
        "!$omp parallel do private(I,X) schedule(dynamic, 8) reduction(+:SUM)\n" + END_DIRECTIVE
    )


def test_empty_directive():
    assert render_directive(Directive()) == "!$omp parallel do schedule(dynamic, 8)\n" + END_DIRECTIVE


def test_grouped_reductions():
    text = render_directive(Directive((), MIXED_OPS), line_width=200)
    assert text.splitlines()[0] == ("!$omp parallel do schedule(dynamic, 8) "
                                    "reduction(+:VOLPH,XMR) reduction(-:TOTM) reduction(*:TOTSIE)")


def test_static_policy():
    assert "schedule(static, 16)" in render_directive(Directive(schedule=ScheduleSpec("static", 16)))


def test_invariants():
    with pytest.raises(ValueError):
        Directive(("X", "I"))
    with pytest.raises(ValueError):
        Directive(("I", "I"))
    with pytest.raises(ValueError):
        Directive(("SUM",), (ReductionSpec("SUM", "+"),))
    with pytest.raises(ValueError):
        Directive((), (ReductionSpec("S", "+"), ReductionSpec("S", "*")))


def test_wrapping_at_default_width():
    names = tuple(sorted(f"VARIABLE_{k:02d}" for k in range(12)))
    lines = render_directive_lines(Directive(names, MIXED_OPS))
    assert len(lines) > 1
    assert all(len(ln) <= 72 for ln in lines)
    assert all(ln.endswith(" &") for ln in lines[:-1])
    assert all(ln.startswith("!$omp ") for ln in lines)


def test_width_too_small():
    with pytest.raises(ValueError):
        render_directive_lines(SUM, line_width=20)


def test_preserved_spelling():
    text = render_directive(SUM, spellings={"SUM": "sum", "I": "i"})
    assert "private(i,X)" in text and "reduction(+:sum)" in text


def test_legacy_style():
    text = render_legacy_style(Directive(("I", "X"), MIXED_OPS[:2]))
    assert text.splitlines() == [
        "!$omp parallel do private &", "(I, X) &", "schedule(dynamic, 8)",
        "!$omp reduction(+:VOLPH)", "!$omp reduction(-:TOTM)",
    ]


def test_parse_rejects_garbage():
    for text in ("!$omp parallel private(x)", "!$omp parallel do private(x)", "!$omp parallel do foo(x) schedule(dynamic, 8)"):
        with pytest.raises(ValueError):
            parse_directive(text)


# -- properties ----------------------------------------------------------------

names = st.from_regex(r"[A-Z][A-Z0-9_]{0,11}", fullmatch=True)


@st.composite
def directives(draw):
    pool = draw(st.lists(names, unique=True, max_size=30))
    split = draw(st.integers(0, len(pool)))
    private = tuple(sorted(pool[:split]))
    reductions = tuple(ReductionSpec(n, draw(st.sampled_from("+-*"))) for n in pool[split:])
    schedule = ScheduleSpec(draw(st.sampled_from(["dynamic", "static"])), draw(st.integers(1, 4096)))
    return Directive(private, reductions, schedule)


def _canonical(d):
    # render groups reductions by operator, so compare per operator
    return d.private, d.grouped_reductions(), d.schedule


@given(directives(), st.integers(40, 160))
def test_render_parse_round_trip(d, width):
    back = parse_directive(render_directive(d, width))
    assert _canonical(back) == _canonical(d)
    assert back.reduction_map() == d.reduction_map()


@given(directives(), st.integers(40, 160))
def test_line_length_and_joining(d, width):
    lines = render_directive_lines(d, width)
    assert all(len(ln) <= width for ln in lines)
    assert join_directive_lines(lines) == join_directive_lines(render_directive_lines(d, 100000))


@given(directives())
def test_one_clause_per_operator(d):
    text = join_directive_lines(render_directive_lines(d, 100000))
    for op in "+-*":
        assert text.count(f"reduction({op}:") <= 1
