import pytest

from autoomp.errors import NotALoop, UnbalancedLoop
from autoomp.frontend import StmtKind, parse_loop, render, tokenize
from autoomp.frontend.parser import parse_designator
from conftest import CORPUS, corpus_cases, read

SUM_LOOP = """\
      do j = 1,NY
          do i = 1,NX
              x = f(i,j)
              a(i,j) = g(x)
              sum = sum + a(i,j)
          end do
      end do
"""


def parse(text):
    return parse_loop(tokenize(text))


def assignments(loop):
    return [s for s in loop.statements() if s.kind is StmtKind.ASSIGNMENT]


def test_sum_loop():
    loop = parse(SUM_LOOP)
    assert loop.parallel_index == "J"
    assert list(loop.inner_indices) == ["I"]
    assert [s.target for s in assignments(loop)] == ["X", "A", "SUM"]
    assert [s.depth for s in assignments(loop)] == [2, 2, 2]
    assert loop.body[0].depth == 1


def test_empty_body():
    loop = parse("do i=1,n\nend do\n")
    assert loop.parallel_index == "I"
    assert list(loop.inner_indices) == []
    assert loop.body == []


def test_nested_named_index():
    loop = parse("do j=1,ny\n  Do II=1, NMATS\n    VOLPH=VOLPH+VOLM(II)\n  End Do\nend do\n")
    assert "II" in loop.inner_indices
    do = loop.body[0]
    assert do.kind is StmtKind.DO_HEADER and do.index == "II" and len(do.bounds) == 2


def test_statement_payloads():
    loop = parse("do j=1,n,2\n  a(i, j+1) = b\n  call volmat(xflag, ft(j))\n  write(*,*) x\nend do\n")
    assert len(loop.header.bounds) == 3
    asg, call, other = loop.body[:3]
    assert asg.target == "A" and len(asg.subscripts) == 2 and asg.subscripted
    assert call.callee == "VOLMAT" and len(call.args) == 2
    assert other.kind is StmtKind.OTHER


def test_if_guards_and_inline_action():
    loop = parse("do j=1,n\n if (a(j) > 0) then\n  x = 1\n else\n  y = 2\n end if\n if (z) w = 3\nend do\n")
    x = next(s for s in loop.statements() if s.target == "X")
    y = next(s for s in loop.statements() if s.target == "Y")
    w = next(s for s in loop.statements() if s.target == "W")
    assert len(x.guards) == 1 and len(y.guards) == 1
    assert len(w.guards) == 1
    assert loop.body[-1].inline


def test_labelled_do():
    loop = parse("      DO 10 I = 1, N\n      X = I\n   10 CONTINUE\n      Y = 2\n")
    assert loop.parallel_index == "I"
    assert [s.target for s in assignments(loop)] == ["X"]


def test_statement_lines_cover_continuations():
    loop = parse("do j = 1, n\n  a(j) = 1 + &\n     2\n  b = 3\nend do\n")
    first, second = assignments(loop)
    assert (first.line, first.end_line) == (2, 3)
    assert second.line == 4


def test_extra_loops_counted():
    loop = parse("do i=1,n\nend do\ndo k=1,n\n  do m=1,n\n  end do\nend do\n")
    assert loop.extra_loops == 1
    assert loop.extra_loop_lines == (3,)


@pytest.mark.parametrize("text", ["x = 1\n", "", "! only a comment\n", "do while (x > 0)\nend do\n"])
def test_not_a_loop(text):
    with pytest.raises(NotALoop):
        parse(text)


@pytest.mark.parametrize("text", [
    "do i = 1, n\n  x = 1\n",
    "do i = 1, n\n  do k = 1, n\n  end do\n",
    "do i = 1, n\n  if (x) then\nend do\n",
])
def test_unbalanced(text):
    with pytest.raises(UnbalancedLoop):
        parse(text)


def test_bare_end_does_not_close_loop():
    with pytest.raises(UnbalancedLoop):
        parse("do i = 1, n\n  x = 1\nend\n")


def test_designator():
    base, subs, subscripted = parse_designator(tokenize("cell(j)%rho")[:6])
    assert base == "CELL" and subscripted and len(subs) == 1


@pytest.mark.parametrize("case", corpus_cases())
def test_render_round_trip(case):
    text = read(f"{CORPUS}/{case}/loop.f90")
    loop = parse(text)
    assert [t.text for t in tokenize(render(loop))] == [t.text for t in tokenize(text)]
    assert render(loop) == text


def _upper_outside_strings(text):
    out, quote = [], None
    for ch in text:
        if quote:
            quote = None if ch == quote else quote
            out.append(ch)
        elif ch in "'\"":
            quote = ch
            out.append(ch)
        else:
            out.append(ch.upper())
    return "".join(out)


@pytest.mark.parametrize("case", corpus_cases())
def test_case_insensitive_structure(case):
    text = read(f"{CORPUS}/{case}/loop.f90")
    assert parse(text).structure() == parse(_upper_outside_strings(text)).structure()


def _records(loop):
    keep = {StmtKind.ASSIGNMENT, StmtKind.DO_HEADER, StmtKind.CALL}
    return [(s.kind, s.target, s.index, s.callee, s.signature()[3:])
            for s in loop.statements() if s.kind in keep]


@pytest.mark.parametrize("case", corpus_cases())
def test_other_statement_insertion_is_neutral(case):
    text = read(f"{CORPUS}/{case}/loop.f90")
    lines = text.splitlines(keepends=True)
    base = _records(parse(text))
    # after the header, and before the last line
    for pos in (1, len(lines) - 1):
        changed = "".join(lines[:pos] + ["      WRITE(*,*) 'x = x + 1', y\n"] + lines[pos:])
        assert _records(parse(changed)) == base
