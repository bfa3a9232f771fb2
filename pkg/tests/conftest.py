import os
import sys

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
CORPUS = os.path.join(HERE, "corpus")

# oracle.py and loopgen.py live next to the tests
sys.path.insert(0, HERE)


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true",
                     help="rewrite tests/corpus/*/expected.* from the current output")


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


def corpus_cases():
    return sorted(d for d in os.listdir(CORPUS) if os.path.isdir(os.path.join(CORPUS, d)))


def read(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion("name", "detail"): <asserts>``.  The line is
    printed immediately and repeated in the terminal summary.
    """
    from contextlib import contextmanager

    @contextmanager
    def _check(name, detail=""):
        status = "FAIL"
        try:
            yield
            status = "PASS"
        finally:
            line = f"[{status}] {name}" + (f" ({detail})" if detail else "")
            ACCEPTANCE_LINES.append(line)
            print(line)

    return _check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
