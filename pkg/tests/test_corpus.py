"""Golden reports for the loop corpus plus the hand-written expectations."""

import json
import os

import pytest

from autoomp import analyze
from autoomp.report import render_json_report, render_text_report
from conftest import CORPUS, corpus_cases, read

MANIFEST = json.loads(read(os.path.join(CORPUS, "manifest.json")))
CASES = corpus_cases()


def _analyse(case):
    d = os.path.join(CORPUS, case)
    return analyze(read(os.path.join(d, "loop.f90")), read(os.path.join(d, "decls.f90")))


def test_corpus_size_and_manifest_cover_each_other():
    assert len(CASES) >= 20
    assert sorted(MANIFEST) == CASES


@pytest.mark.parametrize("case", CASES)
def test_manifest_expectations(case):
    want = MANIFEST[case]
    got = _analyse(case)
    assert got.exit_code == want["exit_code"]
    assert got.private == want["private"]
    assert got.shared == want["shared"]
    assert {r.variable: r.op for r in got.reductions} == want["reductions"]
    assert got.manual == want["manual"]


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("fmt", ["txt", "json"])
def test_golden_report(case, fmt, update_golden):
    report = _analyse(case).report
    text = render_text_report(report) if fmt == "txt" else render_json_report(report)
    path = os.path.join(CORPUS, case, f"expected.{fmt}")
    if update_golden:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    assert text == read(path)


def test_required_shapes_present():
    by_desc = " ".join(v["description"] for v in MANIFEST.values())
    for needle in ("nest", "CALL", "IF", "+ then *", "inner index"):
        assert needle in by_desc
    assert MANIFEST["02_max_critical"]["exit_code"] == 1


@pytest.mark.parametrize("case", CASES)
def test_oracle_matches_manifest(case):
    from oracle import analyse

    d = os.path.join(CORPUS, case)
    declared = _analyse(case).declarations.names
    got = analyse(read(os.path.join(d, "loop.f90")), declared)
    want = MANIFEST[case]
    assert sorted(got["private"]) == want["private"]
    assert sorted(got["shared"]) == want["shared"]
    assert got["reductions"] == want["reductions"]
    assert sorted(got["manual"]) == want["manual"]
