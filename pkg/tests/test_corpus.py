from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from oracles import (
    S3,
    f_oracle,
    face_count,
    fox_oracle,
    genus_oracle,
    hom_oracle,
    laurent_to_sympy,
    s3_inv,
    s3_mul,
)
from virtknot.corpus import (
    RunConfig,
    TSV_COLUMNS,
    bundled_corpus,
    corpus_run,
    load_corpus,
    parse_corpus,
    rows_to_json,
    rows_to_tsv,
)
from virtknot.errors import CorpusParseError
from virtknot.gauss import parse, serialize
from virtknot.invariants import f_polynomial
from virtknot.report import FIGURE_NAMES, write_figures

GOLDEN = Path(__file__).parent / "golden" / "bundled_corpus.tsv"


@pytest.fixture(scope="module")
def bundled_rows():
    return corpus_run(bundled_corpus())


def test_bundled_corpus_names():
    assert bundled_corpus().names() == [
        "unknot", "kink_positive", "kink_negative", "double_kink", "trefoil_right",
        "trefoil_left", "figure_eight", "virtual_trefoil", "kishino_style"]


def test_bundled_run_matches_golden_tsv(bundled_rows):
    assert rows_to_tsv(bundled_rows) == GOLDEN.read_text(encoding="utf-8")


def test_golden_tsv_agrees_with_oracles():
    rows = list(csv.DictReader(io.StringIO(GOLDEN.read_text(encoding="utf-8")), delimiter="\t"))
    assert len(rows) == 9
    for row in rows:
        code = parse(row["code"])
        assert int(row["genus"]) == genus_oracle(code)
        if code.n:
            assert int(row["boundary_curves"]) == face_count(code)
        fox = dict(item.split("=") for item in row["fox_colorings"].split(";"))
        for n in (2, 3, 5):
            assert int(fox[str(n)]) == fox_oracle(code, n)
        reps = dict(item.split("=") for item in row["rep_counts"].split(";"))
        assert int(reps["S3"]) == hom_oracle(code, S3, s3_mul, s3_inv)
        f = f_polynomial(code)
        assert laurent_to_sympy(f) == f_oracle(code)
        assert row["f_polynomial"] == str(f)


def test_runs_are_identical_across_worker_counts(bundled_rows):
    parallel = corpus_run(bundled_corpus(), RunConfig(workers=3))
    assert rows_to_tsv(parallel) == rows_to_tsv(bundled_rows)
    assert rows_to_json(parallel) == rows_to_json(bundled_rows)


def test_json_rows(bundled_rows):
    data = json.loads(rows_to_json(bundled_rows))
    assert [r["name"] for r in data] == bundled_corpus().names()
    vt = data[7]
    assert vt["genus"] == 1 and vt["odd_writhe"] == 2 and vt["fox_colorings"]["3"] == 3


def test_empty_corpus(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# nothing here\n\n")
    rows = corpus_run(path)
    assert rows == []
    assert rows_to_tsv(rows) == "\t".join(TSV_COLUMNS) + "\n"


def test_bad_code_names_the_line():
    with pytest.raises(CorpusParseError) as info:
        parse_corpus(["# header", "good O1+U1+", "", "bad O1+U1-"])
    assert info.value.line == 4
    assert "line 4" in str(info.value)


def test_duplicate_names_are_rejected():
    with pytest.raises(CorpusParseError, match="duplicate"):
        parse_corpus(["k O1+U1+", "k O1-U1-"])


def test_bare_codes_and_notes():
    corpus = parse_corpus(["# file header", "", "# first note", "O1+U1+", "named ()"])
    assert corpus.header == ("file header",)
    assert [e.name for e in corpus] == ["entry4", "named"]
    assert corpus.entries[0].note == "first note"
    assert serialize(corpus.get("named")) == "()"


def test_load_corpus_from_file(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("a O1+U2+O2+U1+\nb O1+O2+U1+U2+\n")
    corpus = load_corpus(path)
    assert len(corpus) == 2 and corpus.names() == ["a", "b"]


@pytest.mark.parametrize("kwargs", [
    {"max_crossings": 0}, {"max_states": -1}, {"workers": 0},
    {"output_format": "xml"}, {"fox": (1,)}, {"bracket_limit": 0},
])
def test_run_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)


def test_figures_are_written_and_reproducible(bundled_rows, tmp_path):
    first = write_figures(bundled_rows, tmp_path / "one")
    second = write_figures(bundled_rows, tmp_path / "two")
    assert [p.name for p in first] == list(FIGURE_NAMES)
    for a, b in zip(first, second):
        data = a.read_bytes()
        assert data.startswith(b"\x89PNG") and len(data) > 1000
        assert data == b.read_bytes()
