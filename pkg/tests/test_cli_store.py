import io
import json
import os

import pytest

from slowsync.cli import CAPACITY, INPUT, MISMATCH, OK, main, verify_table
from slowsync.constructions import cerny
from slowsync.core import Dfa, DfaError, format_dfa
from slowsync.search import SearchConfig, SearchRecord, count, enumerate_all
from slowsync.store import (GOLDENS, Corpus, checkpoint_path, format_record, golden, merge_corpora,
                            merge_shards, parse_config, config_line, parse_record, read_corpus,
                            write_checkpoint, write_corpus)


def run(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_record_round_trip():
    recs = enumerate_all(SearchConfig(3, min_length=3, filters={"minimal", "transitive"}))
    for r in recs:
        assert parse_record(format_record(r)) == r
    sub = SearchRecord(cerny(3), 4, subset_size=2, subset_length=3)
    assert parse_record(format_record(sub)) == sub
    with pytest.raises(DfaError):
        parse_record('{"n": 3}')


def test_config_round_trip():
    cfg = SearchConfig(4, min_length=7, filters={"minimal"}, shard_count=3, shard_index=1)
    assert parse_config(config_line(cfg)) == cfg


def test_corpus_file_sorted(tmp_path):
    recs = enumerate_all(SearchConfig(3, min_length=3))
    path = str(tmp_path / "c.jsonl")
    write_corpus(path, Corpus(None, list(reversed(recs))))
    back = read_corpus(path)
    assert back.records == recs and back.table() == count(recs)


def shard_files(tmp_path, k):
    paths = []
    for i in range(k):
        p = str(tmp_path / ("s%d.jsonl" % i))
        code, _ = run("enumerate", "--states", 3, "--min-length", 3, "--shards", k, "--shard", i, "--out", p)
        assert code == OK
        paths.append(p)
    return paths


def test_merge_of_shards_equals_unsharded(tmp_path):
    whole = enumerate_all(SearchConfig(3, min_length=3))
    merged, table = merge_shards(shard_files(tmp_path, 4))
    assert merged.records == whole and table == count(whole)
    again = merge_corpora([merged, merged])
    assert again.records == merged.records


def test_merge_cli_idempotent(tmp_path):
    paths = shard_files(tmp_path, 4)
    out1, out2 = str(tmp_path / "m1.jsonl"), str(tmp_path / "m2.jsonl")
    assert run("merge", *paths, "--out", out1)[0] == OK
    assert run("merge", out1, "--out", out2)[0] == OK
    body = lambda p: [ln for ln in open(p) if not ln.startswith('{"config"')]
    assert body(out1) == body(out2)


def test_merge_empty_and_mismatch(tmp_path):
    assert merge_corpora([Corpus(None, []), Corpus(None, [])]).records == []
    a = Corpus(SearchConfig(3, min_length=3), [])
    b = Corpus(SearchConfig(3, min_length=2), [])
    with pytest.raises(DfaError):
        merge_corpora([a, b])


def test_checkpoint_resume(tmp_path):
    path = str(tmp_path / "run.jsonl")
    cfg = SearchConfig(3, min_length=3)
    recs = enumerate_all(cfg)
    # pretend a run stopped after the first subtree whose records are on disk
    marks = {}
    seen = []
    from slowsync.search import enumerate_dfas
    for r in enumerate_dfas(cfg, on_checkpoint=lambda f: marks.setdefault(f, len(seen))):
        seen.append(r)
    cut = sorted(marks)[1]
    with open(path, "w") as fh:
        fh.write(config_line(cfg) + "\n")
        for r in seen[:marks[cut]]:
            fh.write(format_record(r) + "\n")
    write_checkpoint(path, cfg, cut)
    assert run("enumerate", "--states", 3, "--min-length", 3, "--out", path)[0] == OK
    assert read_corpus(path).records == recs
    assert os.path.exists(checkpoint_path(path))
    # a different search refuses the checkpoint
    assert run("enumerate", "--states", 3, "--min-length", 2, "--out", path)[0] == INPUT


def test_analyze_cerny7(monkeypatch):
    code, out = run("analyze", "-", stdin=format_dfa(cerny(7)), monkeypatch=monkeypatch)
    assert code == OK and "sync_length 36" in out
    assert "word abbbbbba" in out  # letters follow the sorted symbol order


def test_analyze_file(tmp_path):
    code, out = run("analyze", write(tmp_path, "c4.txt", "4 2\n1 2 3 0\n1 1 2 3\n"))
    assert code == OK
    assert "sync_length 9" in out and "minimal true" in out and "maximal true" in out


def test_bounds_empty_dfa(tmp_path):
    path = write(tmp_path, "e.txt", "3 0\n")
    code, out = run("bounds", path)
    assert code == OK and out.split() == ["L", "4", "Lp", "4", "Lpp", "4"]
    code, out = run("bounds", path, "--variant", "Lpp", "--improved")
    assert out == "Lpp 4\n"


def test_subset_command(tmp_path):
    path = write(tmp_path, "c5.txt", format_dfa(cerny(5)))
    assert run("subset", path, "--size", 3)[1] == "max_subset_length 3 13\n"
    assert run("subset", path, "--states", "0,2")[0] == OK


def test_construct_and_classify(tmp_path, monkeypatch):
    code, text = run("construct", "star_semi_minimal", "--n", 5)
    assert code == OK and text.startswith("5 5\n")
    path = write(tmp_path, "s.txt", text)
    code, out = run("classify", path)
    assert "length 5" in out and "semi_minimal true" in out
    code, out = run("ranges", path)
    assert code == OK and out.splitlines()[1].startswith("5 | 5 |")


def test_enumerate_stdout():
    code, out = run("enumerate", "--states", 3, "--min-length", 4, "--filter", "minimal",
                    "--filter", "transitive")
    lines = out.splitlines()
    assert code == OK and len(lines) == 4
    assert {json.loads(ln)["alphabet"] for ln in lines} == {2, 3}


def test_enumerate_jobs_env(monkeypatch):
    monkeypatch.setenv("SLOWSYNC_JOBS", "2")
    code, out = run("enumerate", "--states", 3, "--min-length", 3)
    assert code == OK
    assert len(out.splitlines()) == len(enumerate_all(SearchConfig(3, min_length=3)))


@pytest.mark.parametrize("argv", [
    ["construct", "merge_chain", "--n", "5"],
    ["construct", "cerny", "--n", "1"],
    ["enumerate", "--states", "3", "--min-length", "3", "--shards", "2", "--shard", "5"],
    ["analyze", "/nonexistent/file"],
    ["verify", "--table", "nope"],
    ["frobnicate"],
])
def test_input_errors(argv):
    assert run(*argv)[0] == INPUT


def test_bad_dfa_file(tmp_path):
    assert run("analyze", write(tmp_path, "bad.txt", "2 1\n0 1\n"))[0] == INPUT


def test_verify_quick_tables():
    for name in ("om3", "om4", "r2", "r3", "os3", "os4", "n7"):
        out = io.StringIO()
        assert verify_table(name, "quick", out) == OK, out.getvalue()


def test_verify_full_tables_need_budget():
    for name, g in GOLDENS.items():
        if g.budget == "full":
            assert verify_table(name, "quick", io.StringIO()) == CAPACITY


def test_verify_reports_mismatch(monkeypatch):
    g = golden("om3")
    bad = dict(g.data)
    bad[(2, 4)] += 1
    monkeypatch.setitem(GOLDENS, "om3", type(g)(g.name, g.kind, g.n, g.citation, bad, params=g.params))
    out = io.StringIO()
    assert verify_table("om3", "quick", out) == MISMATCH
    assert "mismatch alphabet 2 length 4: expected 3, got 2" in out.getvalue()


def test_goldens_carry_citations():
    for g in GOLDENS.values():
        assert g.citation and g.budget in ("quick", "full")


def test_version_of_dfa_text():
    assert format_dfa(Dfa(3)) == "3 0\n"
