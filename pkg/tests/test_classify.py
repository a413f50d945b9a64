import random
from collections import Counter
from itertools import combinations

import pytest

from slowsync.classify import (ClassFlags, alphabet_ranges, classify, extract_maximal, is_maximal,
                               is_minimal, is_semi_minimal, maximal_supersets,
                               nondecreasing_symbols, nontransitive_max_length, parse_range,
                               range_table, render_range, saturate, subset_achievers)
from slowsync.constructions import cerny
from slowsync.core import Dfa, DfaError, canonical_symbols, non_identity_transformations
from slowsync.power import is_transitive, sync_length
from slowsync.search import SearchConfig, SearchRecord, enumerate_all
from slowsync.store import R2, R3

from conftest import random_dfa

ALL3 = non_identity_transformations(3)
CONSTANTS3 = [(0, 0, 0), (1, 1, 1), (2, 2, 2)]


def brute_flags(d):
    """Definitions applied literally."""
    n, ell = d.n, sync_length(d)
    removed = [sync_length(d.without(t)) if len(d.symbols) > 1 else None for t in d.symbols]
    minimal = all(x is None for x in removed)
    semi = all(x is None or x > ell for x in removed)
    maximal = all(sync_length(d.with_symbol(t)) < ell
                  for t in non_identity_transformations(n) if t not in d.symbols)
    return minimal, semi, maximal


def test_cerny4_minimal():
    f = classify(cerny(4))
    # no new symbol keeps length 9, which is where the 2 in the row-9 max set comes from
    assert f.minimal and f.semi_minimal and f.maximal
    assert brute_flags(cerny(4)) == (True, True, True)


def test_full_alphabet_n3():
    full = Dfa(3, tuple(ALL3))
    assert sync_length(full) == 1 and classify(full).maximal
    no_const = Dfa(3, tuple(t for t in ALL3 if t not in CONSTANTS3))
    assert len(no_const.symbols) == 23
    assert sync_length(no_const) == 2 and classify(no_const).maximal


def test_classify_rejects_nonsynchronizing():
    with pytest.raises(DfaError):
        classify(Dfa(3, ((1, 2, 0),)))
    with pytest.raises(DfaError):
        saturate(Dfa(3))


def test_classify_matches_definitions_n3():
    for k in (1, 2):
        for combo in combinations(ALL3, k):
            d = Dfa(3, combo)
            if sync_length(d) is None:
                continue
            f = classify(d)
            assert (f.minimal, f.semi_minimal, f.maximal) == brute_flags(d)


def test_classify_matches_definitions_sampled(rng):
    for _ in range(80):
        n = rng.choice([4, 4, 4, 5])
        d = random_dfa(rng, n, rng.randint(1, 4))
        if sync_length(d) is None:
            continue
        f = classify(d)
        assert (f.minimal, f.semi_minimal, f.maximal) == brute_flags(d)
        if f.minimal:
            assert f.semi_minimal


def test_tracking_changes_nothing(rng):
    tracked = set()
    for _ in range(150):
        d = random_dfa(rng, 3, rng.randint(1, 6))
        ell = sync_length(d)
        if ell is None:
            continue
        assert is_maximal(d, ell, tracked) == is_maximal(d, ell)
    assert tracked


def test_saturate_examples():
    assert saturate(Dfa(3, ((0, 0, 0),))) == Dfa(3, tuple(ALL3))
    full = Dfa(3, tuple(ALL3))
    assert saturate(full) == full
    s = saturate(cerny(4))
    assert sync_length(s) == 9 and is_maximal(s) and len(s.symbols) in {2, 3, 5}
    assert set(cerny(4).symbols) <= set(s.symbols)


def test_saturate_properties(rng):
    for _ in range(40):
        d = random_dfa(rng, rng.choice([3, 4]), rng.randint(1, 4))
        ell = sync_length(d)
        if ell is None:
            continue
        s = saturate(d)
        assert sync_length(s) == ell and is_maximal(s, ell)
        assert set(d.symbols) <= set(s.symbols)
        assert saturate(s) == s
        if d.n == 3 or ell >= 6:
            sups = maximal_supersets(d)
            assert all(is_maximal(Dfa(d.n, m), ell) for m in sups)
            assert canonical_symbols(d.n, s.symbols) in sups


def test_maximal_supersets_exhaustive_n3():
    """Every maximal superset found by brute force is reported, and nothing else."""
    rng = random.Random(5)
    for _ in range(30):
        d = random_dfa(rng, 3, 2)
        ell = sync_length(d)
        if ell is None or ell < 2:
            continue
        keep = nondecreasing_symbols(d, ell)
        if len(keep) > 12:
            continue
        want = set()
        for k in range(len(keep) + 1):
            for extra in combinations(keep, k):
                B = Dfa(3, d.symbols + extra)
                if sync_length(B) == ell and is_maximal(B, ell):
                    want.add(canonical_symbols(3, B.symbols))
        assert set(maximal_supersets(d)) == want


def n3_corpus(threshold):
    recs = enumerate_all(SearchConfig(3, min_length=threshold))
    return [SearchRecord(r.dfa, r.sync_length, maximal=is_maximal(r.dfa, r.sync_length)) for r in recs]


def test_extract_maximal_n3():
    corpus = n3_corpus(4)
    got = extract_maximal(corpus, 4)
    assert {r.alphabet for r in got} == {5}
    assert {r.dfa for r in got} == {r.dfa for r in corpus if r.maximal}
    corpus = n3_corpus(3)
    assert {r.dfa for r in extract_maximal(corpus, 3)} == {r.dfa for r in corpus if r.maximal}


def test_extract_maximal_singleton():
    d = saturate(cerny(3))
    assert [r.dfa for r in extract_maximal([SearchRecord(d, 4)])] == [d]


def test_range_tables_n2_n3():
    assert range_table(2).matches(R2) == []
    t = range_table(3)
    assert t.matches(R3) == []
    assert [min(t.column(ell, "max")) for ell in (1, 2, 3, 4)] == [26, 23, 9, 5]
    assert range_table(3, analytic=False).matches(R3) == []


def test_range_column_inclusions():
    t = range_table(3)
    for ell in t.rows:
        assert t.column(ell, "min") <= t.column(ell, "smin") <= t.column(ell, "all")


def test_alphabet_ranges():
    assert alphabet_ranges([]).rows == {}
    d2, d3 = cerny(3), saturate(cerny(3))
    t = alphabet_ranges([SearchRecord(d2, 4, minimal=True, semi_minimal=True, maximal=False),
                         SearchRecord(d3, 4, minimal=False, semi_minimal=False, maximal=True)])
    assert t.column(4, "all") == {2, len(d3.symbols)}
    assert t.column(4, "min") == {2} and t.column(4, "max") == {len(d3.symbols)}


def test_range_rendering():
    assert render_range([2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 17, 21]) == "2--15, 17, 21"
    assert render_range([]) == ""
    assert parse_range("79, 83, 91--93") == {79, 83, 91, 92, 93}


def test_subset_achievers_n4():
    length, table, tm = subset_achievers(4, 3)
    assert length == 8
    assert table.by_alphabet(8) == {2: 3, 3: 11, 4: 13, 5: 6, 6: 1}
    assert tm.by_alphabet(8) == {2: 3, 3: 4}
    assert table.total() == 34 and tm.total() == 7


def test_subset_achievers_witness_and_full_set():
    length, table, _ = subset_achievers(7, 5)
    assert length == 33 and table.total() == 1
    assert subset_achievers(3, 3)[0] == 4
    with pytest.raises(DfaError):
        subset_achievers(4, 5)


def test_nontransitive_max_length():
    assert [nontransitive_max_length(n) for n in (3, 4, 5, 7)] == [3, 6, 10, 26]
    with pytest.raises(DfaError):
        nontransitive_max_length(1)


def test_nontransitive_never_exceeds_bound():
    # a synchronizing DFA contains a minimal one that is at least as slow, and
    # dropping symbols keeps a DFA nontransitive, so minimal DFAs suffice
    for n in (2, 3, 4):
        cfg = SearchConfig(n, min_length=nontransitive_max_length(n), filters={"minimal"})
        recs = enumerate_all(cfg)
        worst = max(r.sync_length for r in recs if not is_transitive(r.dfa))
        assert worst == nontransitive_max_length(n)


def test_flags_dataclass():
    f = ClassFlags(True, True, False)
    assert f.tracked_nondecreasing_symbols == set()
