from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from slowsync.constructions import cerny, nontransitive_extremal
from slowsync.core import Dfa, DfaError, apply, full_set, members, size, state_set
from slowsync.power import (PowerGraph, irreducible_scc, is_synchronizing, is_transitive,
                            max_subset_sync_length, reduction_data, shortest_sync_word,
                            subset_sync_length, sync_length)

from conftest import random_dfa

CYCLE3 = Dfa(3, ((1, 2, 0),))
EMPTY3 = Dfa(3)


def brute_sync_length(dfa, subset, limit):
    """Shortest word length by trying all words up to ``limit``."""
    if size(subset) == 1:
        return 0
    for ln in range(1, limit + 1):
        for w in product(range(len(dfa.symbols)), repeat=ln):
            if size(apply(subset, w, dfa)) == 1:
                return ln
    return None


@pytest.mark.parametrize("n", range(2, 13))
def test_cerny_lengths(n):
    assert sync_length(cerny(n)) == (n - 1) ** 2


def test_synchronizing_examples():
    assert is_synchronizing(cerny(7))
    assert not is_synchronizing(Dfa(4, ((1, 2, 3, 0), (1, 0, 2, 3))))
    assert is_synchronizing(Dfa(5, ((2,) * 5,)))
    assert sync_length(Dfa(5, ((2,) * 5,))) == 1
    assert not is_synchronizing(EMPTY3)
    assert sync_length(EMPTY3) is None


def test_shortest_word_cerny5():
    d = cerny(5)
    a, b = d.symbols.index((1, 2, 3, 4, 0)), d.symbols.index((1, 1, 2, 3, 4))
    letters = {a: "a", b: "b"}
    assert "".join(letters[x] for x in shortest_sync_word(d)) == "baaaabaaaabaaaab"


def test_shortest_word_constant():
    d = Dfa(3, ((0, 2, 1), (1, 1, 1)))
    assert shortest_sync_word(d) == [1]


def test_cerny4_unique_word():
    d = cerny(4)
    words = [w for w in product(range(2), repeat=9) if size(apply(full_set(4), w, d)) == 1]
    assert len(words) == 1


def test_subset_lengths():
    assert max_subset_sync_length(cerny(5), 3) == 13
    assert max_subset_sync_length(cerny(7), 4) == 31
    assert subset_sync_length(cerny(4), state_set([2])) == 0
    with pytest.raises(DfaError):
        subset_sync_length(cerny(4), 0)


def test_reduction_examples():
    d = cerny(4)
    r = reduction_data(d, full_set(4))
    assert r.reducible and r.l_R == 1 and r.sizeS_R == 1
    assert reduction_data(d, state_set([1, 3])).l_R == 6
    r = reduction_data(CYCLE3, state_set([0, 1]))
    assert not r.reducible and r.l_R is None and r.sizeS_R == 2
    assert r.m_R == 0 and r.M_R == 2 and len(r.reachable_min_sets) == 3
    with pytest.raises(DfaError):
        reduction_data(d, state_set([1]))


def test_scc_examples():
    s = irreducible_scc(CYCLE3, 2)
    assert len(s.components) == 1 and s.diameters == [2] and s.m_k == 3
    assert s.improved_m_k == 3
    s = irreducible_scc(EMPTY3, 2)
    assert len(s.components) == 3 and s.diameters == [0, 0, 0] and s.m_k == 3
    assert irreducible_scc(cerny(4), 2).m_k == 0
    with pytest.raises(DfaError):
        irreducible_scc(cerny(4), 1)


def test_transitivity():
    assert all(is_transitive(cerny(n)) for n in range(2, 8))
    assert not is_transitive(EMPTY3)
    assert not is_transitive(nontransitive_extremal(5, 4))


def test_against_word_search(rng):
    for _ in range(150):
        n = rng.randint(2, 4)
        d = random_dfa(rng, n, rng.randint(1, 3))
        for S in (full_set(n), state_set([0, n - 1])):
            got = subset_sync_length(d, S)
            want = brute_sync_length(d, S, 6)
            if got is None or got <= 6:
                assert got == want


def test_reduction_word_is_shortest(rng):
    for _ in range(100):
        n = rng.randint(3, 4)
        d = random_dfa(rng, n, rng.randint(1, 3))
        R = rng.randrange(1, 1 << n)
        if size(R) < 2:
            continue
        r = reduction_data(d, R)
        if not r.reducible or r.l_R > 5:
            continue
        for ln in range(r.l_R + 1):
            shrinks = any(size(apply(R, w, d)) < size(R)
                          for w in product(range(len(d.symbols)), repeat=ln))
            assert shrinks == (ln == r.l_R)


def _brute_m_k(dfa, k):
    g = PowerGraph.of(dfa)
    n = dfa.n
    nodes = [m for m in range(1, 1 << n) if size(m) == k and reduction_data(dfa, m).sizeS_R == k]
    # Floyd-Warshall on the graph restricted to the irreducible k-sets
    inf = float("inf")
    dist = {(a, b): (0 if a == b else inf) for a in nodes for b in nodes}
    for a in nodes:
        for tb in g.tables:
            b = tb[a]
            if b in nodes and b != a:
                dist[a, b] = 1
    for c in nodes:
        for a in nodes:
            for b in nodes:
                if dist[a, c] + dist[c, b] < dist[a, b]:
                    dist[a, b] = dist[a, c] + dist[c, b]
    comps = {frozenset(b for b in nodes if dist[a, b] < inf and dist[b, a] < inf) for a in nodes}
    return len(comps) + sum(max(dist[a, b] for a in c for b in c) for c in comps)


def test_m_k_matches_floyd_warshall(rng):
    for _ in range(60):
        n = rng.randint(3, 5)
        d = random_dfa(rng, n, rng.randint(0, 2))
        for k in range(2, n + 1):
            s = irreducible_scc(d, k)
            assert s.m_k == _brute_m_k(d, k)
            assert s.improved_m_k <= s.m_k


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(*[st.integers(0, n - 1)] * n), max_size=3),
                        st.integers(1, (1 << n) - 1), st.integers(1, (1 << n) - 1))))
def test_subset_monotone_and_pair_bound(args):
    n, syms, S, extra = args
    d = Dfa(n, tuple({t for t in syms if t != tuple(range(n))}))
    big = S | extra
    a, b = subset_sync_length(d, S), subset_sync_length(d, big)
    if a is not None and b is not None:
        assert a <= b
    sync = sync_length(d)
    assert (sync is not None) == is_synchronizing(d)
    assert sync == subset_sync_length(d, full_set(n))
    if sync is not None:
        for P in members(full_set(n))[1:]:
            assert subset_sync_length(d, state_set([0, P])) <= n * (n - 1) // 2
