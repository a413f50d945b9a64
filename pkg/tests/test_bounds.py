import random
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slowsync._kernels import bounds_kernel
from slowsync.bounds import (CapacityError, FranklPinInstance, all_pairs, bound_L, bound_Lp,
                             bound_Lpp, bounds_report, fpks_improvements, frankl_pin_exact,
                             frankl_pin_greedy, improved_m_k, pair_cap)
from slowsync.constructions import cerny
from slowsync.core import Dfa, DfaError, image_table, non_identity_transformations
from slowsync.power import PowerGraph, irreducible_scc, sync_length

from conftest import extension_pair, random_dfa

EMPTY3 = Dfa(3)
CYCLE3 = Dfa(3, ((1, 2, 0),))
VARIANTS = ("L", "Lp", "Lpp")


def all_values(rep):
    return [rep.value(v, imp) for v in VARIANTS for imp in (False, True)]


def test_empty_dfa_hand_values():
    rep = bounds_report(EMPTY3)
    assert (rep.sizeS, rep.m, rep.M, rep.c) == (3, 0, 0, 1)
    assert rep.m_k == {2: 3, 3: 1} and rep.l_k == {2: 0, 3: 0}
    assert (rep.L, rep.Lp, rep.Lpp) == (4, 4, 4)
    assert rep.Lpp_k[2] == 3 and rep.Lpp_k[3] == 4


def test_cycle_dfa():
    assert bound_L(CYCLE3) == 4
    assert irreducible_scc(CYCLE3, 2).improved_diameters == [2]
    assert improved_m_k(CYCLE3, 2) == 3


def test_synchronizing_base_collapses_to_m():
    d = cerny(4)
    assert bound_L(d) == bound_Lp(d) == bound_Lpp(d) == 9
    assert bound_Lpp(d, improved=True) == 9


def test_pair_cap_level_two(rng):
    for _ in range(50):
        n = rng.randint(2, 5)
        d = random_dfa(rng, n, rng.randint(0, 3))
        g = PowerGraph.of(d)
        red = g.reducible()
        rho2 = [P for P in g.pairs if red[P] is not None]
        assert pair_cap(d, 2) == comb(n, 2) - len(rho2)
    with pytest.raises(DfaError):
        pair_cap(cerny(3), 1)


def test_improved_m_k_clamps_when_all_reducible():
    d = cerny(4)
    rep = bounds_report(d)
    for k in range(2, 5):
        assert rep.improved_m_k[k] == 0 <= rep.m_k[k]
    assert fpks_improvements(d, rep) is rep


def test_pair_in_every_member_costs_nothing():
    # two irreducible 3-sets {0,1,2} <-> {0,1,3} share the pair {0,1}
    d = Dfa(4, ((0, 1, 3, 2),))
    g = PowerGraph.of(d)
    comp = next(c for c in g.components(3) if 0b0111 in c)
    assert sorted(comp) == [0b0111, 0b1011]
    assert g.pair_distances(0b0111, comp)[0b0011] == 0
    assert g.improved_diameter(comp) <= g.diameter(comp)


def test_frankl_pin_examples():
    for n in range(2, 6):
        full = FranklPinInstance(all_pairs(n), all_pairs(n))
        assert frankl_pin_greedy(full) == frankl_pin_exact(full) == comb(n, 2)
    two = FranklPinInstance([0b011, 0b110], [0b011, 0b110])
    assert frankl_pin_greedy(two) == frankl_pin_exact(two) == 2
    assert frankl_pin_greedy(FranklPinInstance([], all_pairs(3))) == 0


def test_frankl_pin_guards():
    with pytest.raises(CapacityError):
        frankl_pin_exact(FranklPinInstance(all_pairs(6), all_pairs(6)))
    with pytest.raises(DfaError):
        FranklPinInstance([0b011, 0b111], [])
    with pytest.raises(DfaError):
        FranklPinInstance([0b011], [0b111])


def random_fp_instance(rng):
    n = rng.randint(3, 6)
    k = rng.randint(2, min(4, n))
    ksets = [m for m in range(1 << n) if bin(m).count("1") == k]
    sigma = rng.sample(ksets, min(len(ksets), rng.randint(0, 10)))
    pairs = all_pairs(n)
    pi = rng.sample(pairs, rng.randint(0, len(pairs)))
    return FranklPinInstance(sigma, pi)


def test_greedy_below_exact(rng):
    for _ in range(300):
        inst = random_fp_instance(rng)
        assert frankl_pin_greedy(inst) <= frankl_pin_exact(inst)


def check_pair(A, B):
    rep = bounds_report(A)
    ell = sync_length(B)
    for v in all_values(rep):
        assert ell <= v, (A, B, all_values(rep))
    for v in VARIANTS:
        assert rep.value(v, True) <= rep.value(v, False)
    assert rep.Lp <= rep.L


def test_soundness_random_extensions(rng):
    for _ in range(1500):
        check_pair(*extension_pair(rng, rng.randint(2, 6)))


def test_soundness_exhaustive_n3():
    syms = non_identity_transformations(3)
    bases = [Dfa(3)] + [Dfa(3, (t,)) for t in syms]
    for A in bases:
        rep = bounds_report(A)
        for extra in syms:
            if extra in A.symbols:
                continue
            B = A.with_symbol(extra)
            ell = sync_length(B)
            if ell is not None:
                assert ell <= min(all_values(rep))
        for pair in combinations(syms, 2):
            if not A.symbols and sync_length(Dfa(3, pair)) is not None:
                assert sync_length(Dfa(3, pair)) <= min(all_values(rep))


def test_bounds_dominate_own_length(rng):
    for _ in range(300):
        d = random_dfa(rng, rng.randint(2, 5), rng.randint(1, 4))
        ell = sync_length(d)
        if ell is not None:
            assert min(all_values(bounds_report(d))) >= ell


def kernel_values(d):
    n = d.n
    tabs = np.array([image_table(t) for t in d.symbols], dtype=np.int64).reshape(len(d.symbols), 1 << n)
    return bounds_kernel(n, tabs)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 6), st.integers(0, 4), st.randoms(use_true_random=False))
def test_kernel_matches_reference(n, k, r):
    d = random_dfa(random.Random(r.random()), n, k)
    rep = bounds_report(d)
    summary, plain_k, imp_k = kernel_values(d)
    assert list(summary) == [rep.L, rep.Lp, rep.Lpp, rep.L_improved, rep.Lp_improved, rep.Lpp_improved]
    for s in range(2, n + 1):
        assert plain_k[s] == rep.Lpp_k[s] and imp_k[s] == rep.Lpp_k_improved[s]
