"""Explicit automaton families, each checked against its advertised properties.

Every generator builds its DFA and then verifies the synchronization length,
the alphabet size and the relevant class flags before returning.  A failed
check raises ``AssertionError``; bad parameters raise ``DfaError``.
"""
from itertools import permutations

from .core import Dfa, DfaError, format_dfa, parse_dfa
from .power import is_transitive, sync_length

FAMILIES = ("cerny", "star_semi_minimal", "maximum_3n5", "merge_chain",
            "star_interchange", "nontransitive_extremal")


def _map(n, moves):
    """Transformation fixing every state except the keys of ``moves``."""
    t = list(range(n))
    for a, b in moves.items():
        t[a] = b
    return tuple(t)


def _merge(n, a, b):
    return _map(n, {a: b})


def _swap(n, a, b):
    return _map(n, {a: b, b: a})


def _check(dfa, length=None, alphabet=None, **flags):
    from .classify import is_maximal, is_minimal, is_semi_minimal
    assert parse_dfa(format_dfa(dfa)) == dfa
    ell = sync_length(dfa)
    if length is not None:
        assert ell == length, "length %r, expected %r" % (ell, length)
    if alphabet is not None:
        assert len(dfa.symbols) == alphabet, "alphabet %d, expected %d" % (len(dfa.symbols), alphabet)
    tests = {"minimal": is_minimal, "transitive": is_transitive,
             "semi_minimal": lambda d: is_semi_minimal(d, ell),
             "maximal": lambda d: is_maximal(d, ell)}
    for name, want in flags.items():
        assert tests[name](dfa) == want, "%s is not %r" % (name, want)
    return dfa


def cerny(n):
    """The Cerny automaton: a cyclic shift and a symbol sending 0 to 1."""
    if n < 2:
        raise DfaError("cerny needs n >= 2")
    a = tuple((q + 1) % n for q in range(n))
    b = _merge(n, 0, 1)
    dfa = Dfa(n, (a, b))
    if n <= 8:
        _check(dfa, length=(n - 1) ** 2)
    return dfa


def cerny_word(n):
    """Symbol letters of the shortest synchronizing word b(a^{n-1}b)^{n-2}."""
    return "b" + ("a" * (n - 1) + "b") * (n - 2)


def _star_semi_symbols(n):
    # chain 0..n-3 merging leftwards, shaded pair n-2, n-1
    s1, s2 = n - 2, n - 1
    syms = [_merge(n, i, i - 1) for i in range(1, n - 2)]
    syms.append(_merge(n, s1, n - 3))
    syms.append(_map(n, {i: s1 for i in range(n - 2)}))
    e = {i: s2 for i in range(1, n - 2)}
    e.update({s1: s2, s2: s1})
    syms.append(_map(n, e))
    return Dfa(n, tuple(syms))


def star_semi_minimal(n):
    """Semi-minimal DFA with n symbols and synchronization length n (n >= 4).

    A chain of merges runs down to state 0, symbol ``d`` collects the chain
    into one shaded state and ``e`` sends the inner chain states to the other
    shaded state while swapping the shaded pair.
    """
    if n < 4:
        raise DfaError("star_semi_minimal needs n >= 4 (the pattern is not semi-minimal for 3 states)")
    return _check(_star_semi_symbols(n), length=n, alphabet=n, semi_minimal=True)


def maximum_3n5(n):
    """Maximal DFA of length 3n-5 with 3(n-1)!-1 symbols (3 <= n <= 6).

    With q = 0 and q' = 1: every permutation fixing q (except the identity),
    every permutation sending q to q', and every map onto Q minus q that
    merges q and q'.
    """
    if not 3 <= n <= 6:
        raise DfaError("maximum_3n5 supports 3 <= n <= 6")
    syms = set()
    for p in permutations(range(n)):
        if p[0] == 0 and list(p) != list(range(n)):
            syms.add(p)
        if p[0] == 1:
            syms.add(p)
    for p in permutations(range(1, n)):
        # bijection from Q \ {0} onto Q \ {0}, then 0 follows 1
        t = [0] * n
        for q, x in zip(range(1, n), p):
            t[q] = x
        t[0] = t[1]
        syms.add(tuple(t))
    fact = len(list(permutations(range(n - 1))))
    dfa = Dfa(n, tuple(syms))
    flags = {"maximal": True} if n <= 5 else {}
    return _check(dfa, length=3 * n - 5, alphabet=3 * fact - 1, **flags)


def _merge_chain_layout(n, steps):
    """Parents and kinds of the white states after ``steps`` moves.

    Shaded states 0, 1, 2 carry the swap (0 1), the merge 0 -> 1 and the swap
    (1 2).  White states 3..n-1 start as a path of swaps (w-1 w).  A move
    shifts the attachment of the last white state that is not yet attached to
    state 0 one step to the left; once all are attached to 0, a move turns the
    first remaining swap (w 0) into the merge w -> 0.
    """
    parents = list(range(2, n - 1))
    kinds = ["swap"] * (n - 3)
    for _ in range(steps):
        movable = [i for i, p in enumerate(parents) if p > 0]
        if movable:
            parents[movable[-1]] -= 1
            continue
        swaps = [i for i, k in enumerate(kinds) if k == "swap"]
        if not swaps:
            raise DfaError("no further moves")
        kinds[swaps[0]] = "merge"
    return parents, kinds


def merge_chain(n, target_length):
    """Minimal DFA with n symbols and the given length in n+1 .. n(n+1)/2 - 2."""
    if n < 3:
        raise DfaError("merge_chain needs n >= 3")
    top = n * (n + 1) // 2 - 2
    if not n + 1 <= target_length <= top:
        raise DfaError("target length must lie in %d..%d" % (n + 1, top))
    parents, kinds = _merge_chain_layout(n, top - target_length)
    syms = [_swap(n, 0, 1), _merge(n, 0, 1), _swap(n, 1, 2)]
    for w, p, k in zip(range(3, n), parents, kinds):
        syms.append(_swap(n, w, p) if k == "swap" else _merge(n, w, p))
    return _check(Dfa(n, tuple(syms)), length=target_length, alphabet=n, minimal=True)


def star_interchange(n, k):
    """Transitive minimal DFA with n symbols and length n + k (1 <= k <= n-3).

    State 0 is the star state, states 1..k hang on it by interchange
    symbols, states k+1..n-3 form a merge chain towards the star, and
    n-2, n-1 are the shaded pair.
    """
    if n < 4 or not 1 <= k <= n - 3:
        raise DfaError("star_interchange needs n >= 4 and 1 <= k <= n-3")
    s1, s2 = n - 2, n - 1
    chain = list(range(k + 1, n - 2))
    syms = []
    prev = 0
    for c in chain:
        syms.append(_merge(n, c, prev))
        prev = c
    syms.append(_merge(n, s1, prev))
    syms.append(_map(n, {i: s1 for i in [0] + chain}))
    e = {i: s2 for i in chain}
    e.update({s1: s2, s2: s1})
    syms.append(_map(n, e))
    syms.extend(_swap(n, 0, w) for w in range(1, k + 1))
    dfa = Dfa(n, tuple(syms))
    return _check(dfa, length=n + k, alphabet=n, minimal=True, transitive=True)


def nontransitive_f(n, m):
    return (m - 1) ** 2 + (n - m + 1) * (n - m) // 2


def nontransitive_extremal(n, m):
    """Nontransitive DFA with m core states reachable from everywhere.

    The core 0..m-1 carries the Cerny symbols; the tail m..n-1 is a path of
    swaps whose first state merges into the core.  Each tail state has to be
    walked into the core on its own, which costs 1 + 2 + ... + (n-m) steps.
    """
    if n < 2 or not 1 <= m <= n - 1:
        raise DfaError("nontransitive_extremal needs 1 <= m <= n-1")
    syms = []
    if m >= 2:
        syms.append(tuple([(q + 1) % m for q in range(m)] + list(range(m, n))))
        syms.append(_merge(n, 0, 1))
    syms.append(_merge(n, m, 0))
    syms.extend(_swap(n, j, j + 1) for j in range(m, n - 1))
    dfa = Dfa(n, tuple(syms))
    return _check(dfa, length=nontransitive_f(n, m), transitive=False)


def construct(family, n, **params):
    """Dispatch by family name (used by the command line)."""
    if family == "cerny":
        return cerny(n)
    if family == "star_semi_minimal":
        return star_semi_minimal(n)
    if family == "maximum_3n5":
        return maximum_3n5(n)
    if family == "merge_chain":
        return merge_chain(n, params["length"])
    if family == "star_interchange":
        return star_interchange(n, params["k"])
    if family == "nontransitive_extremal":
        return nontransitive_extremal(n, params["m"])
    raise DfaError("unknown family %r" % (family,))
