"""Transformations, basic DFAs and canonical forms up to state relabeling.

A transformation is stored as a tuple of images, ``t[q]`` being the target of
state ``q``.  Sets of states are plain integers used as bit sets.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

MAX_STATES = 16


class DfaError(ValueError):
    """Invalid automaton data or arguments."""


class ParseError(DfaError):
    pass


class HeaderError(ParseError):
    pass


class RangeError(ParseError):
    pass


class DuplicateSymbolError(ParseError):
    pass


class IdentitySymbolError(ParseError):
    pass


# ---------------------------------------------------------------------------
# transformations

def identity(n):
    return tuple(range(n))


def is_identity(t):
    return all(x == q for q, x in enumerate(t))


def is_constant(t):
    return len(set(t)) == 1


def is_permutation(t):
    return len(set(t)) == len(t)


def encode(t):
    """Integer code whose order agrees with the lexicographic order of images."""
    n = len(t)
    c = 0
    for x in t:
        c = c * n + x
    return c


def decode(code, n):
    out = [0] * n
    for q in range(n - 1, -1, -1):
        code, out[q] = divmod(code, n)
    return tuple(out)


def compose(s, t):
    """First ``s``, then ``t`` (states act on the right: q(st) = (qs)t)."""
    return tuple(t[x] for x in s)


def invert(p):
    inv = [0] * len(p)
    for q, x in enumerate(p):
        inv[x] = q
    return tuple(inv)


def conjugate(t, p):
    """Relabel the states of ``t`` by the permutation ``p``.

    The result ``r`` satisfies ``r[p[q]] == p[t[q]]`` for every state.
    """
    if len(t) != len(p):
        raise DfaError("size mismatch: %d vs %d" % (len(t), len(p)))
    r = [0] * len(t)
    for q, x in enumerate(t):
        r[p[q]] = p[x]
    return tuple(r)


def transposition(n, i, j):
    p = list(range(n))
    p[i], p[j] = j, i
    return tuple(p)


def all_transformations(n):
    """All n**n transformations in lexicographic order."""
    return [decode(c, n) for c in range(n ** n)]


def non_identity_transformations(n):
    ident = identity(n)
    return [t for t in all_transformations(n) if t != ident]


# ---------------------------------------------------------------------------
# state sets

def full_set(n):
    return (1 << n) - 1


def state_set(states):
    m = 0
    for q in states:
        m |= 1 << q
    return m


def members(mask):
    out = []
    q = 0
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return out


def size(mask):
    return bin(mask).count("1")


@lru_cache(maxsize=None)
def image_table(t):
    """Images of all 2**n subsets under ``t``; ``table[S]`` is ``S t``."""
    n = len(t)
    table = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        table[m] = table[m ^ low] | (1 << t[low.bit_length() - 1])
    return table


def apply_symbol(mask, t):
    return image_table(t)[mask]


# ---------------------------------------------------------------------------
# DFAs

@dataclass(frozen=True)
class Dfa:
    """A basic DFA: distinct non-identity symbols kept in lexicographic order."""

    n: int
    symbols: tuple = ()

    def __post_init__(self):
        if not 1 <= self.n <= MAX_STATES:
            raise DfaError("state count %d out of range 1..%d" % (self.n, MAX_STATES))
        syms = []
        for t in self.symbols:
            t = tuple(int(x) for x in t)
            if len(t) != self.n:
                raise DfaError("symbol %r has length %d, expected %d" % (t, len(t), self.n))
            if any(not 0 <= x < self.n for x in t):
                raise RangeError("symbol %r has an entry out of range" % (t,))
            syms.append(t)
        ordered = tuple(sorted(set(syms)))
        if len(ordered) != len(syms):
            raise DuplicateSymbolError("duplicate symbol")
        if any(is_identity(t) for t in ordered):
            raise IdentitySymbolError("identity symbol")
        object.__setattr__(self, "symbols", ordered)

    @property
    def alphabet_size(self):
        return len(self.symbols)

    def tables(self):
        return [image_table(t) for t in self.symbols]

    def with_symbol(self, t):
        return Dfa(self.n, self.symbols + (tuple(t),))

    def without(self, t):
        t = tuple(t)
        return Dfa(self.n, tuple(s for s in self.symbols if s != t))

    def codes(self):
        return [encode(t) for t in self.symbols]

    def __str__(self):
        return format_dfa(self)


def from_symbols(n, symbols):
    """Build a Dfa, silently dropping identities and duplicates."""
    ident = identity(n)
    return Dfa(n, tuple({tuple(t) for t in symbols if tuple(t) != ident}))


def apply(mask, word, dfa):
    """Image of the state set ``mask`` under a word of symbol indices."""
    k = len(dfa.symbols)
    for x in word:
        if not 0 <= x < k:
            raise DfaError("symbol index %r out of range" % (x,))
        mask = image_table(dfa.symbols[x])[mask]
    return mask


def conjugate_all(dfa, p):
    return Dfa(dfa.n, tuple(conjugate(t, p) for t in dfa.symbols))


@lru_cache(maxsize=None)
def _perms(n):
    return list(permutations(range(n)))


def canonical_symbols(n, symbols):
    """Least sorted symbol tuple over all simultaneous relabelings."""
    best = None
    for p in _perms(n):
        cand = []
        for t in symbols:
            r = [0] * n
            for q, x in enumerate(t):
                r[p[q]] = p[x]
            cand.append(tuple(r))
        cand.sort()
        cand = tuple(cand)
        if best is None or cand < best:
            best = cand
    return best if best is not None else ()


def canonical_form(dfa):
    return Dfa(dfa.n, canonical_symbols(dfa.n, dfa.symbols))


def class_minimum(t):
    """Least conjugate of a single transformation."""
    return min(conjugate(t, p) for p in _perms(len(t)))


# ---------------------------------------------------------------------------
# Johnson-Trotter conjugation tables

def jt_swaps(n):
    """Positions ``i`` of the adjacent swaps (i, i+1) of the Johnson-Trotter order.

    Starting from the identity arrangement, applying the n!-1 swaps in turn
    visits every arrangement exactly once.
    """
    perm = list(range(n))
    direction = [-1] * n
    pos = list(range(n))
    swaps = []
    while True:
        mobile = -1
        for v in range(n - 1, -1, -1):
            j = pos[v] + direction[v]
            if 0 <= j < n and perm[j] < v:
                mobile = v
                break
        if mobile < 0:
            return swaps
        i = pos[mobile]
        j = i + direction[mobile]
        other = perm[j]
        perm[i], perm[j] = other, mobile
        pos[mobile], pos[other] = j, i
        swaps.append(min(i, j))
        for v in range(mobile + 1, n):
            direction[v] = -direction[v]


class JtTable:
    """Conjugation of every transformation code by each adjacent transposition."""

    def __init__(self, n):
        if not 2 <= n <= 8:
            raise DfaError("JtTable supports 2 <= n <= 8")
        self.n = n
        codes = np.arange(n ** n, dtype=np.int64)
        digits = np.empty((n, n ** n), dtype=np.int64)
        rest = codes.copy()
        for q in range(n - 1, -1, -1):
            digits[q] = rest % n
            rest //= n
        weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
        rows = []
        for i in range(n - 1):
            p = np.arange(n)
            p[i], p[i + 1] = i + 1, i
            conj = np.empty_like(digits)
            for q in range(n):
                conj[p[q]] = p[digits[q]]
            rows.append((weights[:, None] * conj).sum(axis=0).astype(np.int32))
        self.rows = np.stack(rows)
        self.swaps = jt_swaps(n)
        self._lists = [row.tolist() for row in self.rows]

    def __len__(self):
        return int(self.rows.size)

    def step(self, code, i):
        return self._lists[i][code]


@lru_cache(maxsize=None)
def jt_table(n):
    return JtTable(n)


def jt_scan_codes(n, codes, table):
    cur = list(codes)
    best = tuple(sorted(cur))
    lists = table._lists
    for i in table.swaps:
        row = lists[i]
        cur = [row[c] for c in cur]
        cand = tuple(sorted(cur))
        if cand < best:
            best = cand
    return best


def jt_scan(dfa, table=None):
    """Canonical form computed by walking the Johnson-Trotter order."""
    if table is None:
        table = jt_table(dfa.n)
    if table.n != dfa.n:
        raise DfaError("table built for n=%d, dfa has n=%d" % (table.n, dfa.n))
    best = jt_scan_codes(dfa.n, dfa.codes(), table)
    return Dfa(dfa.n, tuple(decode(c, dfa.n) for c in best))


# ---------------------------------------------------------------------------
# text format

def parse_dfa(text):
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise HeaderError("header must be 'n m'")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
    except ValueError:
        raise HeaderError("header must be two integers") from None
    if not 1 <= n <= MAX_STATES or m < 0:
        raise HeaderError("bad header values %d %d" % (n, m))
    if len(lines) - 1 != m:
        raise HeaderError("expected %d symbol lines, found %d" % (m, len(lines) - 1))
    syms = []
    for ln in lines[1:]:
        if len(ln) != n:
            raise RangeError("symbol line has %d entries, expected %d" % (len(ln), n))
        try:
            t = tuple(int(x) for x in ln)
        except ValueError:
            raise RangeError("non-integer entry in %r" % (ln,)) from None
        if any(not 0 <= x < n for x in t):
            raise RangeError("entry out of range in %r" % (t,))
        if is_identity(t):
            raise IdentitySymbolError("identity symbol %r" % (t,))
        if t in syms:
            raise DuplicateSymbolError("duplicate symbol %r" % (t,))
        syms.append(t)
    return Dfa(n, tuple(syms))


def format_dfa(dfa):
    out = ["%d %d" % (dfa.n, len(dfa.symbols))]
    out += [" ".join(map(str, t)) for t in dfa.symbols]
    return "\n".join(out) + "\n"
