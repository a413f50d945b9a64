"""Minimal, semi-minimal and maximal synchronizing DFAs."""
from dataclasses import dataclass, field

import numpy as np

from ._kernels import greedy_fill, lengths_with
from .core import Dfa, DfaError, canonical_symbols, image_table
from .constructions import nontransitive_f
from .power import is_transitive, max_subset_sync_length, sync_length_tables


@dataclass
class ClassFlags:
    minimal: bool
    semi_minimal: bool
    maximal: bool
    tracked_nondecreasing_symbols: set = field(default_factory=set)


def _length(n, symbols):
    return sync_length_tables(n, [image_table(t) for t in symbols])


def removal_lengths(dfa):
    """Synchronization length after removing each symbol (None if it breaks)."""
    syms = dfa.symbols
    return [_length(dfa.n, syms[:i] + syms[i + 1:]) for i in range(len(syms))]


def is_minimal(dfa):
    return all(x is None for x in removal_lengths(dfa))


def is_semi_minimal(dfa, length=None):
    ell = _length(dfa.n, dfa.symbols) if length is None else length
    return all(x is None or x > ell for x in removal_lengths(dfa))


def _lengths_with(n, symbols, cands, chunk=8192):
    """Length of ``symbols`` plus each candidate index (-1 where it fails)."""
    from .search import subset_images, universe
    u = universe(n)
    base = subset_images(n, list(symbols))
    parts = [lengths_with(base, u.rows(cands[i:i + chunk])) for i in range(0, len(cands), chunk)]
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def nondecreasing_symbols(dfa, length=None, skip=()):
    """Absent symbols whose addition keeps the synchronization length."""
    from .search import universe
    n = dfa.n
    ell = _length(n, dfa.symbols) if length is None else length
    u = universe(n)
    present = set(dfa.symbols) | set(skip)
    cands = [i for i, t in enumerate(u.symbols) if t not in present]
    lens = _lengths_with(n, dfa.symbols, cands)
    want = -1 if ell is None else ell
    return [u.symbols[i] for i, e in zip(cands, lens.tolist()) if e == want]


def is_maximal(dfa, length=None, tracked=None):
    """True iff every new non-identity symbol strictly shortens synchronization.

    ``tracked`` holds symbols already known to keep the length for some
    superset of ``dfa``; such symbols keep it for ``dfa`` as well, so finding
    one among the absent symbols settles the question at once.
    """
    n = dfa.n
    ell = _length(n, dfa.symbols) if length is None else length
    present = set(dfa.symbols)
    tables = dfa.tables()
    if tracked:
        for t in tracked:
            if t not in present and sync_length_tables(n, tables + [image_table(t)]) == ell:
                return False
    keep = nondecreasing_symbols(dfa, ell)
    if keep and tracked is not None:
        tracked.update(keep)
    return not keep


def classify(dfa, tracked=None):
    ell = _length(dfa.n, dfa.symbols)
    if ell is None:
        raise DfaError("classify needs a synchronizing DFA")
    rem = removal_lengths(dfa)
    minimal = all(x is None for x in rem)
    semi = all(x is None or x > ell for x in rem)
    tracked = set() if tracked is None else tracked
    return ClassFlags(minimal, semi, is_maximal(dfa, ell, tracked), tracked)


def classify_tables(dfa, ell, wanted):
    """Flags needed by a search filter set (others left as None)."""
    flags = {}
    if "transitive" in wanted:
        flags["transitive"] = is_transitive(dfa)
    if "minimal" in wanted or "semi_minimal" in wanted:
        rem = removal_lengths(dfa)
        if "minimal" in wanted:
            flags["minimal"] = all(x is None for x in rem)
        if "semi_minimal" in wanted:
            flags["semi_minimal"] = all(x is None or x > ell for x in rem)
    if "maximal" in wanted:
        flags["maximal"] = is_maximal(dfa, ell)
    return flags


def saturate(dfa):
    """Add every candidate that keeps the length, in candidate order."""
    from .search import order_candidates
    n = dfa.n
    ell = _length(n, dfa.symbols)
    if ell is None:
        raise DfaError("saturate needs a synchronizing DFA")
    keep = nondecreasing_symbols(dfa, ell)
    tables = dfa.tables()
    syms = list(dfa.symbols)
    for t in order_candidates(n, dfa.symbols, keep):
        tb = image_table(t)
        if sync_length_tables(n, tables + [tb]) == ell:
            tables.append(tb)
            syms.append(t)
    return Dfa(n, tuple(syms))


def maximal_supersets(dfa):
    """Canonical forms of all maximal DFAs containing ``dfa`` with its length."""
    return sorted(_maximal_above(dfa))


def _maximal_above(dfa):
    """Maximal supersets of ``dfa`` with its length, as {canonical symbols: size}.

    At a node X with candidates P and forbidden symbols F, let K be the
    candidates that keep the length when added to X, and G a greedy
    saturation of X within K.  A maximal B above X avoiding F lies inside
    X + K and either equals G or contains a symbol of K outside G; branching
    on those symbols in turn, each branch forbidding the earlier ones, reaches
    every such B on exactly one branch.  Symbols compatible with a child are
    compatible with its parent, so candidates shrink along the way.  A
    forbidden symbol that keeps the length of X + K extends every B below
    the node, which then holds no maximal DFA.
    """
    from .search import universe
    n = dfa.n
    ell = _length(n, dfa.symbols)
    if ell is None:
        raise DfaError("needs a synchronizing DFA")
    u = universe(n)
    X0 = np.array(sorted(u.index[t] for t in dfa.symbols), dtype=np.int64)
    found = {}
    empty = np.empty(0, dtype=np.int64)
    stack = [(X0, np.setdiff1d(np.arange(len(u.symbols), dtype=np.int64), X0), empty)]
    while stack:
        X, P, F = stack.pop()
        rows = u.rows(X)
        free = P[lengths_with(rows, u.rows(P)) == ell]
        blocked = F[lengths_with(rows, u.rows(F)) == ell] if len(F) else empty
        U = np.concatenate([X, free])
        if len(blocked) and np.any(lengths_with(u.rows(U), u.rows(blocked)) == ell):
            continue
        keep = greedy_fill(rows, u.rows(free), ell)
        G = np.concatenate([X, free[keep]])
        if keep.all() or not len(blocked) or not np.any(lengths_with(u.rows(G), u.rows(blocked)) == ell):
            canon = canonical_symbols(n, tuple(u.symbols[i] for i in G.tolist()))
            found[canon] = len(canon)
        branch = free[~keep]
        for i, c in enumerate(branch.tolist()):
            rest = np.setdiff1d(free, branch[:i + 1])
            stack.append((np.append(X, c), rest, np.concatenate([blocked, branch[:i]])))
    return found


def extract_maximal(records, threshold=1):
    """Two-pass selection of the maximal DFAs in a complete corpus."""
    corpus = [r for r in records if r.sync_length >= threshold]
    marked = set()
    for r in corpus:
        d = r.dfa
        for t in d.symbols:
            sub = d.without(t)
            if sub.symbols and _length(d.n, sub.symbols) == r.sync_length:
                marked.add(canonical_symbols(d.n, sub.symbols))
    out = []
    for r in corpus:
        if canonical_symbols(r.dfa.n, r.dfa.symbols) in marked:
            continue
        if is_maximal(r.dfa, r.sync_length):
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# complete lists per state count

def minimal_dfas(n, min_length=1):
    """All minimal synchronizing DFAs (one per class) of length >= min_length."""
    from .search import SearchConfig, enumerate_all
    return enumerate_all(SearchConfig(n, min_length=min_length, filters={"minimal"}))


def semi_minimal_dfas(n, min_length=1, minimal=None):
    """All semi-minimal DFAs of length >= min_length, one record per class.

    Every semi-minimal DFA X contains a minimal DFA M, and every Y with
    M <= Y < X synchronizes strictly slower than X, which has at most
    len(X) symbols.  So X is reached from M by adding symbols one at a time
    while the length stays above the number of symbols.
    """
    from .search import SearchRecord, universe
    u = universe(n)
    if minimal is None:
        minimal = minimal_dfas(n, min_length)
    found = {}
    for r in minimal:
        base = [u.index[t] for t in r.dfa.symbols]
        inside = set(base)
        stack = [(r.sync_length, -1, base)]
        while stack:
            ell, last, X = stack.pop()
            if ell >= len(X) and ell >= min_length:
                canon = canonical_symbols(n, tuple(u.symbols[i] for i in X))
                if canon not in found:
                    d = Dfa(n, canon)
                    if is_semi_minimal(d, ell):
                        found[canon] = SearchRecord(d, ell, minimal=is_minimal(d), semi_minimal=True)
            if ell < len(X) + 2 or ell <= min_length:
                continue
            cands = np.arange(last + 1, len(u.symbols), dtype=np.int64)
            lens = lengths_with(u.rows(X), u.rows(cands))
            for s, e2 in zip(cands.tolist(), lens.tolist()):
                if s not in inside and e2 >= len(X) + 1 and e2 >= min_length:
                    stack.append((e2, s, X + [s]))
    return sorted(found.values(), key=SearchRecord.sort_key)


def maximal_dfas(n, seeds):
    """Maximal DFAs above the given semi-minimal seeds, with alphabet intervals.

    Returns ``(records, intervals)`` where ``intervals`` maps each length to
    the pairs ``(|A|, |B|)`` of a seed (or a semi-minimal core of a found B)
    and a maximal superset of it of the same length.
    """
    from .search import SearchRecord
    found = {}
    intervals = {}
    for r in seeds:
        ell = r.sync_length
        above = _maximal_above(r.dfa)
        pairs = intervals.setdefault(ell, set())
        pairs.update((len(r.dfa.symbols), size) for size in set(above.values()))
        for canon in above:
            if canon not in found:
                d = Dfa(n, canon)
                found[canon] = SearchRecord(d, ell, maximal=True, minimal=is_minimal(d),
                                            semi_minimal=is_semi_minimal(d, ell))
                pairs.add((len(_semi_core(d, ell)), len(canon)))
    return sorted(found.values(), key=SearchRecord.sort_key), intervals


def _semi_core(dfa, ell):
    """Drop symbols (in order) while the length stays ``ell``."""
    syms = list(dfa.symbols)
    i = 0
    while i < len(syms):
        rest = syms[:i] + syms[i + 1:]
        if rest and _length(dfa.n, rest) == ell:
            syms = rest
        else:
            i += 1
    return tuple(syms)


def range_table(n, min_length=1, skip_max=(), analytic=True):
    """Alphabet ranges of all classes of synchronizing DFAs with n states.

    Lengths 1 and 2 are filled in by reasoning: length 1 needs a constant
    symbol and the maximal DFA holds every non-identity symbol; length 2 has
    no constant symbol and the maximal DFA holds all other symbols.  Lengths
    in ``skip_max`` keep only their min and smin columns.  With
    ``analytic=False`` lengths 1 and 2 are searched like the others.
    """
    total = n ** n - 1
    mins = minimal_dfas(n, min_length)
    semis = semi_minimal_dfas(n, min_length, mins)
    table = RangeTable()
    for r in mins:
        table.add(r.sync_length, "min", len(r.dfa.symbols))
    for r in semis:
        table.add(r.sync_length, "smin", len(r.dfa.symbols))
    heavy = [r for r in semis if (r.sync_length > 2 or not analytic) and r.sync_length not in skip_max]
    maxes, intervals = maximal_dfas(n, heavy)
    for r in maxes:
        table.add(r.sync_length, "max", r.alphabet)
        if r.minimal:
            table.add(r.sync_length, "max_min", r.alphabet)
        if r.semi_minimal:
            table.add(r.sync_length, "max_smin", r.alphabet)
    for ell, pairs in intervals.items():
        for a, b in pairs:
            for k in range(a, b + 1):
                table.add(ell, "all", k)
    if analytic and min_length <= 1:
        table.add(1, "max", total)
        for k in range(1, total + 1):
            table.add(1, "all", k)
    if analytic and min_length <= 2 and n >= 3:
        table.add(2, "max", total - n)
        for k in range(1, total - n + 1):
            table.add(2, "all", k)
    return table


# ---------------------------------------------------------------------------
# alphabet ranges

COLUMNS = ("all", "min", "smin", "max", "max_min", "max_smin")


def render_range(values):
    """Sorted integers as runs, e.g. ``2--15, 17, 21``."""
    vals = sorted(set(values))
    parts = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
            j += 1
        parts.append(str(vals[i]) if i == j else "%d--%d" % (vals[i], vals[j]))
        i = j + 1
    return ", ".join(parts)


def parse_range(text):
    out = set()
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "--" in part:
            a, b = part.split("--")
            out.update(range(int(a), int(b) + 1))
        else:
            out.add(int(part))
    return out


@dataclass
class RangeTable:
    rows: dict = field(default_factory=dict)

    def add(self, length, column, alphabet):
        self.rows.setdefault(length, {c: set() for c in COLUMNS})[column].add(alphabet)

    def column(self, length, column):
        return self.rows.get(length, {}).get(column, set())

    def matches(self, expected):
        """Cell differences against ``{length: {column: range text}}``."""
        diffs = []
        for length, cols in sorted(expected.items(), reverse=True):
            for col, text in cols.items():
                want = parse_range(text)
                got = self.column(length, col)
                if got != want:
                    diffs.append((length, col, render_range(want), render_range(got)))
        return diffs

    def render(self):
        lines = ["length | " + " | ".join(COLUMNS)]
        for length in sorted(self.rows, reverse=True):
            cells = [render_range(self.rows[length][c]) for c in COLUMNS]
            lines.append("%d | %s" % (length, " | ".join(cells)))
        return "\n".join(lines) + "\n"


def alphabet_ranges(records):
    table = RangeTable()
    for r in records:
        ln, a = r.length, r.alphabet
        table.add(ln, "all", a)
        if r.minimal:
            table.add(ln, "min", a)
        if r.semi_minimal:
            table.add(ln, "smin", a)
        if r.maximal:
            table.add(ln, "max", a)
            if r.minimal:
                table.add(ln, "max_min", a)
            if r.semi_minimal:
                table.add(ln, "max_smin", a)
    return table


# ---------------------------------------------------------------------------

def nontransitive_max_length(n):
    """Largest length of a nontransitive synchronizing DFA on n states.

    The value is max f(m) over the size m of the part reachable from every
    state; f is convex, so it equals max{n(n-1)/2, (n-2)^2 + 1}.
    """
    if n < 2:
        raise DfaError("n must be >= 2")
    return max(nontransitive_f(n, m) for m in range(1, n))


def subset_achievers(n, s, exhaustive_limit=5, witness=None):
    """Largest worst-case s-subset length and the counts of DFAs reaching it.

    Returns ``(length, table, transitive_minimal_table)``.  The search runs at
    the threshold set by the Cerny automaton, so it finds every DFA at least
    as slow.  Beyond ``exhaustive_limit`` states only the witness (default:
    the Cerny automaton) is evaluated and the tables hold that single DFA.
    """
    from .constructions import cerny
    from .search import CountTable, SearchConfig, enumerate_all
    if not 2 <= s <= n:
        raise DfaError("need 2 <= s <= n")
    if witness is None:
        witness = cerny(n)
    lower = max_subset_sync_length(witness, s)
    if n > exhaustive_limit:
        t = CountTable()
        t.add(len(witness.symbols), lower)
        tm = CountTable()
        if is_transitive(witness) and is_minimal(witness):
            tm.add(len(witness.symbols), lower)
        return lower, t, tm
    recs = enumerate_all(SearchConfig(n, min_length=lower, subset_size=s))
    length = max(r.subset_length for r in recs)
    table = CountTable()
    tm = CountTable()
    for r in recs:
        if r.subset_length == length:
            table.add(r.alphabet, length)
            if is_transitive(r.dfa) and is_minimal(r.dfa):
                tm.add(r.alphabet, length)
    return length, table, tm
