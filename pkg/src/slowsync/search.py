"""Depth-first enumeration of basic DFAs up to state relabeling.

Symbol sets are generated in increasing symbol order, so each set has one
generation path.  The first symbol is restricted to the least member of its
conjugacy class; the remaining symmetry is removed by canonical forms.
"""
import math
import zlib
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from ._kernels import (bounds_kernel, lengths_with, prefix_is_least, private_children,
                       subset_lengths, subset_lengths_with)
from .core import (Dfa, DfaError, canonical_symbols, decode, encode, identity, image_table,
                   jt_table)
from .power import sync_length_tables

FILTERS = ("transitive", "minimal", "semi_minimal", "maximal")
BOUNDS = ("L", "Lp", "Lpp")


@dataclass(frozen=True)
class SearchConfig:
    n: int
    min_length: int = 1
    bound: str | None = "Lpp"
    improved: bool = True
    max_alphabet: int | None = None
    filters: frozenset = frozenset()
    shard_count: int = 1
    shard_index: int = 0
    subset_size: int | None = None
    sort_candidates: bool = False

    def __post_init__(self):
        object.__setattr__(self, "filters", frozenset(self.filters))
        bad = set(self.filters) - set(FILTERS)
        if bad:
            raise DfaError("unknown filters: %s" % ", ".join(sorted(bad)))
        if self.bound is not None and self.bound not in BOUNDS:
            raise DfaError("unknown bound variant %r" % (self.bound,))
        if self.shard_count < 1 or not 0 <= self.shard_index < self.shard_count:
            raise DfaError("invalid shard %d/%d" % (self.shard_index, self.shard_count))
        if self.min_length < 1:
            raise DfaError("min_length must be >= 1")
        if not 2 <= self.n <= 8:
            raise DfaError("enumeration supports 2 <= n <= 8")
        if self.subset_size is not None and not 2 <= self.subset_size <= self.n:
            raise DfaError("subset size must lie in 2..n")


@dataclass(frozen=True)
class SearchRecord:
    dfa: Dfa
    sync_length: int
    transitive: bool | None = None
    minimal: bool | None = None
    semi_minimal: bool | None = None
    maximal: bool | None = None
    subset_size: int | None = None
    subset_length: int | None = None

    @property
    def alphabet(self):
        return len(self.dfa.symbols)

    @property
    def length(self):
        """The length the record is tabulated under (subset length in subset mode)."""
        return self.subset_length if self.subset_size is not None else self.sync_length

    def sort_key(self):
        return (self.dfa.n, -self.length, self.alphabet, self.dfa.symbols)


@dataclass
class CountTable:
    counts: Counter = field(default_factory=Counter)

    def add(self, alphabet, length, k=1):
        self.counts[(alphabet, length)] += k

    def merge(self, other):
        out = CountTable(Counter(self.counts))
        out.counts.update(other.counts)
        return out

    def totals(self):
        tot = Counter()
        for (_, length), c in self.counts.items():
            tot[length] += c
        return dict(tot)

    def by_alphabet(self, length):
        return {a: c for (a, ln), c in self.counts.items() if ln == length and c}

    def total(self):
        return sum(self.counts.values())

    def lengths(self):
        return sorted({ln for (_, ln) in self.counts}, reverse=True)

    def alphabets(self):
        return sorted({a for (a, _) in self.counts})

    def __eq__(self, other):
        a = {k: v for k, v in self.counts.items() if v}
        b = {k: v for k, v in other.counts.items() if v}
        return a == b


def count(records):
    table = CountTable()
    for r in records:
        table.add(r.alphabet, r.length)
    return table


# ---------------------------------------------------------------------------
# per-n symbol universe

class Universe:
    """All non-identity transformations of n states with precomputed tables."""

    def __init__(self, n):
        self.n = n
        ident = identity(n)
        self.symbols = [decode(c, n) for c in range(n ** n) if decode(c, n) != ident]
        self.index = {t: i for i, t in enumerate(self.symbols)}
        self.pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
        self.pair_index = {P: i for i, P in enumerate(self.pairs)}
        self._tables = {}
        self._pairmaps = {}
        self.class_min = self._class_minima()
        self._pm_array = None
        self._tab_array = None
        self._codes = None

    def table_array(self):
        """Subset image tables of all symbols (symbols x 2**n)."""
        if self._tab_array is None:
            self._tab_array = np.array([self.table(i) for i in range(len(self.symbols))],
                                       dtype=np.int64).reshape(len(self.symbols), 1 << self.n)
        return self._tab_array

    def rows(self, idx):
        """Subset image tables of the symbols with indices ``idx`` (len(idx) x 2**n)."""
        idx = np.asarray(idx, dtype=np.int64)
        if self.n <= 6:
            return self.table_array()[idx]
        return subset_images(self.n, [self.symbols[i] for i in idx.tolist()])

    def codes(self):
        """Transformation code of every symbol index (increasing)."""
        if self._codes is None:
            self._codes = np.array([encode(t) for t in self.symbols], dtype=np.int64)
        return self._codes

    def pairmap_array(self):
        """All pair maps as one int array (symbols x pairs)."""
        if self._pm_array is None:
            self._pm_array = np.array([self.pairmap(i) for i in range(len(self.symbols))],
                                      dtype=np.int64).reshape(len(self.symbols), len(self.pairs))
        return self._pm_array

    def table(self, i):
        tb = self._tables.get(i)
        if tb is None:
            tb = self._tables[i] = image_table(self.symbols[i])
        return tb

    def pairmap(self, i):
        """Image pair index of every pair, or -1 where the symbol merges it."""
        pm = self._pairmaps.get(i)
        if pm is None:
            t = self.symbols[i]
            pm = []
            for p, q in self.pairs:
                a, b = t[p], t[q]
                pm.append(-1 if a == b else self.pair_index[(min(a, b), max(a, b))])
            self._pairmaps[i] = pm
        return pm

    def _class_minima(self):
        n = self.n
        table = jt_table(n)
        label = np.arange(n ** n, dtype=np.int64)
        while True:
            new = label.copy()
            for row in table.rows:
                new = np.minimum(new, new[row])
            if np.array_equal(new, label):
                break
            label = new
        codes = np.nonzero(label == np.arange(n ** n))[0]
        idc = sum(q * n ** (n - 1 - q) for q in range(n))
        out = []
        for c in codes.tolist():
            if c != idc:
                out.append(self.index[decode(c, n)])
        return sorted(out)


def subset_images(n, symbols):
    """Image table over all subsets for each symbol, computed with numpy."""
    T = np.array(symbols, dtype=np.int64).reshape(-1, n)
    bits = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
    out = np.zeros((len(T), 1 << n), dtype=np.int64)
    for q in range(n):
        out |= bits[:, q][None, :] * (np.int64(1) << T[:, q])[:, None]
    return out


@lru_cache(maxsize=None)
def universe(n):
    return Universe(n)


def pair_closure(pms, npairs):
    """Reachability among pairs (each including itself) and the mergeable pairs."""
    succ = [0] * npairs
    direct = 0
    for pm in pms:
        for P in range(npairs):
            y = pm[P]
            if y < 0:
                direct |= 1 << P
            else:
                succ[P] |= 1 << y
    reach = []
    for P in range(npairs):
        r = 1 << P
        todo = succ[P] & ~r
        r |= todo
        while todo:
            low = todo & -todo
            todo ^= low
            new = succ[low.bit_length() - 1] & ~r
            r |= new
            todo |= new
        reach.append(r)
    merge = 0
    for P in range(npairs):
        if reach[P] & direct:
            merge |= 1 << P
    return reach, merge


def has_private_pair(pm_x, rest_pms, npairs):
    """True iff some pair that ``rest`` cannot merge is pushed out of its closure by x.

    Every symbol of a minimal synchronizing DFA has this property relative to
    the other symbols, and it persists when symbols are removed, so sets
    failing it for some member can be pruned from a search for minimal DFAs.
    """
    reach, merge = pair_closure(rest_pms, npairs)
    for P in range(npairs):
        if not merge >> P & 1:
            y = pm_x[P]
            if y < 0 or not reach[P] >> y & 1:
                return True
    return False


def all_private(pms, npairs):
    for j in range(len(pms)):
        rest = pms[:j] + pms[j + 1:]
        if not has_private_pair(pms[j], rest, npairs):
            return False
    return True


def mergeable_pair_count(pms, npairs):
    return bin(pair_closure(pms, npairs)[1]).count("1")


def order_candidates(n, chosen, candidates):
    """Heuristic visiting order for extension candidates (symbol tuples).

    Non-synchronizing ``chosen``: ascending number of mergeable pairs after
    adding the candidate.  Synchronizing: ascending synchronization length.
    Ties keep symbol order.
    """
    u = universe(n)
    idx = [u.index[tuple(t)] for t in chosen]
    tables = [u.table(i) for i in idx]
    sync = sync_length_tables(n, tables) is not None
    npairs = len(u.pairs)
    pms = [u.pairmap(i) for i in idx]

    def key(t):
        i = u.index[tuple(t)]
        if sync:
            return (sync_length_tables(n, tables + [u.table(i)]), t)
        return (mergeable_pair_count(pms + [u.pairmap(i)], npairs), t)

    return sorted((tuple(t) for t in candidates), key=key)


# ---------------------------------------------------------------------------

def _shard_depth(k):
    return 0 if k <= 1 else max(1, math.ceil(math.log2(k)))


def _owner(prefix, config):
    if config.shard_count == 1:
        return 0
    d = _shard_depth(config.shard_count)
    key = ",".join(map(str, prefix[:d])).encode()
    return zlib.crc32(key) % config.shard_count


def shard_split(config):
    return [replace(config, shard_index=i) for i in range(config.shard_count)]


class _Search:
    def __init__(self, config, resume_after=None, on_checkpoint=None, stats=None, seen=None):
        self.cfg = config
        self.u = universe(config.n)
        self.npairs = len(self.u.pairs)
        self.seen = set() if seen is None else seen
        self.resume_after = resume_after
        self.on_checkpoint = on_checkpoint
        self.stats = stats if stats is not None else Counter()
        f = config.filters
        self.minimal = "minimal" in f
        self.semi = "semi_minimal" in f or self.minimal
        self.full = (1 << config.n) - 1
        self.depth = _shard_depth(config.shard_count)
        jt = jt_table(config.n)
        self.jt_rows = jt.rows
        self.jt_swaps = np.asarray(jt.swaps, dtype=np.int64)
        self.codes = self.u.codes()

    def run(self):
        for first in self.u.class_min:
            if self.resume_after is not None and first <= self.resume_after:
                continue
            yield from self._visit([first])
            if self.on_checkpoint is not None:
                self.on_checkpoint(first)

    def _bound(self, X):
        cfg = self.cfg
        summary, plain_k, imp_k = bounds_kernel(cfg.n, self.u.rows(X))
        if cfg.subset_size is not None:
            return int((imp_k if cfg.improved else plain_k)[cfg.subset_size])
        return int(summary[BOUNDS.index(cfg.bound) + (3 if cfg.improved else 0)])

    def _lengths(self, X):
        cfg = self.cfg
        if cfg.subset_size is not None:
            ell, score = subset_lengths(self.u.rows(np.asarray(X, dtype=np.int64)), cfg.subset_size)
            return (None, None) if ell < 0 else (int(ell), int(score))
        ell = sync_length_tables(cfg.n, [self.u.table(i) for i in X])
        return ell, ell

    def _child_lengths(self, X, cands):
        """Lengths (or -1) and scores of X plus each candidate, in one kernel call."""
        rows = self.u.rows(np.asarray(X, dtype=np.int64))
        crows = self.u.rows(np.asarray(cands, dtype=np.int64))
        if self.cfg.subset_size is not None:
            return subset_lengths_with(rows, crows, self.cfg.subset_size)
        ells = lengths_with(rows, crows)
        return ells, ells

    def _visit(self, X, known=None):
        cfg = self.cfg
        u = self.u
        self.stats["nodes"] += 1
        mine = len(X) > self.depth or _owner(X, cfg) == cfg.shard_index
        if len(X) > 1 and not prefix_is_least(self.codes[X], self.jt_rows, self.jt_swaps):
            # symbols are added in increasing order, so a relabeling that
            # sorts the prefix lower does the same for every extension
            self.stats["pruned_symmetry"] += 1
            return
        ell, score = self._lengths(X) if known is None else known
        limit = cfg.max_alphabet
        if ell is not None:
            if score < cfg.min_length:
                return
            if mine:
                rec = self._record(X, ell, score)
                if rec is not None:
                    yield rec
            if self.minimal:
                return
            if self.semi and cfg.subset_size is None:
                # a semi-minimal DFA never has more symbols than its length
                limit = ell if limit is None else min(limit, ell)
        else:
            if cfg.bound is not None and cfg.min_length > 1 or cfg.subset_size is not None:
                b = self._bound(X)
                if b < cfg.min_length:
                    self.stats["pruned_bound"] += 1
                    return
                if self.semi and cfg.subset_size is None:
                    limit = b if limit is None else min(limit, b)
        if limit is not None and len(X) + 1 > limit:
            return
        if len(X) <= self.depth and not mine and len(X) == self.depth:
            return
        last = X[-1]
        cands = range(last + 1, len(u.symbols))
        if cfg.sort_candidates:
            syms = order_candidates(cfg.n, [u.symbols[i] for i in X],
                                    [u.symbols[i] for i in cands])
            cands = [u.index[t] for t in syms]
        if self.minimal:
            cands = np.asarray(cands, dtype=np.int64)
            keep = private_children(np.asarray(X, dtype=np.int64), cands, u.pairmap_array())
            cands = cands[keep].tolist()
        cands = list(cands)
        if not cands:
            return
        ells, scores = self._child_lengths(X, cands)
        for s, e, sc in zip(cands, ells.tolist(), scores.tolist()):
            if e >= 0 and sc < cfg.min_length:
                # synchronizes too fast: the child would stop at once
                self.stats["nodes"] += 1
                continue
            yield from self._visit(X + [s], (None, None) if e < 0 else (e, sc))

    def _record(self, X, ell, score):
        from .classify import classify_tables
        cfg = self.cfg
        u = self.u
        syms = tuple(u.symbols[i] for i in X)
        canon = canonical_symbols(cfg.n, syms)
        # report each class only at its canonical member, which every
        # pruning rule leaves reachable; this keeps shards disjoint
        if canon != syms or canon in self.seen:
            return None
        dfa = Dfa(cfg.n, canon)
        flags = classify_tables(dfa, ell, cfg.filters)
        for name in cfg.filters:
            if not flags.get(name):
                self.seen.add(canon)
                return None
        self.seen.add(canon)
        rec = SearchRecord(dfa, ell, **flags)
        if cfg.subset_size is not None:
            rec = replace(rec, subset_size=cfg.subset_size, subset_length=score)
        return rec


def enumerate_dfas(config, resume_after=None, on_checkpoint=None, stats=None, seen=None):
    """Stream one record per isomorphism class meeting ``config``.

    ``seen`` holds canonical symbol tuples already reported (for resuming).
    """
    return _Search(config, resume_after, on_checkpoint, stats, seen).run()


def _run_shard(config):
    return list(enumerate_dfas(config))


def enumerate_all(config, jobs=1):
    """All records of a (possibly sharded) search, merged and sorted.

    With ``jobs > 1`` the search is split into that many shards (unless the
    config already names a shard count) and run in worker processes.
    """
    if jobs > 1 and config.shard_count == 1:
        config = replace(config, shard_count=jobs)
    shards = shard_split(config)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_shard, shards))
    else:
        parts = [_run_shard(c) for c in shards]
    recs = {}
    for part in parts:
        for r in part:
            key = canonical_symbols(r.dfa.n, r.dfa.symbols)
            recs.setdefault(key, r)
    return sorted(recs.values(), key=SearchRecord.sort_key)
