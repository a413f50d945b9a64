"""Reachability in the power automaton: synchronization, reduction data, SCCs."""
from dataclasses import dataclass, field

from .core import DfaError, full_set, image_table, size

_POP = [bin(m).count("1") for m in range(1 << 16)]


def popcounts(n):
    return _POP[: 1 << n]


def bfs(tables, src, nsets):
    """Distances from ``src`` to every subset (-1 if unreachable)."""
    dist = [-1] * nsets
    dist[src] = 0
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for m in frontier:
            for tb in tables:
                y = tb[m]
                if dist[y] < 0:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
    return dist


def sync_length_tables(n, tables, src=None):
    """Length of a shortest word collapsing ``src`` (default Q) to one state."""
    if src is None:
        src = (1 << n) - 1
    if src & (src - 1) == 0:
        return 0
    seen = bytearray(1 << n)
    seen[src] = 1
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for m in frontier:
            for tb in tables:
                y = tb[m]
                if not seen[y]:
                    if y & (y - 1) == 0:
                        return d
                    seen[y] = 1
                    nxt.append(y)
        frontier = nxt
    return None


def distances_to_singletons(n, tables):
    """For every subset, the length of a shortest word collapsing it (None if none)."""
    nsets = 1 << n
    preds = [[] for _ in range(nsets)]
    for tb in tables:
        for m in range(1, nsets):
            preds[tb[m]].append(m)
    dist = [None] * nsets
    frontier = [1 << q for q in range(n)]
    for m in frontier:
        dist[m] = 0
    d = 0
    while frontier:
        d += 1
        nxt = []
        for m in frontier:
            for p in preds[m]:
                if dist[p] is None:
                    dist[p] = d
                    nxt.append(p)
        frontier = nxt
    return dist


# ---------------------------------------------------------------------------
# public operations on Dfa

def is_synchronizing(dfa):
    """Pair-automaton test: every pair of states can be merged."""
    n = dfa.n
    if n == 1:
        return True
    return all(m is not None for m in _mergeable_pairs(n, dfa.tables()).values())


def _mergeable_pairs(n, tables):
    pairs = [(1 << p) | (1 << q) for p in range(n) for q in range(p + 1, n)]
    dist = distances_to_singletons(n, tables)
    return {P: dist[P] for P in pairs}


def sync_length(dfa):
    return sync_length_tables(dfa.n, dfa.tables())


def subset_sync_length(dfa, subset):
    if subset == 0:
        raise DfaError("empty subset")
    if subset >> dfa.n:
        raise DfaError("subset has states outside 0..n-1")
    return sync_length_tables(dfa.n, dfa.tables(), subset)


def max_subset_sync_length(dfa, k):
    """Largest subset synchronization length over all k-subsets (None if some fails)."""
    dist = distances_to_singletons(dfa.n, dfa.tables())
    pc = popcounts(dfa.n)
    worst = 0
    for m in range(1, 1 << dfa.n):
        if pc[m] == k:
            if dist[m] is None:
                return None
            worst = max(worst, dist[m])
    return worst


def shortest_sync_word(dfa, subset=None):
    """Lexicographically least shortest word collapsing ``subset`` (default Q)."""
    n = dfa.n
    tables = dfa.tables()
    dist = distances_to_singletons(n, tables)
    cur = full_set(n) if subset is None else subset
    if dist[cur] is None:
        return None
    word = []
    while dist[cur] > 0:
        for i, tb in enumerate(tables):
            y = tb[cur]
            if dist[y] is not None and dist[y] == dist[cur] - 1:
                word.append(i)
                cur = y
                break
    return word


def is_transitive(dfa):
    n = dfa.n
    adj = [set() for _ in range(n)]
    for t in dfa.symbols:
        for q in range(n):
            adj[q].add(t[q])
    for src in range(n):
        seen = {src}
        stack = [src]
        while stack:
            q = stack.pop()
            for r in adj[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        if len(seen) != n:
            return False
    return True


# ---------------------------------------------------------------------------
# reduction data and irreducible components

@dataclass
class ReductionData:
    subset: int
    reducible: bool
    l_R: int | None
    sizeS_R: int
    m_R: int
    M_R: int
    reachable_min_sets: list = field(default_factory=list)


@dataclass
class SccDecomposition:
    k: int
    components: list
    diameters: list
    improved_diameters: list
    m_k: int
    improved_m_k: int


class PowerGraph:
    """All-pairs distance data of the power automaton of one DFA.

    Built once per DFA and shared by the bound computations.
    """

    def __init__(self, n, tables):
        self.n = n
        self.tables = tables
        self.nsets = 1 << n
        self.pc = popcounts(n)
        self.dist = [None] * self.nsets
        self._reducible = None
        self._comps = {}
        self.pairs = [(1 << p) | (1 << q) for p in range(n) for q in range(p + 1, n)]

    @classmethod
    def of(cls, dfa):
        return cls(dfa.n, dfa.tables())

    def dist_from(self, src):
        d = self.dist[src]
        if d is None:
            d = self.dist[src] = bfs(self.tables, src, self.nsets)
        return d

    def reduction(self, R):
        d = self.dist_from(R)
        pc = self.pc
        k = pc[R]
        s = k
        for T in range(1, self.nsets):
            if d[T] >= 0 and pc[T] < s:
                s = pc[T]
        tau = [T for T in range(1, self.nsets) if d[T] >= 0 and pc[T] == s]
        m_R = min(d[T] for T in tau)
        M_R = max(d[T] for T in tau)
        l_R = None
        if s < k:
            l_R = min(d[T] for T in range(1, self.nsets) if d[T] >= 0 and pc[T] < k)
        return ReductionData(R, s < k, l_R, s, m_R, M_R, tau)

    def reducible(self):
        """Per subset: shortest reduction length, or None if irreducible."""
        if self._reducible is None:
            pc = self.pc
            red = [None] * self.nsets
            # a set is reducible iff some word shrinks it; BFS per set is
            # avoided by propagating backwards from sets whose one-step image shrinks
            preds = [[] for _ in range(self.nsets)]
            frontier = []
            for m in range(1, self.nsets):
                for tb in self.tables:
                    y = tb[m]
                    if pc[y] < pc[m]:
                        if red[m] is None:
                            red[m] = 1
                            frontier.append(m)
                    elif y != m:
                        preds[y].append(m)
            d = 1
            while frontier:
                d += 1
                nxt = []
                for m in frontier:
                    for p in preds[m]:
                        if red[p] is None:
                            red[p] = d
                            nxt.append(p)
                frontier = nxt
            self._reducible = red
        return self._reducible

    def components(self, k):
        """SCCs of the graph on irreducible k-subsets, each as a sorted list."""
        got = self._comps.get(k)
        if got is not None:
            return got
        red = self.reducible()
        nodes = [m for m in range(1, self.nsets) if self.pc[m] == k and red[m] is None]
        comps = []
        assigned = set()
        for v in nodes:
            if v in assigned:
                continue
            dv = self.dist_from(v)
            comp = [u for u in nodes if dv[u] >= 0 and self.dist_from(u)[v] >= 0]
            assigned.update(comp)
            comps.append(comp)
        self._comps[k] = comps
        return comps

    def diameter(self, comp):
        return max(self.dist_from(a)[b] for a in comp for b in comp)

    def pair_distances(self, src, targets):
        """For each pair P inside some target, min distance from ``src`` to a target containing P."""
        d = self.dist_from(src)
        got = {}
        for P in self.pairs:
            best = -1
            for T in targets:
                dt = d[T]
                if dt >= 0 and T & P == P and (best < 0 or dt < best):
                    best = dt
            if best >= 0:
                got[P] = best
        return got

    def improved_diameter(self, comp):
        """Diameter where each pair only needs its nearest containing member."""
        best = 0
        for s1 in comp:
            pd = self.pair_distances(s1, comp)
            if pd:
                best = max(best, max(pd.values()))
        return best

    def improved_max_distance(self, R, tau):
        return max(self.pair_distances(R, tau).values())


def reduction_data(dfa, subset):
    if size(subset) < 2:
        raise DfaError("reduction data needs a subset of size >= 2")
    return PowerGraph.of(dfa).reduction(subset)


def irreducible_scc(dfa, k, graph=None):
    if not 2 <= k <= dfa.n:
        raise DfaError("k must lie in 2..n")
    g = graph or PowerGraph.of(dfa)
    comps = g.components(k)
    diams = [g.diameter(c) for c in comps]
    imp = [g.improved_diameter(c) for c in comps]
    return SccDecomposition(k, comps, diams, imp,
                            len(comps) + sum(diams), len(comps) + sum(imp))


__all__ = [
    "is_synchronizing", "sync_length", "subset_sync_length", "shortest_sync_word",
    "max_subset_sync_length", "reduction_data", "irreducible_scc", "is_transitive",
    "PowerGraph", "ReductionData", "SccDecomposition", "image_table",
]
