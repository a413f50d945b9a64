"""Upper bounds on the synchronization length of every synchronizing extension.

Three bounds are computed from the power automaton of a partial DFA ``A``:
``L`` (per-level components plus reduction lengths), ``Lp`` (which accounts
for the spread of the smallest reachable sets) and ``Lpp`` (a recursion over
reducible subsets).  Each comes in a plain and an improved variant; the
improvement uses pair-based diameters and greedy Frankl-Pin sequences.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .core import DfaError
from .power import PowerGraph


class CapacityError(DfaError):
    """Problem instance too large for an exhaustive routine."""


@dataclass
class FranklPinInstance:
    sigma: list
    pi: list

    def __post_init__(self):
        self.sigma = sorted(set(self.sigma))
        self.pi = sorted(set(self.pi))
        sizes = {bin(s).count("1") for s in self.sigma}
        if len(sizes) > 1 or (sizes and min(sizes) < 2):
            raise DfaError("sigma must hold subsets of one size k >= 2")
        if any(bin(p).count("1") != 2 for p in self.pi):
            raise DfaError("pi must hold pairs")


def all_pairs(n):
    return [(1 << p) | (1 << q) for p in range(n) for q in range(p + 1, n)]


def _pair_key(P):
    lo = (P & -P).bit_length() - 1
    hi = P.bit_length() - 1
    return (lo, hi)


def frankl_pin_greedy(inst):
    """Length of a Frankl-Pin sequence built greedily (a lower bound on fp).

    Repeatedly takes the pair lying in the fewest remaining subsets (ties to
    the lexicographically least pair) and drops the subsets containing it.
    """
    return _greedy(tuple(inst.sigma), tuple(inst.pi))


def _greedy(sigma, pi):
    sigma = list(sigma)
    pi = sorted(pi, key=_pair_key)
    length = 0
    while sigma and pi:
        best, best_count = None, None
        for P in pi:
            c = 0
            for S in sigma:
                if S & P == P:
                    c += 1
            if c and (best_count is None or c < best_count):
                best, best_count = P, c
        if best is None:
            break
        sigma = [S for S in sigma if S & best != best]
        pi.remove(best)
        length += 1
    return length


def frankl_pin_exact(inst, limit=12):
    """Exact length of the longest Frankl-Pin sequence (exponential search)."""
    if len(inst.sigma) > limit:
        raise CapacityError("sigma has %d members, limit %d" % (len(inst.sigma), limit))
    pi = tuple(inst.pi)

    @lru_cache(maxsize=None)
    def best(sigma):
        out = 0
        for P in pi:
            rest = tuple(S for S in sigma if S & P != P)
            if len(rest) < len(sigma):
                out = max(out, 1 + best(rest))
        return out

    return best(tuple(inst.sigma))


# ---------------------------------------------------------------------------

@dataclass
class BoundsReport:
    n: int
    sizeS: int
    m: int
    M: int
    c: int
    m_k: dict = field(default_factory=dict)
    l_k: dict = field(default_factory=dict)
    improved_m_k: dict = field(default_factory=dict)
    L: int = 0
    Lp: int = 0
    Lpp: int = 0
    L_improved: int = 0
    Lp_improved: int = 0
    Lpp_improved: int = 0
    Lpp_k: dict = field(default_factory=dict)
    Lpp_k_improved: dict = field(default_factory=dict)

    def value(self, variant, improved=False):
        key = {"L": "L", "Lp": "Lp", "Lpp": "Lpp"}[variant]
        return getattr(self, key + ("_improved" if improved else ""))


class _Levels:
    """Per-level quantities shared by all three bounds."""

    def __init__(self, g):
        self.g = g
        n = g.n
        self.n = n
        red = g.reducible()
        pc = g.pc
        self.red = red
        self.m = {}
        self.m1 = {}       # with pair-based diameters only
        self.mi = {}       # fully improved, clamped
        self.l = {}
        self.rho2 = [P for P in g.pairs if red[P] is not None]
        self._fp = {}
        self.comp_of = {}
        self.comp_cost = {}
        for k in range(2, n + 1):
            comps = g.components(k)
            plain = imp = 0
            for idx, comp in enumerate(comps):
                d = g.diameter(comp)
                di = g.improved_diameter(comp)
                plain += 1 + d
                imp += 1 + di
                for S in comp:
                    self.comp_of[S] = (k, idx)
                self.comp_cost[(k, idx)] = (1 + d, 1 + di)
            self.m[k] = plain
            self.m1[k] = imp
            self.mi[k] = max(0, min(imp, self.pair_cap(k)))
            lk = [red[S] for S in range(1, g.nsets) if pc[S] == k and red[S] is not None]
            self.l[k] = max(lk) if lk else 0

    def fp_rho(self, k):
        got = self._fp.get(k)
        if got is None:
            pc = self.g.pc
            rho_k = tuple(S for S in range(1, self.g.nsets) if pc[S] == k and self.red[S] is not None)
            got = self._fp[k] = _greedy(rho_k, tuple(self.rho2))
        return got

    def pair_cap(self, k):
        return comb(self.n - k + 2, 2) - self.fp_rho(k)

    def reach(self, R):
        """(|S_R|, m_R, M_R, improved M_R, c_R, improved c_R, tau) for subset R."""
        g = self.g
        red = g.reduction(R)
        s = red.sizeS_R
        tau = red.reachable_min_sets
        seen = set()
        c = ci = 0
        for T in tau:
            key = self.comp_of.get(T)
            if key is not None and key not in seen:
                seen.add(key)
                a, b = self.comp_cost[key]
                c += a
                ci += b
        Mi = g.improved_max_distance(R, tau) if s >= 2 else red.M_R
        return red, s, c, ci, Mi

    def joint(self, s, c, ci, tau):
        """Plain and improved (m_s - c_R)."""
        plain = self.m[s] - c
        fp_tau = _greedy(tuple(tau), tuple(all_pairs(self.n)))
        imp = min(self.m1[s] - ci, -fp_tau + self.pair_cap(s))
        return plain, max(0, imp)


def bounds_report(dfa=None, graph=None):
    """All bound quantities for ``dfa`` (or a prebuilt PowerGraph)."""
    g = graph if graph is not None else PowerGraph.of(dfa)
    n = g.n
    lv = _Levels(g)
    Q = (1 << n) - 1
    redQ, s, c, ci, Mi = lv.reach(Q)
    rep = BoundsReport(n=n, sizeS=s, m=redQ.m_R, M=redQ.M_R, c=c)
    rep.m_k = dict(lv.m)
    rep.l_k = dict(lv.l)
    rep.improved_m_k = dict(lv.mi)

    if s == 1:
        rep.L = rep.Lp = rep.L_improved = rep.Lp_improved = redQ.m_R
    else:
        ks = range(2, s + 1)
        rep.L = sum(lv.m[k] + lv.l[k] for k in ks) + redQ.m_R
        rep.L_improved = sum(lv.mi[k] + lv.l[k] for k in ks) + redQ.m_R
        jp, ji = lv.joint(s, c, ci, redQ.reachable_min_sets)
        below = range(2, s)
        rep.Lp = sum(lv.m[k] + lv.l[k] for k in below) + lv.l[s] + jp + 1 + redQ.M_R
        rep.Lp_improved = sum(lv.mi[k] + lv.l[k] for k in below) + lv.l[s] + ji + 1 + Mi

    plain, imp = _lpp(lv, g, n)
    rep.Lpp, rep.Lpp_k = plain
    rep.Lpp_improved, rep.Lpp_k_improved = imp
    return rep


def _lpp(lv, g, n):
    pc = g.pc
    by_size = {}
    for R in range(1, g.nsets):
        if lv.red[R] is not None:
            by_size.setdefault(pc[R], []).append(R)
    data = {R: lv.reach(R) for Rs in by_size.values() for R in Rs}
    Q = (1 << n) - 1
    if Q not in data:
        data[Q] = lv.reach(Q)

    out = []
    for improved in (False, True):
        mk = lv.mi if improved else lv.m
        Lk = {1: 0}
        maxpart = {1: 0}
        LR = {}

        def value_R(R, k):
            red, s, c, ci, Mi = data[R]
            if s == 1:
                return red.m_R
            jp, ji = lv.joint(s, c, ci, red.reachable_min_sets)
            joint, M = (ji, Mi) if improved else (jp, red.M_R)
            first = maxpart[s] + joint + 1 + M
            if red.l_R is None:
                return first
            return min(first, Lk[k - 1] + red.l_R)

        for k in range(2, n + 1):
            best = Lk[k - 1]
            for R in by_size.get(k, ()):
                LR[R] = value_R(R, k)
                best = max(best, LR[R])
            maxpart[k] = best
            Lk[k] = mk[k] + best
        total = LR[Q] if Q in LR else value_R(Q, n)
        out.append((total, Lk))
    return out


def bound_L(dfa, improved=False):
    return bounds_report(dfa).value("L", improved)


def bound_Lp(dfa, improved=False):
    return bounds_report(dfa).value("Lp", improved)


def bound_Lpp(dfa, improved=False):
    return bounds_report(dfa).value("Lpp", improved)


def improved_m_k(dfa, k, graph=None):
    """Level-k value with pair-based diameters (before the Frankl-Pin cap)."""
    g = graph if graph is not None else PowerGraph.of(dfa)
    return sum(1 + g.improved_diameter(comp) for comp in g.components(k))


def pair_cap(dfa, k, graph=None):
    """C(n-k+2, 2) - fp(rho_k, rho_2) with the greedy fp (may be negative)."""
    g = graph if graph is not None else PowerGraph.of(dfa)
    if not 2 <= k <= g.n:
        raise DfaError("k must lie in 2..n")
    return _Levels(g).pair_cap(k)


def fpks_improvements(dfa, report=None, graph=None):
    """Report whose improved fields carry the Frankl-Pin caps.

    The caps are applied while a report is built, so a given ``report`` is
    returned as is once it has been computed for ``dfa``.
    """
    if report is not None and report.improved_m_k:
        return report
    return bounds_report(dfa, graph=graph)
