"""Compiled inner loops for the search and the maximality tests."""
import numpy as np
from numba import njit


@njit(cache=True)
def _closure(succ, npairs, reach):
    for p in range(npairs):
        r = np.int64(1) << p
        todo = succ[p] & ~r
        r |= todo
        while todo:
            low = todo & -todo
            todo ^= low
            q = 0
            while (low >> q) != 1:
                q += 1
            new = succ[q] & ~r
            r |= new
            todo |= new
        reach[p] = r


@njit(cache=True)
def _merge_mask(reach, direct, npairs):
    m = np.int64(0)
    for p in range(npairs):
        if reach[p] & direct:
            m |= np.int64(1) << p
    return m


@njit(cache=True)
def _private(pm, reach, merge, npairs):
    for p in range(npairs):
        if not (merge >> p) & 1:
            y = pm[p]
            if y < 0 or not (reach[p] >> y) & 1:
                return True
    return False


@njit(cache=True)
def _still_private(P, target, succ, direct, pc, npairs, stack):
    """Whether pair P stays unmergeable and avoids ``target`` once symbol pc joins."""
    one = np.int64(1)
    seen = one << P
    stack[0] = P
    top = 1
    while top > 0:
        top -= 1
        x = stack[top]
        if (direct >> x) & 1 or pc[x] < 0:
            return False
        if x == target:
            return False
        nxt = succ[x] | (one << pc[x])
        nxt &= ~seen
        seen |= nxt
        while nxt:
            low = nxt & -nxt
            nxt ^= low
            q = 0
            while (low >> q) != 1:
                q += 1
            stack[top] = q
            top += 1
    return True


@njit(cache=True)
def private_children(node, cands, pairmaps):
    """Mask of candidates c such that every symbol of node + [c] has a private pair.

    A pair is private to x when the other symbols cannot merge it and x either
    merges it or sends it outside its closure under the other symbols.
    """
    k = node.shape[0]
    npairs = pairmaps.shape[1]
    one = np.int64(1)
    # successor rows and direct merges of node minus member j (j == k: nothing removed)
    succ = np.zeros((k + 1, npairs), dtype=np.int64)
    direct = np.zeros(k + 1, dtype=np.int64)
    for j in range(k + 1):
        for i in range(k):
            if i == j:
                continue
            pm = pairmaps[node[i]]
            for p in range(npairs):
                y = pm[p]
                if y < 0:
                    direct[j] |= one << p
                else:
                    succ[j, p] |= one << y
    reach = np.zeros(npairs, dtype=np.int64)
    # private pairs of each member relative to the others; adding symbols only shrinks them
    priv = np.zeros((k, npairs), dtype=np.int64)
    npriv = np.zeros(k, dtype=np.int64)
    for j in range(k):
        _closure(succ[j], npairs, reach)
        merge = _merge_mask(reach, direct[j], npairs)
        pm = pairmaps[node[j]]
        for p in range(npairs):
            if not (merge >> p) & 1:
                y = pm[p]
                if y < 0 or not (reach[p] >> y) & 1:
                    priv[j, npriv[j]] = p
                    npriv[j] += 1
    out = np.zeros(cands.shape[0], dtype=np.bool_)
    for j in range(k):
        if npriv[j] == 0:
            return out
    _closure(succ[k], npairs, reach)
    full_merge = _merge_mask(reach, direct[k], npairs)
    stack = np.zeros(npairs + 1, dtype=np.int64)
    for ci in range(cands.shape[0]):
        pc = pairmaps[cands[ci]]
        if not _private(pc, reach, full_merge, npairs):
            continue
        ok = True
        for j in range(k):
            pm = pairmaps[node[j]]
            found = False
            for t in range(npriv[j]):
                P = priv[j, t]
                if _still_private(P, pm[P], succ[j], direct[j], pc, npairs, stack):
                    found = True
                    break
            if not found:
                ok = False
                break
        out[ci] = ok
    return out


# ---------------------------------------------------------------------------
# upper bounds (mirrors bounds.bounds_report; that module is the reference)

@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _greedy_fp(sigma, ns, pi, npi):
    """Greedy Frankl-Pin length; ``pi`` must be in (lo, hi) order."""
    alive = np.ones(ns, dtype=np.bool_)
    used = np.zeros(npi, dtype=np.bool_)
    left = ns
    length = 0
    while left > 0:
        best = -1
        best_count = 0
        for j in range(npi):
            if used[j]:
                continue
            P = pi[j]
            c = 0
            for i in range(ns):
                if alive[i] and sigma[i] & P == P:
                    c += 1
            if c > 0 and (best < 0 or c < best_count):
                best = j
                best_count = c
        if best < 0:
            break
        P = pi[best]
        for i in range(ns):
            if alive[i] and sigma[i] & P == P:
                alive[i] = False
                left -= 1
        used[best] = True
        length += 1
    return length


@njit(cache=True)
def bounds_kernel(n, tabs):
    """Returns (summary[6], lpp_k_plain[n+1], lpp_k_improved[n+1]).

    summary = L, Lp, Lpp, improved L, improved Lp, improved Lpp.
    """
    nsym = tabs.shape[0]
    nsets = 1 << n
    full = nsets - 1
    pc = np.zeros(nsets, dtype=np.int64)
    for m in range(nsets):
        pc[m] = _popcount(m)

    # all-pairs distances in the power automaton
    dist = -np.ones((nsets, nsets), dtype=np.int64)
    queue = np.zeros(nsets, dtype=np.int64)
    for src in range(1, nsets):
        dist[src, src] = 0
        queue[0] = src
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            for a in range(nsym):
                y = tabs[a, x]
                if dist[src, y] < 0:
                    dist[src, y] = dist[src, x] + 1
                    queue[tail] = y
                    tail += 1

    # shortest reduction lengths (-1: irreducible)
    red = -np.ones(nsets, dtype=np.int64)
    npred = np.zeros(nsets, dtype=np.int64)
    preds = np.zeros((nsets, nsets * nsym), dtype=np.int64)
    frontier = np.zeros(nsets, dtype=np.int64)
    nf = 0
    for m in range(1, nsets):
        for a in range(nsym):
            y = tabs[a, m]
            if pc[y] < pc[m]:
                if red[m] < 0:
                    red[m] = 1
                    frontier[nf] = m
                    nf += 1
            elif y != m:
                preds[y, npred[y]] = m
                npred[y] += 1
    d = 1
    nxt = np.zeros(nsets, dtype=np.int64)
    while nf > 0:
        d += 1
        nn = 0
        for i in range(nf):
            m = frontier[i]
            for j in range(npred[m]):
                p = preds[m, j]
                if red[p] < 0:
                    red[p] = d
                    nxt[nn] = p
                    nn += 1
        for i in range(nn):
            frontier[i] = nxt[i]
        nf = nn

    npairs = n * (n - 1) // 2
    pairs = np.zeros(npairs, dtype=np.int64)
    idx = 0
    for p in range(n):
        for q in range(p + 1, n):
            pairs[idx] = (1 << p) | (1 << q)
            idx += 1

    # irreducible components per level
    comp = -np.ones(nsets, dtype=np.int64)
    cost = np.zeros(nsets, dtype=np.int64)
    cost_i = np.zeros(nsets, dtype=np.int64)
    mk = np.zeros(n + 1, dtype=np.int64)
    m1 = np.zeros(n + 1, dtype=np.int64)
    lk = np.zeros(n + 1, dtype=np.int64)
    members = np.zeros(nsets, dtype=np.int64)
    ncomp = 0
    for k in range(2, n + 1):
        for v in range(1, nsets):
            if pc[v] != k or red[v] >= 0 or comp[v] >= 0:
                continue
            nm = 0
            for u in range(1, nsets):
                if pc[u] == k and red[u] < 0 and dist[v, u] >= 0 and dist[u, v] >= 0:
                    comp[u] = ncomp
                    members[nm] = u
                    nm += 1
            diam = 0
            dimp = 0
            for i in range(nm):
                s1 = members[i]
                for j in range(nm):
                    if dist[s1, members[j]] > diam:
                        diam = dist[s1, members[j]]
                for pi_ in range(npairs):
                    P = pairs[pi_]
                    best = -1
                    for j in range(nm):
                        T = members[j]
                        dt = dist[s1, T]
                        if dt >= 0 and T & P == P and (best < 0 or dt < best):
                            best = dt
                    if best > dimp:
                        dimp = best
            cost[ncomp] = 1 + diam
            cost_i[ncomp] = 1 + dimp
            mk[k] += 1 + diam
            m1[k] += 1 + dimp
            ncomp += 1
        for S in range(1, nsets):
            if pc[S] == k and red[S] > lk[k]:
                lk[k] = red[S]

    # Frankl-Pin caps
    rho2 = np.zeros(npairs, dtype=np.int64)
    nr2 = 0
    for i in range(npairs):
        if red[pairs[i]] >= 0:
            rho2[nr2] = pairs[i]
            nr2 += 1
    cap = np.zeros(n + 1, dtype=np.int64)
    mi = np.zeros(n + 1, dtype=np.int64)
    sigma = np.zeros(nsets, dtype=np.int64)
    for k in range(2, n + 1):
        ns = 0
        for S in range(1, nsets):
            if pc[S] == k and red[S] >= 0:
                sigma[ns] = S
                ns += 1
        fp = _greedy_fp(sigma, ns, rho2, nr2)
        cap[k] = (n - k + 2) * (n - k + 1) // 2 - fp
        v = m1[k] if m1[k] < cap[k] else cap[k]
        mi[k] = v if v > 0 else 0

    # per-subset reduction data for reducible sets and the full set
    r_s = np.zeros(nsets, dtype=np.int64)
    r_m = np.zeros(nsets, dtype=np.int64)
    r_M = np.zeros(nsets, dtype=np.int64)
    r_Mi = np.zeros(nsets, dtype=np.int64)
    r_l = -np.ones(nsets, dtype=np.int64)
    r_jp = np.zeros(nsets, dtype=np.int64)
    r_ji = np.zeros(nsets, dtype=np.int64)
    tau = np.zeros(nsets, dtype=np.int64)
    seen = np.zeros(nsets + 1, dtype=np.bool_)
    for R in range(1, nsets):
        if red[R] < 0 and R != full:
            continue
        k = pc[R]
        s = k
        for T in range(1, nsets):
            if dist[R, T] >= 0 and pc[T] < s:
                s = pc[T]
        nt = 0
        mR = -1
        MR = 0
        for T in range(1, nsets):
            if dist[R, T] >= 0 and pc[T] == s:
                tau[nt] = T
                nt += 1
                if mR < 0 or dist[R, T] < mR:
                    mR = dist[R, T]
                if dist[R, T] > MR:
                    MR = dist[R, T]
        lR = -1
        if s < k:
            for T in range(1, nsets):
                if dist[R, T] >= 0 and pc[T] < k and (lR < 0 or dist[R, T] < lR):
                    lR = dist[R, T]
        c = 0
        ci = 0
        for i in range(ncomp):
            seen[i] = False
        for i in range(nt):
            cid = comp[tau[i]]
            if cid >= 0 and not seen[cid]:
                seen[cid] = True
                c += cost[cid]
                ci += cost_i[cid]
        Mi = MR
        if s >= 2:
            Mi = 0
            for pi_ in range(npairs):
                P = pairs[pi_]
                best = -1
                for i in range(nt):
                    T = tau[i]
                    if T & P == P and (best < 0 or dist[R, T] < best):
                        best = dist[R, T]
                if best > Mi:
                    Mi = best
        r_s[R] = s
        r_m[R] = mR
        r_M[R] = MR
        r_Mi[R] = Mi
        r_l[R] = lR
        if s >= 2:
            fpt = _greedy_fp(tau, nt, pairs, npairs)
            r_jp[R] = mk[s] - c
            a = m1[s] - ci
            b = cap[s] - fpt
            v = a if a < b else b
            r_ji[R] = v if v > 0 else 0

    out = np.zeros(6, dtype=np.int64)
    sQ = r_s[full]
    if sQ == 1:
        for i in range(2):
            out[3 * i] = r_m[full]
            out[3 * i + 1] = r_m[full]
    else:
        L = r_m[full]
        Li = r_m[full]
        for k in range(2, sQ + 1):
            L += mk[k] + lk[k]
            Li += mi[k] + lk[k]
        Lp = lk[sQ] + r_jp[full] + 1 + r_M[full]
        Lpi = lk[sQ] + r_ji[full] + 1 + r_Mi[full]
        for k in range(2, sQ):
            Lp += mk[k] + lk[k]
            Lpi += mi[k] + lk[k]
        out[0] = L
        out[1] = Lp
        out[3] = Li
        out[4] = Lpi

    lks = np.zeros((2, n + 1), dtype=np.int64)
    LR = np.zeros(nsets, dtype=np.int64)
    maxpart = np.zeros(n + 1, dtype=np.int64)
    for imp in range(2):
        Lk = lks[imp]
        Lk[1] = 0
        maxpart[1] = 0
        for k in range(2, n + 1):
            best = Lk[k - 1]
            for R in range(1, nsets):
                if pc[R] != k or red[R] < 0:
                    continue
                s = r_s[R]
                if s == 1:
                    v = r_m[R]
                else:
                    if imp == 1:
                        v = maxpart[s] + r_ji[R] + 1 + r_Mi[R]
                    else:
                        v = maxpart[s] + r_jp[R] + 1 + r_M[R]
                    if r_l[R] >= 0 and Lk[k - 1] + r_l[R] < v:
                        v = Lk[k - 1] + r_l[R]
                LR[R] = v
                if v > best:
                    best = v
            maxpart[k] = best
            Lk[k] = (mi[k] if imp == 1 else mk[k]) + best
        if red[full] >= 0:
            total = LR[full]
        else:
            s = r_s[full]
            if s == 1:
                total = r_m[full]
            elif imp == 1:
                total = maxpart[s] + r_ji[full] + 1 + r_Mi[full]
            else:
                total = maxpart[s] + r_jp[full] + 1 + r_M[full]
        out[2 + 3 * imp] = total
    return out, lks[0], lks[1]


@njit(cache=True)
def _sync_bfs(work, k, dist, queue):
    """Shortest collapse of the full set under rows 0..k-1 of ``work`` (-1 if none)."""
    N = work.shape[1]
    full = N - 1
    if full & (full - 1) == 0:
        return 0
    dist[:] = -1
    dist[full] = 0
    queue[0] = full
    head, tail = 0, 1
    while head < tail:
        x = queue[head]
        head += 1
        d = dist[x] + 1
        for r in range(k):
            y = work[r, x]
            if dist[y] < 0:
                if y & (y - 1) == 0:
                    return d
                dist[y] = d
                queue[tail] = y
                tail += 1
    return -1


@njit(cache=True)
def lengths_with(tabs, cands):
    """Synchronization length of ``tabs`` plus each candidate row (-1 if none)."""
    k, N = tabs.shape
    work = np.empty((k + 1, N), dtype=np.int64)
    work[:k] = tabs
    dist = np.empty(N, dtype=np.int64)
    queue = np.empty(N, dtype=np.int64)
    out = np.empty(cands.shape[0], dtype=np.int64)
    for c in range(cands.shape[0]):
        work[k] = cands[c]
        out[c] = _sync_bfs(work, k + 1, dist, queue)
    return out


@njit(cache=True)
def greedy_fill(tabs, cands, ell):
    """Add candidates in order while the length stays ``ell``; mask of the added ones."""
    k, N = tabs.shape
    m = cands.shape[0]
    work = np.empty((k + m, N), dtype=np.int64)
    work[:k] = tabs
    used = k
    dist = np.empty(N, dtype=np.int64)
    queue = np.empty(N, dtype=np.int64)
    keep = np.zeros(m, dtype=np.bool_)
    for c in range(m):
        work[used] = cands[c]
        if _sync_bfs(work, used + 1, dist, queue) == ell:
            keep[c] = True
            used += 1
    return keep


@njit(cache=True)
def _subset_levels(work, nsym, k, dist):
    """Sync length and worst k-subset length under rows 0..nsym-1 of ``work``.

    Distances to singletons grow one level per sweep: a set gets level d when
    some symbol maps it onto a set of level d-1.
    """
    N = work.shape[1]
    for m in range(N):
        dist[m] = 0 if m and m & (m - 1) == 0 else -1
    d = 0
    changed = True
    while changed:
        changed = False
        d += 1
        for m in range(1, N):
            if dist[m] >= 0:
                continue
            for r in range(nsym):
                if dist[work[r, m]] == d - 1:
                    dist[m] = d
                    changed = True
                    break
    if dist[N - 1] < 0:
        return -1, -1
    worst = 0
    for m in range(1, N):
        c = 0
        x = m
        while x:
            x &= x - 1
            c += 1
        if c == k and dist[m] > worst:
            worst = dist[m]
    return dist[N - 1], worst


@njit(cache=True)
def subset_lengths(tabs, k):
    """Synchronization length and worst k-subset length (-1, -1 if not synchronizing)."""
    dist = np.empty(tabs.shape[1], dtype=np.int64)
    return _subset_levels(tabs, tabs.shape[0], k, dist)


@njit(cache=True)
def subset_lengths_with(tabs, cands, k):
    """``subset_lengths`` of ``tabs`` plus each candidate row, as two arrays."""
    nsym, N = tabs.shape
    work = np.empty((nsym + 1, N), dtype=np.int64)
    work[:nsym] = tabs
    dist = np.empty(N, dtype=np.int64)
    ells = np.empty(cands.shape[0], dtype=np.int64)
    worst = np.empty(cands.shape[0], dtype=np.int64)
    for c in range(cands.shape[0]):
        work[nsym] = cands[c]
        ells[c], worst[c] = _subset_levels(work, nsym + 1, k, dist)
    return ells, worst


@njit(cache=True)
def prefix_is_least(codes, rows, swaps):
    """False when some relabeling turns the sorted ``codes`` into a smaller sorted tuple.

    Relabelings are visited in Johnson-Trotter order; ``rows[i]`` conjugates
    every code by the adjacent transposition (i i+1).
    """
    k = codes.shape[0]
    cur = codes.copy()
    buf = np.empty(k, dtype=np.int64)
    for s in swaps:
        row = rows[s]
        for j in range(k):
            cur[j] = row[cur[j]]
        buf[:] = cur
        buf.sort()
        for j in range(k):
            if buf[j] != codes[j]:
                if buf[j] < codes[j]:
                    return False
                break
    return True
