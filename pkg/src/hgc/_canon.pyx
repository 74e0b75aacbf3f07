# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled canonical labeling kernel.

Same search and tie-breaking as ``_canon_py``; results must be identical.
Graphs with more than ``MAXN`` nodes are handed to the Python kernel.
"""

from . import _canon_py

DEF MAXN = 40

cdef struct State:
    int V
    int H
    int N
    int E
    int n_odd
    int m_odd
    int A[MAXN][MAXN]
    int color[MAXN]
    int required[MAXN]
    int rank[MAXN]
    int attach[MAXN]
    int ea[MAXN * 2]
    int eb[MAXN * 2]
    int pos_node[MAXN]
    int node_pos[MAXN]
    int best_cols[MAXN][MAXN + 1]
    int best_cols_set[MAXN]
    int best_key[MAXN]
    int best_labels[MAXN]
    int have_best
    int best_sign
    int conflict
    int labels[MAXN]
    int hair_order[MAXN]
    int hair_key[MAXN]


cdef int _leaf(State* s):
    """Fill s.labels / s.hair_key for the current vertex order; return the sign."""
    cdef int V = s.V, H = s.H
    cdef int i, j, h, t, parity = 0
    cdef int la, lb, ka1, ka2, kb1, kb2
    # insertion sort of hairs by (rank, node_pos[attach], index)
    for i in range(H):
        s.hair_order[i] = i
    for i in range(1, H):
        h = s.hair_order[i]
        j = i - 1
        while j >= 0 and _hair_gt(s, s.hair_order[j], h):
            s.hair_order[j + 1] = s.hair_order[j]
            j -= 1
        s.hair_order[j + 1] = h
    for i in range(V):
        s.labels[i] = s.node_pos[i]
    for i in range(H):
        h = s.hair_order[i]
        s.hair_key[i] = -s.node_pos[s.attach[h]]
        s.labels[V + h] = V + i
    if s.n_odd:
        for i in range(V):
            for j in range(i + 1, V):
                if s.labels[i] > s.labels[j]:
                    parity ^= 1
        for i in range(s.E):
            if s.labels[s.ea[i]] > s.labels[s.eb[i]]:
                parity ^= 1
    else:
        for i in range(s.E):
            la = s.labels[s.ea[i]]
            lb = s.labels[s.eb[i]]
            if la <= lb:
                ka1 = la; ka2 = lb
            else:
                ka1 = lb; ka2 = la
            for j in range(i + 1, s.E):
                la = s.labels[s.ea[j]]
                lb = s.labels[s.eb[j]]
                if la <= lb:
                    kb1 = la; kb2 = lb
                else:
                    kb1 = lb; kb2 = la
                if ka1 > kb1 or (ka1 == kb1 and ka2 > kb2):
                    parity ^= 1
    if s.m_odd:
        for i in range(H):
            if s.rank[i] != 0:
                continue
            for j in range(i + 1, H):
                if s.rank[j] == 0 and s.labels[V + i] > s.labels[V + j]:
                    parity ^= 1
    return -1 if parity else 1


cdef inline bint _hair_gt(State* s, int a, int b):
    if s.rank[a] != s.rank[b]:
        return s.rank[a] > s.rank[b]
    cdef int pa = s.node_pos[s.attach[a]], pb = s.node_pos[s.attach[b]]
    if pa != pb:
        return pa > pb
    return a > b


cdef int _cmp_cols(int* x, int* y, int length):
    cdef int i
    for i in range(length):
        if x[i] != y[i]:
            return 1 if x[i] > y[i] else -1
    return 0


cdef bint _search(State* s, int k, bint tied):
    cdef int V = s.V, H = s.H
    cdef int u, i, c, ncand = 0
    cdef int cands[MAXN]
    cdef int col[MAXN + 1]
    cdef int top[MAXN + 1]
    cdef bint have_top = False
    cdef bint improved = False
    cdef int sign, cmp
    if k == V:
        sign = _leaf(s)
        if s.have_best:
            cmp = _cmp_cols(s.hair_key, s.best_key, H)
        else:
            cmp = 1
        if not s.have_best or not tied or cmp > 0:
            s.have_best = 1
            for i in range(H):
                s.best_key[i] = s.hair_key[i]
            for i in range(s.N):
                s.best_labels[i] = s.labels[i]
            s.best_sign = sign
            s.conflict = 0
            return True
        if cmp == 0 and sign != s.best_sign:
            s.conflict = 1
        return False
    for u in range(V):
        if s.node_pos[u] >= 0 or s.color[u] != s.required[k]:
            continue
        for i in range(k):
            col[i] = s.A[u][s.pos_node[i]]
        col[k] = s.A[u][u]
        if not have_top:
            c = 1
        else:
            c = _cmp_cols(col, top, k + 1)
        if c > 0:
            have_top = True
            for i in range(k + 1):
                top[i] = col[i]
            ncand = 0
            cands[ncand] = u
            ncand += 1
        elif c == 0:
            cands[ncand] = u
            ncand += 1
    if tied and s.best_cols_set[k]:
        c = _cmp_cols(top, s.best_cols[k], k + 1)
        if c < 0:
            return False
        if c > 0:
            tied = False
    for i in range(ncand):
        u = cands[i]
        s.pos_node[k] = u
        s.node_pos[u] = k
        if _search(s, k + 1, tied):
            for c in range(k + 1):
                s.best_cols[k][c] = top[c]
            s.best_cols_set[k] = 1
            improved = True
            tied = True
        s.node_pos[u] = -1
    return improved


def canon_label(int V, ranks, edges, bint n_odd, bint m_odd):
    """Return ``(labels, sign)``; ``labels[node]`` is the canonical position."""
    cdef int H = len(ranks)
    cdef int N = V + H
    cdef int E = len(edges)
    if V == 0 or N > MAXN or E > 2 * MAXN:
        return _canon_py.canon_label(V, ranks, edges, n_odd, m_odd)
    cdef State s
    cdef int i, j, a, b
    s.V = V
    s.H = H
    s.N = N
    s.E = E
    s.n_odd = n_odd
    s.m_odd = m_odd
    for i in range(N):
        for j in range(N):
            s.A[i][j] = 0
        s.node_pos[i] = -1
        s.best_cols_set[i] = 0
    i = 0
    for a, b in edges:
        s.ea[i] = a
        s.eb[i] = b
        i += 1
        if a == b:
            s.A[a][a] += 1
        else:
            s.A[a][b] += 1
            s.A[b][a] += 1
    for i in range(H):
        s.rank[i] = ranks[i]
        for j in range(V):
            if s.A[j][V + i]:
                s.attach[i] = j
                break
    # colors: identical ordering to the Python kernel, compressed to ints
    A_rows = [[s.A[i][j] for j in range(N)] for i in range(V)]
    rank_list = list(ranks)
    py_colors = []
    for i in range(V):
        row = A_rows[i]
        py_colors.append((0, sum(row) + row[i], row[i],
                          tuple(sorted(rank_list[h] for h in range(H) if row[V + h]))))
    distinct = sorted(set(py_colors))
    cid = {c: t for t, c in enumerate(distinct)}
    for i in range(V):
        s.color[i] = cid[py_colors[i]]
    order = sorted(range(V), key=py_colors.__getitem__)
    for i in range(V):
        s.required[i] = s.color[order[i]]
    s.have_best = 0
    s.best_sign = 0
    s.conflict = 0
    _search(&s, 0, True)
    zero = _forced_zero(&s)
    labels = [s.best_labels[i] for i in range(N)]
    sign = 0 if (zero or s.conflict) else s.best_sign
    return labels, sign


cdef bint _forced_zero(State* s):
    cdef int a, b, v, h, g
    for a in range(s.N):
        if s.A[a][a]:
            if s.n_odd or s.A[a][a] > 1:
                return True
        if not s.n_odd:
            for b in range(a + 1, s.N):
                if s.A[a][b] > 1:
                    return True
    for v in range(s.V):
        for h in range(s.H):
            if not s.A[v][s.V + h]:
                continue
            for g in range(h + 1, s.H):
                if s.A[v][s.V + g] and s.rank[g] == s.rank[h]:
                    if s.rank[h] == 0:
                        if s.n_odd == s.m_odd:
                            return True
                    elif not s.n_odd:
                        return True
    return False
