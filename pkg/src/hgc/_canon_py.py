"""Pure-Python canonical labeling kernel.

A graph is passed in flat form: ``V`` internal vertices numbered ``0..V-1``,
hairs numbered ``V..V+H-1`` with decoration ranks ``ranks`` and an edge list.
The kernel returns the relabeling that maximizes the column-major adjacency
key among all labelings ordered by vertex color, together with the sign that
relates the input orientation to the canonical one (0 for odd symmetry).

The compiled twin in ``_canon.pyx`` implements the same search; both must
agree bit for bit.
"""

OMEGA_RANK = 0


def perm_parity(perm):
    """Parity (0 or 1) of a permutation given as a list of images."""
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def adjacency(N, edges):
    A = [[0] * N for _ in range(N)]
    for a, b in edges:
        if a == b:
            A[a][a] += 1
        else:
            A[a][b] += 1
            A[b][a] += 1
    return A


def node_colors(V, ranks, A):
    """Label-invariant initial colors: internal vertices first, then hairs."""
    N = V + len(ranks)
    colors = []
    for v in range(V):
        val = sum(A[v]) + A[v][v]
        hair_ranks = tuple(sorted(ranks[h - V] for h in range(V, N) if A[v][h]))
        colors.append((0, val, A[v][v], hair_ranks))
    for r in ranks:
        colors.append((1, r))
    return colors


def forced_zero(V, ranks, A, n_odd, m_odd):
    """Symmetries visible without search: tadpoles, multi-edges, twin hairs."""
    N = V + len(ranks)
    for a in range(N):
        if A[a][a]:
            if n_odd or A[a][a] > 1:
                return True
        if not n_odd:
            for b in range(a + 1, N):
                if A[a][b] > 1:
                    return True
    for v in range(V):
        seen = set()
        for h in range(V, N):
            if A[v][h]:
                r = ranks[h - V]
                if r in seen:
                    if r == OMEGA_RANK:
                        if n_odd == m_odd:
                            return True
                    elif not n_odd:
                        return True
                seen.add(r)
    return False


def labeling_sign(labels, V, ranks, edges, n_odd, m_odd):
    """Sign carrying the input orientation onto the canonical one under ``labels``."""
    parity = 0
    if n_odd:
        parity ^= perm_parity(labels[:V])
        for a, b in edges:
            if labels[a] > labels[b]:
                parity ^= 1
    else:
        keys = []
        for a, b in edges:
            la, lb = labels[a], labels[b]
            keys.append((la, lb) if la <= lb else (lb, la))
        order = sorted(range(len(keys)), key=keys.__getitem__)
        pos = [0] * len(keys)
        for p, i in enumerate(order):
            pos[i] = p
        parity ^= perm_parity(pos)
    if m_odd:
        omegas = [labels[V + j] for j, r in enumerate(ranks) if r == OMEGA_RANK]
        if omegas:
            lo = min(omegas)
            parity ^= perm_parity([x - lo for x in omegas])
    return -1 if parity else 1


def _hairs_for_zero_core(ranks, edges, A, n_odd, m_odd):
    # V == 0: a single edge between two hairs.
    H = len(ranks)
    order = sorted(range(H), key=lambda h: (ranks[h], h))
    candidates = [order]
    if H == 2 and ranks[0] == ranks[1]:
        candidates.append(order[::-1])
    signs = set()
    for cand in candidates:
        labels = [0] * H
        for p, h in enumerate(cand):
            labels[h] = p
        signs.add(labeling_sign(labels, 0, ranks, edges, n_odd, m_odd))
    labels = [0] * H
    for p, h in enumerate(order):
        labels[h] = p
    sign = 0 if len(signs) > 1 else signs.pop()
    return labels, sign


def canon_label(V, ranks, edges, n_odd, m_odd):
    """Return ``(labels, sign)``; ``labels[node]`` is the canonical position."""
    ranks = list(ranks)
    H = len(ranks)
    N = V + H
    A = adjacency(N, edges)
    zero = forced_zero(V, ranks, A, n_odd, m_odd)
    if V == 0:
        labels, sign = _hairs_for_zero_core(ranks, edges, A, n_odd, m_odd)
        return labels, 0 if zero else sign

    colors = node_colors(V, ranks, A)
    internal = sorted(range(V), key=colors.__getitem__)
    required = [colors[u] for u in internal]
    attach = [0] * H
    for h in range(H):
        for v in range(V):
            if A[v][V + h]:
                attach[h] = v
                break

    pos_node = [0] * V
    node_pos = [-1] * V
    best = {"key": None, "labels": None, "sign": 0, "conflict": False}
    best_cols = [None] * V

    def leaf():
        hair_order = sorted(range(H), key=lambda h: (ranks[h], node_pos[attach[h]], h))
        hair_key = tuple(-node_pos[attach[h]] for h in hair_order)
        labels = node_pos[:] + [0] * H
        for p, h in enumerate(hair_order):
            labels[V + h] = V + p
        sign = labeling_sign(labels, V, ranks, edges, n_odd, m_odd)
        return hair_key, labels, sign

    def search(k, tied):
        if k == V:
            hair_key, labels, sign = leaf()
            if best["key"] is None or not tied or hair_key > best["key"]:
                best["key"] = hair_key
                best["labels"] = labels
                best["sign"] = sign
                best["conflict"] = False
                return True
            if hair_key == best["key"] and sign != best["sign"]:
                best["conflict"] = True
            return False
        want = required[k]
        cands = []
        top = None
        for u in range(V):
            if node_pos[u] >= 0 or colors[u] != want:
                continue
            Au = A[u]
            col = tuple(Au[pos_node[i]] for i in range(k)) + (Au[u],)
            if top is None or col > top:
                top = col
                cands = [u]
            elif col == top:
                cands.append(u)
        if tied and best_cols[k] is not None:
            if top < best_cols[k]:
                return False
            if top > best_cols[k]:
                tied = False
        improved = False
        for u in cands:
            pos_node[k] = u
            node_pos[u] = k
            if search(k + 1, tied):
                best_cols[k] = top
                improved = True
                tied = True
            node_pos[u] = -1
        return improved

    search(0, True)
    sign = 0 if (zero or best["conflict"]) else best["sign"]
    return best["labels"], sign
