"""Raw graph surgery shared by the differentials, the L-infinity operations and
the comparison map.

Every operation returns plain (possibly non-canonical) graphs; signs come only
from the orientation conventions below, never from canonicalization.

* A split or a join creates one internal vertex and one edge.  Both are put
  first in their orientation blocks, i.e. the pair ``(edge, vertex)`` of
  total degree -1 is prepended to the orientation.
* A split at ``v`` directs the new edge from ``v`` to the new vertex.
* A join directs the new hair edge from the new hair to the new vertex; the
  new hair takes the list position of the omega-hair it absorbs (or of the
  first joined hair when there is none).
* A disjoint union concatenates orientations, moved into block order with
  Koszul signs.
"""

from __future__ import annotations

from itertools import combinations

from .graphcore import OMEGA, HairyGraph, Parameters


def half_edges(g: HairyGraph, v: int) -> list[tuple[int, int]]:
    out = []
    for i, (a, b) in enumerate(g.edges):
        if a == v:
            out.append((i, 0))
        if b == v:
            out.append((i, 1))
    return out


def split_vertex(g: HairyGraph, v: int, moved) -> HairyGraph:
    """Move the half-edges ``moved`` of ``v`` onto a new vertex joined to ``v``."""
    moved = set(moved)
    new_edges = [(v + 1, 0)]
    for i, (a, b) in enumerate(g.edges):
        a2 = 0 if (i, 0) in moved else a + 1
        b2 = 0 if (i, 1) in moved else b + 1
        new_edges.append((a2, b2))
    return HairyGraph(g.internal + 1, g.hairs, tuple(new_edges))


def split_terms(g: HairyGraph, min_block: int = 2):
    """All splittings of all internal vertices, each unordered partition once.

    ``min_block`` is the least number of old half-edges on each side; 2 keeps
    the complex genuine, 0 allows uni- and bivalent vertices.
    """
    out = []
    for v in range(g.internal):
        hes = half_edges(g, v)
        k = len(hes)
        rest = hes[1:]
        for mask in range(1 << (k - 1)):
            moved = [rest[i] for i in range(k - 1) if mask >> i & 1]
            if len(moved) < min_block or k - len(moved) < min_block:
                continue
            out.append(split_vertex(g, v, moved))
    return out


def join_hairs(g: HairyGraph, subset, deco: str) -> HairyGraph:
    """Fuse the hair vertices ``subset`` into a new vertex carrying a new hair ``deco``."""
    subset = sorted(subset)
    sset = set(subset)
    V, H = g.internal, len(g.hairs)
    rep = next((j for j in subset if g.hairs[j] == OMEGA), subset[0])
    new_hairs = []
    hair_new = {}
    for j in range(H):
        if j in sset and j != rep:
            continue
        hair_new[j] = len(new_hairs)
        new_hairs.append(deco if j == rep else g.hairs[j])
    V2 = V + 1

    def mp(x):
        if x < V:
            return x + 1
        j = x - V
        if j in sset:
            return 0
        return V2 + hair_new[j]

    h_node = V2 + hair_new[rep]
    new_edges = [(h_node, 0)]
    new_edges.extend((mp(a), mp(b)) for a, b in g.edges)
    return HairyGraph(V2, tuple(new_hairs), tuple(new_edges))


def hair_subsets(g: HairyGraph, min_size: int):
    H = len(g.hairs)
    for size in range(min_size, H + 1):
        yield from combinations(range(H), size)


def join_terms(g: HairyGraph, flavor, min_size: int = 2, omega_required=None):
    """All hair fusions with nonzero decoration product."""
    out = []
    for S in hair_subsets(g, min_size):
        decos = [g.hairs[j] for j in S]
        prod = flavor.product(decos)
        if prod is None:
            continue
        if omega_required is not None and (OMEGA in decos) != omega_required:
            continue
        out.append(join_hairs(g, S, prod))
    return out


def disjoint_union(graphs, p: Parameters) -> tuple[HairyGraph, int]:
    """Disjoint union with the orientation of the concatenation, and its sign."""
    e_par = (p.n - 1) & 1
    v_par = p.n & 1
    h_par = p.m & 1
    V_tot = sum(g.internal for g in graphs)
    internal_off = []
    hair_off = []
    vo = ho = 0
    for g in graphs:
        internal_off.append(vo)
        hair_off.append(ho)
        vo += g.internal
        ho += len(g.hairs)
    hairs = []
    edges = []
    parity = 0
    acc_v = acc_h = 0
    for g, io, hoff in zip(graphs, internal_off, hair_off):
        V = g.internal
        E = g.num_edges
        Hw = g.omega_count
        parity ^= ((E * e_par) & 1) & ((acc_v * v_par + acc_h * h_par) & 1)
        parity ^= ((V * v_par) & 1) & ((acc_h * h_par) & 1)
        acc_v += V
        acc_h += Hw
        hairs.extend(g.hairs)

        def mp(x, V=V, io=io, hoff=hoff):
            return io + x if x < V else V_tot + hoff + (x - V)

        edges.extend((mp(a), mp(b)) for a, b in g.edges)
    return HairyGraph(V_tot, tuple(hairs), tuple(edges)), (-1 if parity else 1)


def reconnect(g: HairyGraph, targets: dict[int, int]) -> HairyGraph:
    """Re-glue hair ``j``'s edge end to internal vertex ``targets[j]`` and drop the hair.

    No orientation sign: unit-like hairs are outside the orientation set.
    """
    V, H = g.internal, len(g.hairs)
    new_hairs = []
    hair_new = {}
    for j in range(H):
        if j in targets:
            continue
        hair_new[j] = len(new_hairs)
        new_hairs.append(g.hairs[j])

    def mp(x):
        if x < V:
            return x
        j = x - V
        if j in targets:
            return targets[j]
        return V + hair_new[j]

    return HairyGraph(V, tuple(new_hairs), tuple((mp(a), mp(b)) for a, b in g.edges))


def attach_leaf(g: HairyGraph, v: int) -> HairyGraph:
    """New univalent internal vertex joined to internal vertex ``v`` (edge ``v -> new``)."""
    new_edges = [(v + 1, 0)]
    new_edges.extend((a + 1, b + 1) for a, b in g.edges)
    return HairyGraph(g.internal + 1, g.hairs, tuple(new_edges))


def loop_order_delta_join(size: int) -> int:
    """Fusing ``size`` hairs raises the first Betti number by ``size - 1``."""
    return size - 1
