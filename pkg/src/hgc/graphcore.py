"""Hairy graphs, orientations, degrees and canonical forms with sign.

Nodes of a :class:`HairyGraph` are numbered ``0..V-1`` for internal vertices
and ``V..V+H-1`` for hairs (univalent external vertices).  The listed order of
the edges, of the internal vertices and of the omega-hairs, together with the
listed edge directions, is the orientation of the graph.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from . import _canon_py

try:  # compiled kernel, optional
    from . import _canon as _canon_ext
except ImportError:  # pragma: no cover - depends on the build
    _canon_ext = None

OMEGA, ONE, EPSILON = "w", "1", "e"
DECO_RANK = {OMEGA: 0, ONE: 1, EPSILON: 2}
RANK_DECO = {v: k for k, v in DECO_RANK.items()}


class GraphError(ValueError):
    """Malformed graph or illegal decoration."""


@dataclass(frozen=True)
class Parameters:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"m and n must be positive, got {self.m}, {self.n}")
        if self.n - self.m < 3:
            raise ValueError(f"codimension n - m must be >= 3, got {self.n - self.m}")

    @property
    def n_odd(self) -> bool:
        return self.n % 2 == 1

    @property
    def m_odd(self) -> bool:
        return self.m % 2 == 1

    def __str__(self):
        return f"(m={self.m}, n={self.n})"


class Flavor(str, Enum):
    ABAR = "Abar"
    A = "A"
    APRIME = "Aprime"

    @property
    def decorations(self) -> tuple[str, ...]:
        return {Flavor.ABAR: (OMEGA,), Flavor.A: (OMEGA, ONE), Flavor.APRIME: (OMEGA, EPSILON)}[self]

    @property
    def unit(self) -> str | None:
        """The degree-0 decoration of the flavor, if any."""
        return {Flavor.ABAR: None, Flavor.A: ONE, Flavor.APRIME: EPSILON}[self]

    def product(self, decos) -> str | None:
        """Product of hair decorations in the flavor's algebra (None when zero)."""
        omegas = sum(1 for d in decos if d == OMEGA)
        units = len(decos) - omegas
        for d in decos:
            if d != OMEGA and d != self.unit:
                raise GraphError(f"decoration {d!r} illegal in flavor {self.value}")
        if omegas > 1:
            return None
        if omegas == 1:
            # 1 * w = w, but eps * w = 0
            if units and self is Flavor.APRIME:
                return None
            return OMEGA
        return self.unit


def decoration_degree(deco: str, p: Parameters) -> int:
    return p.m if deco == OMEGA else 0


@dataclass(frozen=True)
class HairyGraph:
    internal: int
    hairs: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def num_nodes(self) -> int:
        return self.internal + len(self.hairs)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def is_hair(self, node: int) -> bool:
        return node >= self.internal

    def hair_node(self, j: int) -> int:
        return self.internal + j

    @property
    def omega_count(self) -> int:
        return sum(1 for d in self.hairs if d == OMEGA)

    def count(self, deco: str) -> int:
        return sum(1 for d in self.hairs if d == deco)

    @property
    def loop_order(self) -> int:
        return self.num_edges - self.num_nodes + 1

    def valences(self) -> list[int]:
        val = [0] * self.num_nodes
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        return val

    def hair_attachment(self, j: int) -> int:
        """The node at the other end of hair ``j``'s edge."""
        h = self.internal + j
        for a, b in self.edges:
            if a == h:
                return b
            if b == h:
                return a
        raise GraphError(f"hair {j} has no edge")

    def is_connected(self) -> bool:
        N = self.num_nodes
        if N == 0:
            return False
        adj = [[] for _ in range(N)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == N

    def is_tree(self) -> bool:
        return self.loop_order == 0

    def is_genuine(self) -> bool:
        """All internal vertices have valence >= 3."""
        val = self.valences()
        return all(val[v] >= 3 for v in range(self.internal))

    def validate(self, flavor: Flavor | None = None, enlarged: bool = False) -> None:
        N = self.num_nodes
        for e in self.edges:
            if len(e) != 2 or not all(0 <= x < N for x in e):
                raise GraphError(f"edge {e} out of range")
        if not self.hairs:
            raise GraphError("graph must have at least one hair")
        val = self.valences()
        for j in range(len(self.hairs)):
            if val[self.internal + j] != 1:
                raise GraphError(f"hair {j} has valence {val[self.internal + j]}")
        for a, b in self.edges:
            if a == b and a >= self.internal:
                raise GraphError("tadpole at a hair")
        lo = 1 if enlarged else 3
        for v in range(self.internal):
            if val[v] < lo:
                raise GraphError(f"internal vertex {v} has valence {val[v]}")
        if not self.is_connected():
            raise GraphError("graph is disconnected")
        if flavor is not None:
            for d in self.hairs:
                if d not in flavor.decorations:
                    raise GraphError(f"decoration {d!r} illegal in flavor {flavor.value}")

    def sort_key(self):
        return (self.internal, len(self.hairs), self.hairs, self.edges)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def reflavor(self, mapping: dict[str, str]) -> HairyGraph:
        return HairyGraph(self.internal, tuple(mapping.get(d, d) for d in self.hairs), self.edges)

    def __str__(self):
        def lab(x):
            return f"v{x + 1}" if x < self.internal else f"h{x - self.internal + 1}"

        es = " ".join(f"{lab(a)}-{lab(b)}" for a, b in self.edges)
        return f"<V={self.internal} hairs={''.join(self.hairs)} {es}>"


def degree(g: HairyGraph, p: Parameters) -> int:
    """Degree (n-1)#E - n#V - m#(omega-hairs)."""
    return (p.n - 1) * g.num_edges - p.n * g.internal - p.m * g.omega_count


def relabel(g: HairyGraph, node_map, edge_order=None, flips=()) -> HairyGraph:
    """Copy of ``g`` with nodes renamed by ``node_map`` (old -> new).

    ``node_map`` must send internal vertices to internal positions and hairs
    to hair positions.  ``edge_order`` lists old edge indices in their new
    order; ``flips`` are old edge indices whose direction is reversed.
    """
    V, H = g.internal, len(g.hairs)
    node_map = list(node_map)
    if sorted(node_map) != list(range(V + H)):
        raise GraphError("node_map is not a permutation")
    if any(node_map[x] >= V for x in range(V)):
        raise GraphError("node_map must keep internal vertices internal")
    hairs = [None] * H
    for j in range(H):
        hairs[node_map[V + j] - V] = g.hairs[j]
    order = list(range(g.num_edges)) if edge_order is None else list(edge_order)
    flips = set(flips)
    edges = []
    for i in order:
        a, b = g.edges[i]
        a, b = node_map[a], node_map[b]
        edges.append((b, a) if i in flips else (a, b))
    return HairyGraph(V, tuple(hairs), tuple(edges))


def orientation_sign(g: HairyGraph, other: HairyGraph, node_map, p: Parameters) -> int:
    """Sign relating the orientation of ``g`` to that of ``other``.

    ``node_map`` sends nodes of ``g`` to nodes of ``other``; edges are matched
    by endpoints (parallel edges in listed order).  Returns ``s`` with
    ``g == s * other`` as oriented graphs.
    """
    V = g.internal
    if other.internal != V or len(other.hairs) != len(g.hairs) or other.num_edges != g.num_edges:
        raise GraphError("graphs are not isomorphic")
    for j, d in enumerate(g.hairs):
        if other.hairs[node_map[V + j] - V] != d:
            raise GraphError("node_map does not preserve decorations")
    used = [False] * other.num_edges
    target = []
    reversed_count = 0
    for a, b in g.edges:
        ia, ib = node_map[a], node_map[b]
        for k, (c, d) in enumerate(other.edges):
            if used[k]:
                continue
            if (c, d) == (ia, ib):
                used[k] = True
                target.append(k)
                break
            if (c, d) == (ib, ia):
                used[k] = True
                target.append(k)
                reversed_count += 1
                break
        else:
            raise GraphError("node_map is not an isomorphism")
    parity = 0
    if p.n_odd:
        parity ^= reversed_count & 1
        parity ^= _canon_py.perm_parity([node_map[v] for v in range(V)])
    else:
        parity ^= _canon_py.perm_parity(target)
    if p.m_odd:
        om = [node_map[V + j] - V for j, d in enumerate(g.hairs) if d == OMEGA]
        om_other = [j for j, d in enumerate(other.hairs) if d == OMEGA]
        idx = {j: i for i, j in enumerate(om_other)}
        parity ^= _canon_py.perm_parity([idx[x] for x in om])
    return -1 if parity else 1


@dataclass(frozen=True)
class SignedCanonicalGraph:
    canonical: HairyGraph
    sign: int  # +1, -1, or 0 for an odd symmetry

    @property
    def is_zero(self) -> bool:
        return self.sign == 0


def _flat(g: HairyGraph):
    return g.internal, tuple(DECO_RANK[d] for d in g.hairs), g.edges


def _apply_labels(g: HairyGraph, labels) -> HairyGraph:
    V = g.internal
    hairs = [None] * len(g.hairs)
    for j, d in enumerate(g.hairs):
        hairs[labels[V + j] - V] = d
    edges = []
    for a, b in g.edges:
        la, lb = labels[a], labels[b]
        edges.append((la, lb) if la <= lb else (lb, la))
    edges.sort()
    return HairyGraph(V, tuple(hairs), tuple(edges))


def kernel_name() -> str:
    return "cython" if _canon_ext is not None else "python"


@lru_cache(maxsize=1 << 20)
def _canonicalize_cached(g: HairyGraph, n_odd: bool, m_odd: bool, use_ext: bool):
    V, ranks, edges = _flat(g)
    kernel = _canon_ext if use_ext else _canon_py
    labels, sign = kernel.canon_label(V, ranks, edges, n_odd, m_odd)
    return _apply_labels(g, labels), sign


def canonicalize(g: HairyGraph, p: Parameters, enlarged: bool = False, check: bool = True,
                 kernel: str | None = None) -> SignedCanonicalGraph:
    """Canonical representative of ``g`` and the sign ``g = sign * canonical``."""
    if check:
        g.validate(enlarged=enlarged)
    use_ext = _canon_ext is not None if kernel is None else kernel == "cython"
    if use_ext and _canon_ext is None:
        raise RuntimeError("compiled kernel not available")
    canon, sign = _canonicalize_cached(g, p.n_odd, p.m_odd, use_ext)
    return SignedCanonicalGraph(canon, sign)


def canonicalize_parity(g: HairyGraph, n_odd: bool, m_odd: bool):
    """Hot-path variant: no validation, parities instead of Parameters."""
    return _canonicalize_cached(g, n_odd, m_odd, _canon_ext is not None)


BRUTE_FORCE_MAX_INTERNAL = 6
BRUTE_FORCE_MAX_HAIRS = 8


def canonicalize_brute_force(g: HairyGraph, p: Parameters, enlarged: bool = False) -> SignedCanonicalGraph:
    """Exhaustive-search oracle with the same contract as :func:`canonicalize`.

    Tries every color-respecting relabeling of vertices and hairs, every
    matching of parallel edges and every direction of every tadpole.  Only
    meant for small graphs in tests.
    """
    g.validate(enlarged=enlarged)
    V, H = g.internal, len(g.hairs)
    if V > BRUTE_FORCE_MAX_INTERNAL or H > BRUTE_FORCE_MAX_HAIRS:
        raise GraphError("graph too large for brute-force canonicalization")
    ranks = [DECO_RANK[d] for d in g.hairs]
    N = V + H
    A = _canon_py.adjacency(N, g.edges)
    colors = _canon_py.node_colors(V, ranks, A)
    classes = []
    for lo, hi in ((0, V), (V, N)):
        by_color = {}
        for x in range(lo, hi):
            by_color.setdefault(colors[x], []).append(x)
        classes.extend(by_color[c] for c in sorted(by_color))

    best_key, best_labels, signs = None, None, set()
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [x for block in choice for x in block]
        labels = [0] * N
        for pos, x in enumerate(order):
            labels[x] = pos
        key = tuple(tuple(A[order[i]][order[k]] for i in range(k + 1)) for k in range(N))
        if best_key is None or key > best_key:
            best_key, best_labels, signs = key, labels, set()
        if key == best_key:
            signs |= _all_edge_matching_signs(g, labels, p)
    canon = _apply_labels(g, best_labels)
    sign = signs.pop() if len(signs) == 1 else 0
    return SignedCanonicalGraph(canon, sign)


def _all_edge_matching_signs(g: HairyGraph, labels, p: Parameters) -> set[int]:
    """Signs of ``labels`` over every matching of parallel edges and tadpole direction."""
    canon = _apply_labels(g, labels)
    groups = {}
    for i, e in enumerate(canon.edges):
        groups.setdefault(e, []).append(i)
    mapped = []
    for a, b in g.edges:
        la, lb = labels[a], labels[b]
        mapped.append(((la, lb) if la <= lb else (lb, la), la > lb))
    src_groups = {}
    for i, (key, _) in enumerate(mapped):
        src_groups.setdefault(key, []).append(i)
    keys = sorted(groups)
    loops = [i for i, (key, _) in enumerate(mapped) if key[0] == key[1]]
    signs = set()
    for perms in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        target = [0] * len(mapped)
        for k, perm in zip(keys, perms):
            for i, t in zip(src_groups[k], perm):
                target[i] = t
        for flips in itertools.product((False, True), repeat=len(loops)):
            flipset = {i for i, f in zip(loops, flips) if f}
            parity = 0
            if p.n_odd:
                rev = sum(1 for i, (_, r) in enumerate(mapped) if r) + len(flipset)
                parity ^= rev & 1
                parity ^= _canon_py.perm_parity(labels[: g.internal])
            else:
                parity ^= _canon_py.perm_parity(target)
            if p.m_odd:
                om = [labels[g.internal + j] for j, d in enumerate(g.hairs) if d == OMEGA]
                if om:
                    lo = min(om)
                    parity ^= _canon_py.perm_parity([x - lo for x in om])
            signs.add(-1 if parity else 1)
    return signs


def _hg(internal, hairs, edges):
    """Build a graph from 1-based ``v``/``h`` labels, e.g. ``("v1", "h2")``."""
    def node(s):
        k = int(s[1:]) - 1
        return k if s[0] == "v" else internal + k
    return HairyGraph(internal, tuple(hairs), tuple((node(a), node(b)) for a, b in edges))


NAMED_GRAPHS = {
    "L": lambda: _hg(0, (ONE, OMEGA), [("h1", "h2")]),
    "D": lambda: _hg(1, (OMEGA,), [("h1", "v1"), ("v1", "v1")]),
    "T": lambda: _hg(1, (ONE, OMEGA, OMEGA), [("v1", "h1"), ("v1", "h2"), ("v1", "h3")]),
    "Lprime": lambda: _hg(0, (ONE, ONE), [("h1", "h2")]),
    "Lsecond": lambda: _hg(0, (OMEGA, OMEGA), [("h1", "h2")]),
    "Dprime": lambda: _hg(1, (ONE,), [("h1", "v1"), ("v1", "v1")]),
    "Lomega": lambda: _hg(0, (OMEGA, OMEGA), [("h1", "h2")]),
    "Tomega": lambda: _hg(1, (OMEGA, OMEGA, OMEGA), [("v1", "h1"), ("v1", "h2"), ("v1", "h3")]),
    # four internal vertices, hairs w, 1, w
    "FourVertex": lambda: _hg(
        4, (OMEGA, ONE, OMEGA),
        [("v1", "v2"), ("v1", "v4"), ("v1", "h1"), ("v2", "v4"), ("v3", "v2"),
         ("v3", "v4"), ("v4", "h3"), ("v3", "h2")],
    ),
}


def raw_named_graph(name: str) -> HairyGraph:
    try:
        return NAMED_GRAPHS[name]()
    except KeyError:
        raise KeyError(f"unknown named graph {name!r}; choose from {sorted(NAMED_GRAPHS)}") from None


def named_graph(name: str, p: Parameters) -> SignedCanonicalGraph:
    return canonicalize(raw_named_graph(name), p)


# -- serialization -----------------------------------------------------------

def graph_to_obj(g: HairyGraph, p: Parameters | None = None, flavor: Flavor | None = None) -> dict:
    def lab(x):
        return f"v{x + 1}" if x < g.internal else f"h{x - g.internal + 1}"

    obj = {}
    if p is not None:
        obj["m"], obj["n"] = p.m, p.n
    if flavor is not None:
        obj["flavor"] = flavor.value
    obj["internal"] = g.internal
    obj["hairs"] = [{"dec": d} for d in g.hairs]
    obj["edges"] = [[lab(a), lab(b)] for a, b in g.edges]
    return obj


def graph_from_obj(obj: dict) -> tuple[HairyGraph, Parameters | None, Flavor | None]:
    internal = int(obj["internal"])
    hairs = tuple(h["dec"] for h in obj["hairs"])
    for d in hairs:
        if d not in DECO_RANK:
            raise GraphError(f"unknown decoration {d!r}")
    edges = []
    for a, b in obj["edges"]:
        pair = []
        for s in (a, b):
            kind, k = s[0], int(s[1:])
            if kind == "v" and 1 <= k <= internal:
                pair.append(k - 1)
            elif kind == "h" and 1 <= k <= len(hairs):
                pair.append(internal + k - 1)
            else:
                raise GraphError(f"bad endpoint {s!r}")
        edges.append(tuple(pair))
    p = Parameters(int(obj["m"]), int(obj["n"])) if "m" in obj and "n" in obj else None
    flavor = Flavor(obj["flavor"]) if "flavor" in obj else None
    return HairyGraph(internal, hairs, tuple(edges)), p, flavor


def dumps_graph(g: HairyGraph, p=None, flavor=None) -> str:
    return json.dumps(graph_to_obj(g, p, flavor), separators=(",", ":"))


def loads_graph(s: str):
    return graph_from_obj(json.loads(s))
