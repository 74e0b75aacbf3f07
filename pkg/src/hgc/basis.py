"""Exhaustive enumeration of canonical basis graphs in a complexity window.

Cores (the multigraph on internal vertices) are grown one vertex at a time
from smaller connected cores, deduplicated by canonical form, then dressed
with hairs and decorations.  Every dressed graph is canonicalized; graphs
with an odd symmetry are dropped.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .graphcore import (
    EPSILON,
    OMEGA,
    ONE,
    Flavor,
    HairyGraph,
    Parameters,
    _canon_py,
    canonicalize_parity,
    degree,
    graph_from_obj,
    graph_to_obj,
)
from .graphcore import _canon_ext

log = logging.getLogger(__name__)

DEFAULT_CAP = 2_000_000


class Sector(str, Enum):
    ALL = "All"
    TREES = "Trees"
    UT = "UT"
    W0 = "W0"
    PRIMED = "Primed"
    OMEGA_ONLY = "OmegaOnly"


class WindowTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Window:
    max_internal: int
    max_hairs: int
    flavor: Flavor
    params: Parameters
    sector: Sector = Sector.ALL
    max_edges: int | None = None

    def __post_init__(self):
        if self.max_internal < 0 or self.max_hairs < 0:
            raise ValueError("window bounds must be nonnegative")
        sector = Sector(self.sector)
        object.__setattr__(self, "sector", sector)
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if sector is Sector.UT and self.flavor is not Flavor.APRIME:
            raise ValueError("sector UT requires flavor Aprime")
        if sector is Sector.W0 and self.flavor is not Flavor.A:
            raise ValueError("sector W0 requires flavor A")
        if self.max_edges is None:
            object.__setattr__(self, "max_edges", default_max_edges(self.max_internal, self.max_hairs, self.params))

    def contains_shape(self, V, H, E) -> bool:
        return V <= self.max_internal and H <= self.max_hairs and E <= self.max_edges

    def describe(self) -> dict:
        return {
            "m": self.params.m, "n": self.params.n, "flavor": self.flavor.value,
            "sector": self.sector.value, "max_internal": self.max_internal,
            "max_hairs": self.max_hairs, "max_edges": self.max_edges,
        }


def default_max_edges(max_internal: int, max_hairs: int, p: Parameters) -> int:
    """Edge budget used when a window does not give one.

    For odd ``n`` multiple edges survive and nothing bounds the edge count of
    a graph with given vertex and hair counts, so some budget has to be
    chosen.  ``max_internal + max_hairs`` admits one independent cycle at the
    extreme vertex and hair counts and more cycles below them.  The same
    budget is used for even ``n`` so both parities get comparable windows.
    Homology never relies on this default: it sizes windows from the
    feasible-shape region of each degree.
    """
    return max_internal + max_hairs


@dataclass
class BasisSlice:
    degree: int
    graphs: list = field(default_factory=list)
    complete: bool = False

    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.graphs)}

    def __len__(self):
        return len(self.graphs)


# -- sector predicates ---------------------------------------------------------

def in_sector(g: HairyGraph, sector: Sector, flavor: Flavor) -> bool:
    if sector is Sector.ALL:
        return True
    if sector is Sector.TREES:
        return g.is_tree()
    if sector is Sector.UT:
        return g.is_tree() and g.count(EPSILON) == 1
    if sector is Sector.W0:
        return g.omega_count == 0
    if sector is Sector.PRIMED:
        return g.omega_count >= 1 and g.internal >= 1
    if sector is Sector.OMEGA_ONLY:
        return g.omega_count == len(g.hairs)
    raise ValueError(sector)


def _sector_shape_ok(sector, V, Hw, Hu, g_loop):
    if sector is Sector.TREES:
        return g_loop == 0
    if sector is Sector.UT:
        return g_loop == 0 and Hu == 1
    if sector is Sector.W0:
        return Hw == 0
    if sector is Sector.PRIMED:
        return Hw >= 1 and V >= 1
    if sector is Sector.OMEGA_ONLY:
        return Hu == 0
    return True


# -- feasibility / completeness --------------------------------------------------

def feasible_shapes(p: Parameters, flavor: Flavor, deg: int, sector: Sector = Sector.ALL):
    """All ``(V, H_omega, H_unit, E)`` that a nonzero graph of degree ``deg`` could have.

    Necessary conditions only: degree formula, connectivity, valence >= 3,
    at least one hair, and the parity rules that kill tadpoles (n odd),
    multiple edges and doubled unit hairs (n even) and doubled omega-hairs
    (n - m even).  The region is finite because n - m >= 3.
    """
    n, m = p.n, p.m
    sector = Sector(sector)
    budget = deg + n - 3
    out = []
    if budget < 0:
        return out
    max_w = budget // (n - m - 2)
    max_u = 0 if flavor is Flavor.ABAR else budget // (n - 2)
    max_g = budget // (n - 3)
    for Hw in range(max_w + 1):
        for Hu in range(max_u + 1):
            H = Hw + Hu
            if H == 0:
                continue
            for g_loop in range(max_g + 1):
                V = (n - 1 - m) * Hw + (n - 1) * (Hu + g_loop - 1) - deg
                if V < 0:
                    continue
                E = V + H + g_loop - 1
                if (n - 1) * E - n * V - m * Hw != deg:
                    continue
                if V == 0:
                    if not (H == 2 and E == 1):
                        continue
                    if Hw == 2 and (n - m) % 2 == 1:
                        continue
                    if Hu == 2 and n % 2 == 1:
                        continue
                else:
                    if 2 * E < 3 * V + H:
                        continue
                    core_edges = E - H
                    if n % 2 == 0:
                        if core_edges > V * (V + 1) // 2 or Hu > V:
                            continue
                    else:
                        if V == 1 and core_edges > 0:
                            continue
                    if (n - m) % 2 == 0 and Hw > V:
                        continue
                if not _sector_shape_ok(sector, V, Hw, Hu, g_loop):
                    continue
                out.append((V, Hw, Hu, E))
    return out


def slice_complete(w: Window, deg: int) -> bool:
    return all(w.contains_shape(V, Hw + Hu, E) for V, Hw, Hu, E in feasible_shapes(w.params, w.flavor, deg, w.sector))


def window_for_degrees(p: Parameters, flavor: Flavor, degrees, sector: Sector = Sector.ALL) -> Window:
    """Smallest window in which every slice of ``degrees`` is complete."""
    V = H = 0
    E = 0
    for d in degrees:
        for v, hw, hu, e in feasible_shapes(p, flavor, d, sector):
            V, H, E = max(V, v), max(H, hw + hu), max(E, e)
    return Window(V, H, flavor, p, sector, max_edges=E)


# -- core generation -------------------------------------------------------------

def _core_key(V, edges):
    """Canonical form of a hairless multigraph (used only for deduplication)."""
    kernel = _canon_ext if _canon_ext is not None else _canon_py
    labels, _ = kernel.canon_label(V, (), tuple(edges), False, False)
    return tuple(sorted((min(labels[a], labels[b]), max(labels[a], labels[b])) for a, b in edges))


@lru_cache(maxsize=256)
def connected_cores(V: int, max_core_edges: int, n_odd: bool) -> tuple:
    """Connected multigraphs on ``V`` vertices up to isomorphism, as edge lists.

    Odd ``n``: no tadpoles, any multiplicity.  Even ``n``: at most one tadpole
    per vertex and no multiple edges.  Every connected graph has a vertex
    whose removal keeps it connected, so growing connected cores by one
    vertex at a time reaches all of them.
    """
    if V == 0:
        return ()
    if n_odd or max_core_edges < 1:
        cores = [()]
    else:
        cores = [(), ((0, 0),)]
    loop_opts = (0,) if n_odd else (0, 1)
    for k in range(1, V):
        seen = set()
        for core in cores:
            room = max_core_edges - len(core)
            for mults in _bounded_vectors(k, room, None if n_odd else 1):
                total = sum(mults)
                for loop in loop_opts:
                    if total + loop > room:
                        continue
                    new = list(core)
                    for i, c in enumerate(mults):
                        new.extend([(i, k)] * c)
                    if loop:
                        new.append((k, k))
                    seen.add(_core_key(k + 1, new))
        cores = list(seen)
    return tuple(sorted(cores))


def _bounded_vectors(k, room, cap):
    """Nonzero vectors of length ``k`` with entries in ``0..cap`` and sum ``<= room``."""
    def rec(i, left):
        if i == k:
            yield ()
            return
        top = left if cap is None else min(left, cap)
        for c in range(top + 1):
            for rest in rec(i + 1, left - c):
                yield (c,) + rest

    for vec in rec(0, room):
        if any(vec):
            yield vec


# -- dressing ------------------------------------------------------------------------

def _deco_multisets(size, decos):
    return list(itertools.combinations_with_replacement(decos, size))


def enumerate_window(w: Window, degrees=None, cap: int = DEFAULT_CAP) -> dict[int, BasisSlice]:
    """All nonzero canonical graphs in the window, grouped by degree.

    ``degrees`` restricts generation to the given degrees (everything else is
    skipped early).  Raises :class:`WindowTooLarge` when more than ``cap``
    candidate graphs would be examined.
    """
    p, flavor, sector = w.params, w.flavor, w.sector
    n_odd, m_odd = p.n_odd, p.m_odd
    decos = flavor.decorations
    wanted = None if degrees is None else set(degrees)
    found: dict[int, set] = {}
    examined = 0

    def consider(g: HairyGraph):
        nonlocal examined
        examined += 1
        if examined > cap:
            raise WindowTooLarge(f"more than {cap} candidate graphs in {w.describe()}")
        if not in_sector(g, sector, flavor):
            return
        canon, sign = canonicalize_parity(g, n_odd, m_odd)
        if sign == 0:
            return
        found.setdefault(degree(canon, p), set()).add(canon)

    # V = 0: one edge between two hairs
    if w.max_hairs >= 2 and w.max_edges >= 1:
        for a, b in itertools.combinations_with_replacement(decos, 2):
            g = HairyGraph(0, (a, b), ((0, 1),))
            if wanted is None or degree(g, p) in wanted:
                consider(g)

    # with a degree filter, only shapes allowed by the feasibility region matter
    plan = None
    if wanted is not None:
        plan = {}
        for d in wanted:
            for V, hw, hu, E in feasible_shapes(p, flavor, d, sector):
                if V >= 1 and w.contains_shape(V, hw + hu, E):
                    plan.setdefault(V, set()).add((E - hw - hu, hw + hu))

    omega_twins_vanish = (p.n - p.m) % 2 == 0
    for V in range(1, w.max_internal + 1):
        if plan is not None and V not in plan:
            continue
        max_core = w.max_edges - 1
        if plan is not None:
            max_core = max(ec for ec, _ in plan[V])
        for core in connected_cores(V, max_core, n_odd):
            cdeg = [0] * V
            for a, b in core:
                cdeg[a] += 1
                cdeg[b] += 1
            need = [max(0, 3 - c) for c in cdeg]
            min_h = max(1, sum(need))
            for H in range(min_h, w.max_hairs + 1):
                E = len(core) + H
                if E > w.max_edges:
                    break
                if plan is not None and (len(core), H) not in plan[V]:
                    continue
                if wanted is not None:
                    # degree depends only on the number of omega-hairs
                    base = (p.n - 1) * E - p.n * V
                    if not any(base - p.m * hw in wanted for hw in range(H + 1)):
                        continue
                for counts in _hair_counts(need, H):
                    per_vertex = []
                    for v, c in enumerate(counts):
                        opts = []
                        for ms in _deco_multisets(c, decos):
                            if omega_twins_vanish and ms.count(OMEGA) > 1:
                                continue
                            if not n_odd and (ms.count(ONE) > 1 or ms.count(EPSILON) > 1):
                                continue
                            opts.append(ms)
                        per_vertex.append(opts)
                    for choice in itertools.product(*per_vertex):
                        hw = sum(ms.count(OMEGA) for ms in choice)
                        if wanted is not None and (p.n - 1) * E - p.n * V - p.m * hw not in wanted:
                            continue
                        hairs = []
                        edges = list(core)
                        for v, ms in enumerate(choice):
                            for d in ms:
                                edges.append((v, V + len(hairs)))
                                hairs.append(d)
                        consider(HairyGraph(V, tuple(hairs), tuple(edges)))
    out = {}
    for d, graphs in found.items():
        if wanted is not None and d not in wanted:
            continue
        out[d] = BasisSlice(d, sorted(graphs, key=HairyGraph.sort_key), slice_complete(w, d))
    if wanted is not None:
        for d in wanted:
            out.setdefault(d, BasisSlice(d, [], slice_complete(w, d)))
    log.debug("window %s: examined %d candidates", w.describe(), examined)
    return dict(sorted(out.items()))


def _hair_counts(need, total):
    """Vectors ``c >= need`` with ``sum(c) == total``."""
    extra = total - sum(need)
    if extra < 0:
        return
    k = len(need)
    for bars in itertools.combinations(range(extra + k - 1), k - 1):
        prev = -1
        add = []
        for b in bars:
            add.append(b - prev - 1)
            prev = b
        add.append(extra + k - 2 - prev)
        yield tuple(x + y for x, y in zip(need, add))


def enumerate_degree(p: Parameters, flavor: Flavor, deg: int, sector: Sector = Sector.ALL) -> BasisSlice:
    """The complete basis of one degree (window derived from the feasible region)."""
    w = window_for_degrees(p, flavor, [deg], sector)
    return enumerate_window(w, degrees=[deg])[deg]


def tree_sector_nonpositive(p: Parameters, flavor: Flavor = Flavor.ABAR) -> dict[int, BasisSlice]:
    """Trees with all hairs omega in every degree <= 0 (finitely many)."""
    lo = min_tree_degree(p)
    out = {}
    for d in range(lo, 1):
        s = enumerate_degree(p, flavor, d, Sector.TREES)
        s.graphs = [g for g in s.graphs if g.omega_count == len(g.hairs)]
        out[d] = s
    return out


def min_tree_degree(p: Parameters) -> int:
    """Lowest degree an omega-only tree can have (the line graph or a trivalent tree)."""
    # omega-only trees: d = -V + (n-1-m) H - (n-1), V <= H - 2 (or V = 0, H = 2)
    best = (p.n - 1 - p.m) * 2 - (p.n - 1)
    H = 3
    while True:
        d = -(H - 2) + (p.n - 1 - p.m) * H - (p.n - 1)
        if d >= best and H > 3:
            break
        best = min(best, d)
        H += 1
        if H > 64:
            break
    return best


# -- on-disk cache ---------------------------------------------------------------------

CACHE_ENV = "HGC_CACHE_DIR"
_CACHE_FORMAT = 1


def _cache_path(w: Window, degrees):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = {"format": _CACHE_FORMAT, "window": w.describe(),
           "degrees": None if degrees is None else sorted(set(degrees))}
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
    return os.path.join(root, f"basis-{digest}.json")


def enumerate_cached(w: Window, degrees=None, cap: int = DEFAULT_CAP) -> dict[int, BasisSlice]:
    """``enumerate_window`` memoized in ``$HGC_CACHE_DIR`` (content-addressed JSON files)."""
    path = _cache_path(w, degrees)
    if path and os.path.exists(path):
        try:
            with open(path) as fh:
                data = json.load(fh)
            return {
                int(d): BasisSlice(int(d), [graph_from_obj(o)[0] for o in s["graphs"]], s["complete"])
                for d, s in data["slices"].items()
            }
        except (OSError, ValueError, KeyError) as exc:
            log.warning("ignoring unreadable cache file %s: %s", path, exc)
    out = enumerate_window(w, degrees, cap)
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = {"window": w.describe(), "slices": {
            str(d): {"complete": s.complete, "graphs": [graph_to_obj(g) for g in s.graphs]}
            for d, s in out.items()}}
        tmp = f"{path}.{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh, separators=(",", ":"))
        os.replace(tmp, path)
    return out
