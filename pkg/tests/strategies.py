"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from hgc.basis import Window, enumerate_window
from hgc.graphcore import Flavor, Parameters, relabel

GRID = [(2, 5), (2, 6), (3, 6), (3, 7)]

params = st.sampled_from(GRID).map(lambda mn: Parameters(*mn))

_BASES = {}


def small_basis(p: Parameters, flavor: Flavor, max_v=3, max_h=3):
    key = (p, flavor, max_v, max_h)
    if key not in _BASES:
        w = Window(max_v, max_h, flavor, p)
        _BASES[key] = [g for s in enumerate_window(w).values() for g in s.graphs]
    return _BASES[key]


@st.composite
def basis_graph(draw, flavor=Flavor.A, max_v=3, max_h=3):
    p = draw(params)
    graphs = small_basis(p, flavor, max_v, max_h)
    return p, draw(st.sampled_from(graphs))


@st.composite
def scrambled(draw, g):
    """A random relabelling of ``g``: vertex and hair permutations, edge order, flips."""
    V, H = g.internal, len(g.hairs)
    nodes = draw(st.permutations(range(V)))
    hairs = draw(st.permutations(range(V, V + H)))
    order = draw(st.permutations(range(g.num_edges)))
    flips = draw(st.sets(st.integers(0, max(g.num_edges - 1, 0))))
    return relabel(g, list(nodes) + list(hairs), list(order), sorted(flips))
