import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgc.basis import (
    BasisSlice, Sector, Window, enumerate_cached, enumerate_window, feasible_shapes,
    in_sector, window_for_degrees,
)
from hgc.graphcore import Flavor, Parameters, canonicalize, degree

from strategies import GRID, params

P25 = Parameters(2, 5)


def _all(w):
    return [g for s in enumerate_window(w).values() for g in s.graphs]


@pytest.mark.parametrize("mn", GRID)
@pytest.mark.parametrize("flavor", list(Flavor))
def test_basis_is_canonical_distinct_and_graded(mn, flavor):
    p = Parameters(*mn)
    w = Window(3, 4, flavor, p)
    slices = enumerate_window(w)
    seen = set()
    for d, s in slices.items():
        for g in s.graphs:
            g.validate(flavor)
            assert degree(g, p) == d
            c = canonicalize(g, p)
            assert c.canonical == g and c.sign == 1
            assert g not in seen
            seen.add(g)
            assert g.internal <= 3 and len(g.hairs) <= 4 and g.num_edges <= w.max_edges


@pytest.mark.parametrize("mn", GRID)
def test_degree_filter_agrees_with_full_enumeration(mn):
    p = Parameters(*mn)
    w = Window(4, 4, Flavor.A, p)
    full = enumerate_window(w)
    some = sorted(full)[::2]
    part = enumerate_window(w, degrees=some)
    for d in some:
        assert set(part[d].graphs) == set(full[d].graphs)
        assert part[d].complete == full[d].complete


@pytest.mark.parametrize("mn", GRID)
@pytest.mark.parametrize("sector", [Sector.TREES, Sector.OMEGA_ONLY, Sector.PRIMED])
def test_sector_windows_are_filters(mn, sector):
    p = Parameters(*mn)
    flavor = Flavor.APRIME if sector is Sector.PRIMED else Flavor.A
    inside = set(_all(Window(3, 3, flavor, p, sector)))
    expected = {g for g in _all(Window(3, 3, flavor, p)) if in_sector(g, sector, flavor)}
    assert inside == expected


@pytest.mark.parametrize("mn", GRID)
def test_complete_slices_do_not_grow(mn):
    """A slice flagged complete gains nothing in a larger window."""
    p = Parameters(*mn)
    small = enumerate_window(Window(3, 3, Flavor.ABAR, p))
    big = enumerate_window(Window(5, 5, Flavor.ABAR, p, max_edges=12))
    flagged = [d for d, s in small.items() if s.complete]
    assert flagged
    for d in flagged:
        assert set(small[d].graphs) == set(big.get(d, BasisSlice(d)).graphs)


@given(params, st.integers(-4, 8), st.sampled_from(list(Flavor)))
def test_feasible_shapes_obey_degree_formula(p, d, flavor):
    for V, hw, hu, E in feasible_shapes(p, flavor, d):
        assert (p.n - 1) * E - p.n * V - p.m * hw == d
        assert hw + hu >= 1
        if flavor is Flavor.ABAR:
            assert hu == 0


@given(params, st.integers(-3, 5))
def test_window_for_degrees_certifies(p, d):
    w = window_for_degrees(p, Flavor.ABAR, [d])
    s = enumerate_window(w, degrees=[d])[d]
    assert s.complete


def test_window_validation():
    with pytest.raises(ValueError):
        Window(2, 2, Flavor.A, P25, Sector.UT)
    with pytest.raises(ValueError):
        Window(2, 2, Flavor.ABAR, P25, Sector.W0)
    with pytest.raises(ValueError):
        Window(-1, 2, Flavor.A, P25)
    assert Window(3, 4, Flavor.A, P25).max_edges == 7


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("HGC_CACHE_DIR", str(tmp_path))
    w = Window(3, 3, Flavor.A, P25)
    first = enumerate_cached(w)
    files = list(tmp_path.glob("basis-*.json"))
    assert len(files) == 1
    second = enumerate_cached(w)
    assert {d: (s.graphs, s.complete) for d, s in first.items()} == \
        {d: (s.graphs, s.complete) for d, s in second.items()}
    enumerate_cached(w, degrees=[1])
    assert len(list(tmp_path.glob("basis-*.json"))) == 2


def test_corrupt_cache_is_ignored(tmp_path, monkeypatch):
    monkeypatch.setenv("HGC_CACHE_DIR", str(tmp_path))
    w = Window(2, 2, Flavor.A, P25)
    enumerate_cached(w)
    (f,) = tmp_path.glob("basis-*.json")
    f.write_text("{not json")
    assert enumerate_cached(w) == enumerate_window(w)
