import pytest
from hypothesis import given

from hgc import FormalSum, Flavor, Parameters, raw_named_graph
from hgc.complexes import (
    ConeElement, DifferentialKind, cone_differential, d_squared_failures, delta_join, delta_split,
    differential, inclusion_bar_to_full,
)

from strategies import GRID, basis_graph, small_basis

KIND_FLAVOR = [(DifferentialKind.SPLIT_ONLY, Flavor.ABAR), (DifferentialKind.FULL, Flavor.A),
               (DifferentialKind.PRIME, Flavor.APRIME)]


def named(name, p, flavor=Flavor.A):
    return FormalSum.inject(raw_named_graph(name), p, flavor)


@pytest.mark.parametrize("mn", GRID)
@pytest.mark.parametrize("kind,flavor", KIND_FLAVOR)
def test_d_squared_vanishes(mn, kind, flavor):
    p = Parameters(*mn)
    assert d_squared_failures(small_basis(p, flavor, 4, 4), p, kind) == []


@given(basis_graph(Flavor.A, 3, 3))
def test_differential_lowers_degree(pg):
    p, g = pg
    x = FormalSum(p, Flavor.A, {g: 1})
    assert differential(x).degrees() <= {x.degree() - 1}


@given(basis_graph(Flavor.A, 3, 3))
def test_full_differential_is_split_plus_join(pg):
    p, g = pg
    x = FormalSum(p, Flavor.A, {g: 1})
    assert differential(x) == delta_split(x) + delta_join(x)


@pytest.mark.parametrize("mn", GRID)
def test_named_differentials(mn):
    p = Parameters(*mn)
    L, D, T = named("L", p), named("D", p), named("T", p)
    if p.n % 2 == 0:
        assert differential(L) == D and not D.is_zero()
    else:
        assert differential(L).is_zero()
    assert differential(T).is_zero()


def test_split_only_kind_rejects_unit_hairs():
    p = Parameters(2, 6)
    with pytest.raises(ValueError):
        differential(named("L", p), DifferentialKind.SPLIT_ONLY)


@given(basis_graph(Flavor.ABAR, 3, 3))
def test_inclusion_is_a_chain_map(pg):
    p, g = pg
    x = FormalSum(p, Flavor.ABAR, {g: 1})
    assert inclusion_bar_to_full(differential(x)) == differential(inclusion_bar_to_full(x))


@given(basis_graph(Flavor.ABAR, 3, 3), basis_graph(Flavor.A, 3, 3))
def test_cone_differential_squares_to_zero(pa, pb):
    p, g = pa
    _, h = pb
    bar = FormalSum(p, Flavor.ABAR, {g: 1})
    deg = bar.degree() + 1
    full = FormalSum(p, Flavor.A, {x: 1 for x in small_basis(p, Flavor.A, 3, 3)
                                   if FormalSum(p, Flavor.A, {x: 1}).degree() == deg})
    c = ConeElement(bar, full)
    assert c.degree == deg
    assert cone_differential(cone_differential(c)).is_zero()


def test_cone_element_degree_mismatch():
    p = Parameters(2, 6)
    with pytest.raises(ValueError):
        ConeElement(named("Lomega", p, Flavor.ABAR), named("Lomega", p))
