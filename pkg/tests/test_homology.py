import pytest

from hgc import FormalSum, Flavor, Parameters, raw_named_graph
from hgc.basis import Sector, Window
from hgc.complexes import ConeElement
from hgc.homology import (
    ClassStatus, ConeComplex, InternalConsistencyError, SectorComplex, assemble_matrix, betti,
)
from hgc.basis import enumerate_window


def named(name, p, flavor=Flavor.A):
    return FormalSum.inject(raw_named_graph(name), p, flavor)


def test_betti_report_is_certified_and_consistent():
    p = Parameters(3, 7)
    sc = SectorComplex(p, Flavor.ABAR, Sector.TREES)
    r = sc.betti(0)
    assert r.certified and r.betti == 1
    assert r.kernel_dim - r.image_dim == r.betti
    assert set(r.to_obj()) == {"degree", "kernel_dim", "image_dim", "betti", "certified"}


def test_small_window_is_not_certified():
    p = Parameters(2, 5)
    w = Window(1, 2, Flavor.A, p)
    assert not betti(w, 4).certified


def test_matrix_times_matrix_is_zero():
    p = Parameters(2, 6)
    sc = SectorComplex(p, Flavor.A)
    for d in range(1, 5):
        a, b = sc.matrix(d).dense(), sc.matrix(d + 1).dense()
        if a and b and a[0] and b[0]:
            prod = [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
                    for i in range(len(a))]
            assert not any(any(row) for row in prod)


def test_class_check_statuses():
    p = Parameters(2, 6)
    full = SectorComplex(p, Flavor.A)
    assert full.class_check(named("L", p)).status is ClassStatus.NOT_CYCLE
    assert full.class_check(named("D", p)).status is ClassStatus.BOUNDARY
    bar = SectorComplex(p, Flavor.ABAR).class_check(named("D", p, Flavor.ABAR))
    assert bar.status is ClassStatus.NONTRIVIAL and bar.certified


def test_non_closed_sector_is_reported():
    # joining two hairs of one tree closes a cycle, so trees are not a subcomplex of A
    p = Parameters(2, 6)
    slices = enumerate_window(Window(3, 4, Flavor.A, p, Sector.TREES))
    with pytest.raises(InternalConsistencyError):
        for d in slices:
            assemble_matrix(slices, d, p, Flavor.A, Sector.TREES)


def test_cone_classes_at_odd_n():
    p = Parameters(2, 5)
    cone = ConeComplex(p)
    zero = FormalSum(p, Flavor.ABAR)
    for name in ("L", "T"):
        c = cone.class_check(ConeElement(zero, named(name, p)))
        assert c.status is ClassStatus.NONTRIVIAL and c.certified
    r = cone.betti(p.n - p.m - 1)
    assert r.betti == 1 and r.certified


def test_cone_class_of_d_at_even_n():
    p = Parameters(2, 6)
    c = ConeComplex(p).class_check(ConeElement(named("D", p, Flavor.ABAR), -named("L", p)))
    assert c.status is ClassStatus.NONTRIVIAL and c.certified
