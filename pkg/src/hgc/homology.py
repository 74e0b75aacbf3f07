"""Differential matrices, exact Betti numbers and the mapping cone.

Homological grading: every differential lowers the degree by one, so the
matrix in degree ``d`` maps the degree ``d`` slice to the degree ``d - 1``
slice.  A Betti number is *certified* when the three slices it depends on are
complete, i.e. contain every graph of their degree in the sector.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction

from .basis import (
    BasisSlice,
    Sector,
    Window,
    enumerate_cached,
    in_sector,
    window_for_degrees,
)
from .complexes import ConeElement, DifferentialKind, _d_canonical, cone_differential
from .formal import FormalSum
from .graphcore import Flavor, Parameters
from .linalg import in_column_span, sparse_rank


class InternalConsistencyError(RuntimeError):
    """A computation contradicted a structural guarantee (e.g. a complete slice missed a term)."""


@dataclass
class DifferentialMatrix:
    degree: int
    rows: BasisSlice
    cols: BasisSlice
    columns: list  # one {row index: Fraction} per column
    leaked: bool = False

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def dense(self):
        out = [[Fraction(0)] * len(self.cols) for _ in range(len(self.rows))]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = Fraction(v)
        return out

    def rank(self) -> int:
        return rank_exact(self)


@dataclass
class BettiReport:
    degree: int
    kernel_dim: int
    image_dim: int
    betti: int
    certified: bool

    def to_obj(self):
        return asdict(self)


class ClassStatus(str, Enum):
    NOT_CYCLE = "NotCycle"
    BOUNDARY = "Boundary"
    NONTRIVIAL = "NontrivialInWindow"


@dataclass
class ClassCheck:
    status: ClassStatus
    certified: bool


def rank_exact(m: DifferentialMatrix) -> int:
    return sparse_rank(m.columns)


def _column(g, params, kind, sector, flavor, index, rows_complete):
    col = {}
    leaked = False
    for h, c in _d_canonical(g, params, kind).items():
        if not in_sector(h, sector, flavor):
            raise InternalConsistencyError(f"sector {sector.value} not closed: d({g}) contains {h}")
        i = index.get(h)
        if i is None:
            if rows_complete:
                raise InternalConsistencyError(f"d({g}) contains {h}, missing from a complete slice")
            leaked = True
            continue
        col[i] = Fraction(c)
    return col, leaked


def assemble_matrix(slices: dict, d: int, params: Parameters, flavor: Flavor,
                    sector: Sector = Sector.ALL, kind: DifferentialKind | None = None) -> DifferentialMatrix:
    """Matrix of the differential from ``slices[d]`` to ``slices[d - 1]``."""
    kind = DifferentialKind.for_flavor(flavor) if kind is None else DifferentialKind(kind)
    rows = slices.get(d - 1)
    cols = slices.get(d)
    if rows is None:
        rows = BasisSlice(d - 1, [], False)
    if cols is None:
        cols = BasisSlice(d, [], False)
    index = rows.index()
    columns = []
    leaked = False
    for g in cols.graphs:
        col, lk = _column(g, params, kind, Sector(sector), flavor, index, rows.complete)
        columns.append(col)
        leaked |= lk
    return DifferentialMatrix(d, rows, cols, columns, leaked)


class SectorComplex:
    """One sector of one complex, enumerated lazily by degree.

    With ``window=None`` every requested slice is enumerated in a window
    sized from the feasible-shape region, so all slices are complete.
    """

    def __init__(self, params: Parameters, flavor: Flavor, sector: Sector = Sector.ALL,
                 window: Window | None = None, kind: DifferentialKind | None = None):
        self.params = params
        self.flavor = Flavor(flavor)
        self.sector = Sector(sector)
        self.window = window
        self.kind = DifferentialKind.for_flavor(self.flavor) if kind is None else DifferentialKind(kind)
        self._slices: dict[int, BasisSlice] = {}
        self._ranks: dict[int, int] = {}

    def ensure(self, degrees):
        need = sorted(set(degrees) - set(self._slices))
        if not need:
            return
        w = self.window or window_for_degrees(self.params, self.flavor, need, self.sector)
        got = enumerate_cached(w, degrees=need)
        for d in need:
            self._slices[d] = got[d]

    def slice(self, d) -> BasisSlice:
        self.ensure([d])
        return self._slices[d]

    def matrix(self, d) -> DifferentialMatrix:
        self.ensure([d - 1, d])
        return assemble_matrix(self._slices, d, self.params, self.flavor, self.sector, self.kind)

    def rank(self, d) -> tuple[int, bool]:
        """Rank of the degree ``d`` matrix and whether it is trustworthy."""
        m = self.matrix(d)
        ok = m.rows.complete and m.cols.complete and not m.leaked
        if d not in self._ranks:
            self._ranks[d] = rank_exact(m)
        return self._ranks[d], ok

    def betti(self, d) -> BettiReport:
        self.ensure([d - 1, d, d + 1])
        r_out, ok_out = self.rank(d)
        r_in, ok_in = self.rank(d + 1)
        dim = len(self._slices[d])
        kernel = dim - r_out
        b = kernel - r_in
        if b < 0:
            raise InternalConsistencyError(f"negative Betti number in degree {d}")
        certified = ok_out and ok_in and self._slices[d].complete
        return BettiReport(d, kernel, r_in, b, certified)

    def class_check(self, x: FormalSum) -> ClassCheck:
        """Is ``x`` a cycle, a boundary, or a class not hit from inside the window?"""
        d = x.degree()
        if d is None:
            return ClassCheck(ClassStatus.BOUNDARY, True)
        self.ensure([d - 1, d, d + 1])
        dx = {}
        for g, c in x.terms.items():
            for h, e in _d_canonical(g, self.params, self.kind).items():
                if in_sector(h, self.sector, self.flavor):
                    dx[h] = dx.get(h, 0) + c * e
        if any(dx.values()):
            return ClassCheck(ClassStatus.NOT_CYCLE, True)
        index = self._slices[d].index()
        target = {}
        for g, c in x.terms.items():
            if g not in index:
                raise InternalConsistencyError(f"{g} is not in the degree {d} basis of the window")
            target[index[g]] = c
        m = self.matrix(d + 1)
        certified = m.rows.complete and m.cols.complete and not m.leaked
        if in_column_span(m.columns, target):
            return ClassCheck(ClassStatus.BOUNDARY, True)
        return ClassCheck(ClassStatus.NONTRIVIAL, certified)


def betti(w: Window, d: int, kind: DifferentialKind | None = None) -> BettiReport:
    return SectorComplex(w.params, w.flavor, w.sector, window=w, kind=kind).betti(d)


def certified_betti(params, flavor, d, sector=Sector.ALL) -> BettiReport:
    return SectorComplex(params, flavor, sector).betti(d)


def cycle_class_check(x: FormalSum, w: Window | None = None, kind=None, sector=Sector.ALL) -> ClassCheck:
    flavor = x.flavor if w is None else w.flavor
    return SectorComplex(x.params, flavor, sector if w is None else w.sector, window=w, kind=kind).class_check(x)


# -- mapping cone of the inclusion of the omega-only complex --------------------------

class ConeComplex:
    """Cone of the inclusion: degree ``k`` is (omega-only degree ``k-1``) + (full degree ``k``).

    Differential ``(x, y) -> (-d x, x + d y)``.
    """

    def __init__(self, params: Parameters, bar_window: Window | None = None, full_window: Window | None = None):
        self.params = params
        self.bar = SectorComplex(params, Flavor.ABAR, window=bar_window)
        self.full = SectorComplex(params, Flavor.A, window=full_window)
        self._ranks: dict[int, tuple[int, bool]] = {}

    def _basis(self, k):
        return self.bar.slice(k - 1), self.full.slice(k)

    def matrix_columns(self, k):
        """Columns of the cone differential ``C_k -> C_{k-1}`` and a trust flag."""
        self.bar.ensure([k - 2, k - 1])
        self.full.ensure([k - 1, k])
        bar_src, full_src = self._basis(k)
        bar_dst, full_dst = self._basis(k - 1)
        off = len(bar_dst)
        full_index = full_dst.index()
        mb = self.bar.matrix(k - 1)
        mf = self.full.matrix(k)
        trusted = (bar_src.complete and full_src.complete and bar_dst.complete and full_dst.complete
                   and not mb.leaked and not mf.leaked)
        cols = []
        for j, g in enumerate(bar_src.graphs):
            col = {i: -v for i, v in mb.columns[j].items()}
            i = full_index.get(g)
            if i is None:
                if full_dst.complete:
                    raise InternalConsistencyError(f"{g} missing from the full complex basis")
                trusted = False
            else:
                col[off + i] = col.get(off + i, 0) + 1
            cols.append(col)
        for col in mf.columns:
            cols.append({off + i: v for i, v in col.items()})
        return cols, trusted

    def rank(self, k):
        if k not in self._ranks:
            cols, ok = self.matrix_columns(k)
            self._ranks[k] = (sparse_rank(cols), ok)
        return self._ranks[k]

    def betti(self, k) -> BettiReport:
        bar_src, full_src = self._basis(k)
        dim = len(bar_src) + len(full_src)
        r_out, ok_out = self.rank(k)
        r_in, ok_in = self.rank(k + 1)
        kernel = dim - r_out
        b = kernel - r_in
        if b < 0:
            raise InternalConsistencyError(f"negative cone Betti number in degree {k}")
        return BettiReport(k, kernel, r_in, b, ok_out and ok_in)

    def class_check(self, c: ConeElement) -> ClassCheck:
        k = c.degree
        if k is None:
            return ClassCheck(ClassStatus.BOUNDARY, True)
        if not cone_differential(c).is_zero():
            return ClassCheck(ClassStatus.NOT_CYCLE, True)
        bar_src, full_src = self._basis(k)
        bi, fi = bar_src.index(), full_src.index()
        target = {}
        for g, v in c.bar.terms.items():
            target[bi[g]] = v
        for g, v in c.full.terms.items():
            target[len(bar_src) + fi[g]] = v
        cols, ok = self.matrix_columns(k + 1)
        if in_column_span(cols, target):
            return ClassCheck(ClassStatus.BOUNDARY, True)
        return ClassCheck(ClassStatus.NONTRIVIAL, ok)


def cone_betti(params: Parameters, k: int, bar_window=None, full_window=None) -> BettiReport:
    return ConeComplex(params, bar_window, full_window).betti(k)
