"""End-to-end verification suite shared by ``hgc verify-all`` and the tests.

Each check returns a :class:`CheckResult` whose ``details`` record what was
examined, so a report is self-describing.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .basis import Sector, Window, enumerate_cached
from .complexes import ConeElement, DifferentialKind, clear_caches, d_squared_failures, differential
from .formal import FormalSum
from .graphcore import (
    Flavor,
    Parameters,
    canonicalize,
    canonicalize_brute_force,
    degree,
    raw_named_graph,
    relabel,
)
from .homology import ClassStatus, ConeComplex, SectorComplex
from .linfty import MCElement, bracket, linfty_relation_check, mc_check, twist_differential
from .phimap import (
    PrimedElement,
    _apply,
    ad_s_power,
    b_j_sum,
    b_op,
    conjugated_formula,
    genuine_part,
    inclusion_exclusion_check,
    verify_phi,
)

SMALL_GRID = ((2, 5), (2, 6), (3, 6), (3, 7))
H0_GRID = ((3, 7), (3, 6), (2, 5), (2, 6), (3, 8), (4, 7))
# highest cone / sector degree examined per grid point (all certified, seconds each)
DEGREE_CAP = {(2, 5): 6, (2, 6): 12, (3, 6): 7, (3, 7): 12}


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name} ({self.seconds:.1f}s)"


def _timed(number, name, fn, *args, **kwargs) -> CheckResult:
    clear_caches()
    t = time.perf_counter()
    passed, details = fn(*args, **kwargs)
    return CheckResult(number, name, bool(passed), details, time.perf_counter() - t)


def _named(name, p, flavor=Flavor.A):
    return FormalSum.inject(raw_named_graph(name), p, flavor)


def _basis(w: Window):
    return [g for s in enumerate_cached(w).values() for g in s.graphs]


# -- individual criteria ------------------------------------------------------------------

def d_squared(grid=SMALL_GRID, max_v=5, max_h=5):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        for kind in DifferentialKind:
            graphs = _basis(Window(max_v, max_h, kind.flavor, p))
            bad = d_squared_failures(graphs, p, kind)
            details[f"{m},{n},{kind.value}"] = {"graphs": len(graphs), "failures": [str(g) for g in bad]}
            ok &= not bad
            clear_caches()
    return ok, details


def named_identities(grid=SMALL_GRID):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        L, D, T = _named("L", p), _named("D", p), _named("T", p)
        Lp, Dp = _named("Lprime", p), _named("Dprime", p)
        res = {}
        if n % 2 == 0:
            res["dL=D"] = differential(L) == D and not D.is_zero()
            res["dL'=D'"] = differential(Lp) == Dp and not Dp.is_zero()
        else:
            res["dL=0"] = differential(L).is_zero()
            res["D=0"] = D.is_zero()
        res["dT=0"] = differential(T).is_zero()
        if n % 2 == 1 and m % 2 == 0:
            res["[L,L]=T"] = bracket(L, L) == T and not T.is_zero()
        if (n - m) % 2 == 0:
            w_only = [g for g in _basis(Window(2, 3, Flavor.A, p)) if g.omega_count == len(g.hairs)]
            res["omega-only brackets vanish"] = all(
                bracket(FormalSum(p, Flavor.A, {a: 1}), FormalSum(p, Flavor.A, {b: 1})).is_zero()
                for a in w_only for b in w_only)
        details[f"{m},{n}"] = res
        ok &= all(res.values())
    return ok, details


PARITY_PREDICATES = {
    "L": (Flavor.A, lambda m, n: True),
    "D": (Flavor.A, lambda m, n: n % 2 == 0),
    "T": (Flavor.A, lambda m, n: (n - m) % 2 == 1),
    "Lprime": (Flavor.A, lambda m, n: n % 2 == 0),
    "Dprime": (Flavor.A, lambda m, n: n % 2 == 0),
    "Lsecond": (Flavor.ABAR, lambda m, n: (n - m) % 2 == 0),
}


def parity_table(grid=SMALL_GRID):
    rows = []
    for m, n in grid:
        p = Parameters(m, n)
        for name, (_, pred) in PARITY_PREDICATES.items():
            nonzero = canonicalize(raw_named_graph(name), p).sign != 0
            rows.append({"m": m, "n": n, "graph": name, "nonzero": nonzero,
                         "expected": pred(m, n), "match": nonzero == pred(m, n)})
    return all(r["match"] for r in rows), {"cells": len(rows),
                                           "matches": sum(r["match"] for r in rows), "rows": rows}


def degree_formula(grid=((2, 5), (2, 6), (3, 6), (3, 7))):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        got = {
            "example": (degree(raw_named_graph("FourVertex"), p), 4 * n - 2 * m - 8),
            "L": (degree(raw_named_graph("L"), p), n - m - 1),
            "D": (degree(raw_named_graph("D"), p), n - m - 2),
            "T": (degree(raw_named_graph("T"), p), 2 * n - 2 * m - 3),
        }
        details[f"{m},{n}"] = got
        ok &= all(a == b for a, b in got.values())
    return ok, details


def phi_checks(grid=((2, 5), (3, 6)), max_v=4, max_h=4):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        graphs = _basis(Window(max_v, max_h, Flavor.APRIME, p, Sector.PRIMED))
        rep = verify_phi(graphs, p)
        details[f"{m},{n}"] = rep.summary()
        ok &= rep.passed and rep.checked > 0
        # commutators with s produce the B_J sums, and the conjugated d' is d on unit-decorated graphs
        b_bad = 0
        for g in graphs:
            x = FormalSum(p, Flavor.APRIME, {g: 1})
            for j in (1, 2):
                lhs = ad_s_power(lambda y: _apply(y, lambda h: b_op(h, ())), x, j)
                b_bad += lhs.scale(Fraction(1, math.factorial(j))) != b_j_sum(x, j)
        conj_bad = 0
        for g in _basis(Window(max_v, max_h, Flavor.A, p, Sector.PRIMED)):
            x = FormalSum(p, Flavor.A, {g: 1})
            conj_bad += genuine_part(conjugated_formula(x)) != differential(x)
        details[f"{m},{n}"].update(ad_s_failures=b_bad, conjugated_failures=conj_bad)
        ok &= b_bad == 0 and conj_bad == 0
    ie = all(inclusion_exclusion_check(k) for k in range(6)) and inclusion_exclusion_check(5, "random", 7)
    details["inclusion_exclusion"] = ie
    return ok and ie, details


def linfty_relations(grid=SMALL_GRID, samples=20, seed=2024):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        graphs = _basis(Window(2, 3, Flavor.A, p))
        r2 = linfty_relation_check(2, graphs, p)
        r3 = linfty_relation_check(3, graphs, p, sample=samples, seed=seed)
        details[f"{m},{n}"] = {"graphs": len(graphs), "arity2_checked": r2.checked, "arity2_passed": r2.passed,
                               "arity3_checked": r3.checked, "arity3_passed": r3.passed}
        ok &= r2.passed and r3.passed and r3.checked >= samples
    return ok, details


def mc_and_twist():
    details = {}
    p37, p36 = Parameters(3, 7), Parameters(3, 6)
    lw, tw = _named("Lomega", p37), _named("Tomega", p36)
    details["mc(Lomega)"] = mc_check(lw) and mc_check(lw.scale(5))
    details["mc(Tomega)"] = mc_check(tw) and mc_check(tw.scale(-3))
    pi_l = MCElement(lw)
    graphs = _basis(Window(5, 5, Flavor.A, p37))
    changed = [g for g in graphs
               if twist_differential(pi_l, FormalSum(p37, Flavor.A, {g: 1})) != differential(FormalSum(p37, Flavor.A, {g: 1}))]
    details["Lomega twist graphs"] = len(graphs)
    details["Lomega twist trivial"] = not changed
    pi_t = MCElement(tw)
    graphs = _basis(Window(4, 4, Flavor.A, p36))
    differs = 0
    bad = 0
    for g in graphs:
        x = FormalSum(p36, Flavor.A, {g: 1})
        y = twist_differential(pi_t, x)
        differs += y != differential(x)
        bad += not twist_differential(pi_t, y).is_zero()
    details["Tomega window graphs"] = len(graphs)
    details["Tomega twist differs on"] = differs
    details["Tomega twisted d^2 failures"] = bad
    ok = (details["mc(Lomega)"] and details["mc(Tomega)"] and not changed and differs > 0 and bad == 0)
    return ok, details


def h0_detection(grid=H0_GRID):
    details = {}
    ok = True
    expected_one = {(3, 7), (3, 6)}
    for m, n in grid:
        p = Parameters(m, n)
        tree = SectorComplex(p, Flavor.ABAR, Sector.TREES).betti(0)
        full = SectorComplex(p, Flavor.ABAR)
        reps = [full.betti(d) for d in range(3 - n, 1)]
        total = sum(r.betti for r in reps)
        certified = tree.certified and all(r.certified for r in reps)
        want = 1 if (m, n) in expected_one else 0
        details[f"{m},{n}"] = {"tree_betti_0": tree.betti, "expected": want,
                               "total_nonpositive": total, "certified": certified}
        ok &= certified and tree.betti == want and total <= 1
    return ok, details


def ut_sector(grid=((2, 5), (2, 6))):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        sc = SectorComplex(p, Flavor.APRIME, Sector.UT)
        hi = DEGREE_CAP[(m, n)]
        reps = [sc.betti(d) for d in range(3 - n, hi + 1)]
        nonzero = {r.degree: r.betti for r in reps if r.betti}
        want = {n - m - 1: 1}
        if (n - m) % 2:
            want[2 * n - 2 * m - 3] = 1
        certified = all(r.certified for r in reps)
        details[f"{m},{n}"] = {"degrees": [3 - n, hi], "nonzero": nonzero, "expected": want, "certified": certified}
        ok &= certified and nonzero == want
    return ok, details


def cone_classes(grid=SMALL_GRID):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        cone = ConeComplex(p)
        hi = DEGREE_CAP[(m, n)]
        reps = [cone.betti(k) for k in range(3 - n, hi + 1)]
        nonzero = {r.degree: r.betti for r in reps if r.betti}
        uncertified = [r.degree for r in reps if not r.certified]
        L, D, T = _named("L", p), _named("D", p), _named("T", p)
        zero_bar = FormalSum(p, Flavor.ABAR)
        want = {}
        res = {}
        if n % 2 == 0:
            Dbar = _named("D", p, Flavor.ABAR)
            bar = SectorComplex(p, Flavor.ABAR).class_check(Dbar)
            full = SectorComplex(p, Flavor.A).class_check(D)
            lcheck = SectorComplex(p, Flavor.A).class_check(L)
            dcone = cone.class_check(ConeElement(Dbar, -L))
            res["D nontrivial in Abar"] = bar.status is ClassStatus.NONTRIVIAL and bar.certified
            res["D boundary in A"] = full.status is ClassStatus.BOUNDARY
            res["L not a cycle in A"] = lcheck.status is ClassStatus.NOT_CYCLE
            res["(D,-L) cone class"] = dcone.status is ClassStatus.NONTRIVIAL and dcone.certified
            want[n - m - 1] = 1
        else:
            lc = cone.class_check(ConeElement(zero_bar, L))
            res["L cone class"] = lc.status is ClassStatus.NONTRIVIAL and lc.certified
            want[n - m - 1] = 1
        if (n - m) % 2:
            tc = cone.class_check(ConeElement(zero_bar, T))
            res["T cone class"] = tc.status is ClassStatus.NONTRIVIAL and tc.certified
            want[2 * n - 2 * m - 3] = want.get(2 * n - 2 * m - 3, 0) + 1
        res["no other classes"] = nonzero == want
        details[f"{m},{n}"] = {"degrees": [3 - n, hi], "nonzero": nonzero, "expected": want,
                               "uncertified": uncertified, "checks": res}
        ok &= all(res.values()) and not uncertified
    return ok, details


def oracle_equivalence(grid=SMALL_GRID, max_v=4, max_h=4, matrices=50, seed=11):
    rng = random.Random(seed)
    details = {}
    mismatches = 0
    checked = 0
    for m, n in grid:
        p = Parameters(m, n)
        for flavor in Flavor:
            for g in _basis(Window(max_v, max_h, flavor, p)):
                V, H = g.internal, len(g.hairs)
                nodes = list(range(V))
                hairs = list(range(V, V + H))
                rng.shuffle(nodes)
                rng.shuffle(hairs)
                order = list(range(g.num_edges))
                rng.shuffle(order)
                flips = [i for i in range(g.num_edges) if rng.random() < 0.5]
                h = relabel(g, nodes + hairs, order, flips)
                checked += 1
                if canonicalize(h, p) != canonicalize_brute_force(h, p):
                    mismatches += 1
    details["graphs"] = checked
    details["canonical_mismatches"] = mismatches
    rank_bad = 0
    for _ in range(matrices):
        r, c = rng.randint(1, 14), rng.randint(1, 14)
        dense = [[rng.choice((0, 0, 0, 1, -1, 2, -3)) for _ in range(c)] for _ in range(r)]
        if r > 2 and rng.random() < 0.5:
            dense[-1] = [a - 2 * b for a, b in zip(dense[0], dense[1])]
        rows = [{j: v for j, v in enumerate(row) if v} for row in dense]
        rank_bad += linalg.sparse_rank(rows) != linalg.dense_rank(dense)
    details["rank_matrices"] = matrices
    details["rank_mismatches"] = rank_bad
    return mismatches == 0 and rank_bad == 0 and checked > 0, details


# highest degree tested per point; one past each cap the next slice gets expensive
W0_CAP = {(2, 5): 9, (2, 6): 14, (3, 6): 14, (3, 7): 18}


def w0_acyclic(grid=SMALL_GRID, top=None):
    details = {}
    ok = True
    for m, n in grid:
        p = Parameters(m, n)
        sc = SectorComplex(p, Flavor.A, Sector.W0)
        hi = top if top is not None else W0_CAP.get((m, n), 3 * (n - 1))
        reps = [sc.betti(d) for d in range(3 - n, hi + 1)]
        dims = sum(len(sc.slice(r.degree)) for r in reps)
        bad = [r.degree for r in reps if r.betti or not r.certified]
        details[f"{m},{n}"] = {"degrees": [3 - n, hi], "basis_graphs": dims, "bad_degrees": bad}
        ok &= not bad
    return ok, details


CRITERIA = (
    (1, "d^2 = 0 sweep", d_squared),
    (2, "named identities", named_identities),
    (3, "parity table", parity_table),
    (4, "degree formula", degree_formula),
    (5, "comparison map", phi_checks),
    (6, "L-infinity relations", linfty_relations),
    (7, "Maurer-Cartan and twist", mc_and_twist),
    (8, "H_0 detection", h0_detection),
    (9, "U^t sector", ut_sector),
    (10, "mapping cone", cone_classes),
    (11, "oracle equivalence", oracle_equivalence),
    (12, "W_0 acyclicity", w0_acyclic),
)


CRITERIA_BY_NUMBER = {num: (name, fn) for num, name, fn in CRITERIA}


def run_criterion(number: int, **kwargs) -> CheckResult:
    for num, name, fn in CRITERIA:
        if num == number:
            return _timed(num, name, fn, **kwargs)
    raise KeyError(number)


def run_all(numbers=None, progress=None) -> list[CheckResult]:
    out = []
    for num, name, fn in CRITERIA:
        if numbers and num not in numbers:
            continue
        res = _timed(num, name, fn)
        if progress:
            progress(res)
        out.append(res)
    return out


def _run_one(num) -> CheckResult:
    return run_criterion(num)


def run_parallel(numbers=None, jobs=2, progress=None) -> list[CheckResult]:
    """Like :func:`run_all` but spread over ``jobs`` processes; results keep criterion order."""
    from concurrent.futures import ProcessPoolExecutor

    nums = [num for num, _, _ in CRITERIA if not numbers or num in numbers]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        out = list(pool.map(_run_one, nums))
    if progress:
        for r in out:
            progress(r)
    return out


__all__ = ["CRITERIA", "CRITERIA_BY_NUMBER", "CheckResult", "PrimedElement", "run_all", "run_criterion",
           "run_parallel"]
