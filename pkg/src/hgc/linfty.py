"""The L-infinity operations on the full complex, Maurer-Cartan elements and twisting.

Conventions: shifted (``L-infinity[1]``) form.  Every operation has degree -1
and is graded symmetric in the graph degrees of its arguments; the unary
operation is the differential.  The generalized Jacobi identity in arity N is

    sum_{i=1..N} sum_{(i, N-i) unshuffles s} eps(s) l_{N-i+1}(l_i(x_s1..x_si), x_s(i+1)..x_sN) = 0

with ``eps`` the Koszul sign of the permutation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import surgery
from .complexes import DifferentialKind, differential
from .formal import Accumulator, FormalSum
from .graphcore import OMEGA, Flavor, degree


class NotMaurerCartan(ValueError):
    pass


def _ell_raw(graphs, params, flavor):
    """Raw signed graphs of ``l_r`` on single graphs (before canonicalization)."""
    union, sign = surgery.disjoint_union(graphs, params)
    offsets = []
    off = 0
    for g in graphs:
        offsets.append(off)
        off += len(g.hairs)
    choices = []
    for g, o in zip(graphs, offsets):
        H = len(g.hairs)
        opts = []
        for mask in range(1, 1 << H):
            idx = [o + j for j in range(H) if mask >> j & 1]
            w = sum(1 for j in range(H) if mask >> j & 1 and g.hairs[j] == OMEGA)
            opts.append((idx, w))
        choices.append(opts)
    out = []
    for combo in itertools.product(*choices):
        if sum(w for _, w in combo) > 1:
            continue
        subset = [j for idx, _ in combo for j in idx]
        prod = flavor.product([union.hairs[j] for j in subset])
        if prod is None:
            continue
        out.append((surgery.join_hairs(union, subset, prod), sign))
    return out


def ell(args) -> FormalSum:
    """``l_r(x_1, ..., x_r)`` for ``r >= 2``, extended multilinearly."""
    args = list(args)
    if len(args) < 2:
        raise ValueError("l_r needs r >= 2 arguments; use the differential for r = 1")
    params, flavor = args[0].params, args[0].flavor
    for a in args:
        if a.params != params or a.flavor != flavor:
            raise ValueError("arguments of l_r must share parameters and flavor")
    if flavor is Flavor.APRIME:
        raise ValueError("l_r is implemented for the flavors A and Abar")
    acc = Accumulator(params)
    if flavor is Flavor.ABAR:
        return acc.result(flavor)
    for terms in itertools.product(*(a.terms.items() for a in args)):
        coeff = math.prod((c for _, c in terms), start=Fraction(1))
        for g, s in _ell_raw([g for g, _ in terms], params, flavor):
            acc.add(g, s * coeff)
    return acc.result(flavor)


def bracket(a: FormalSum, b: FormalSum) -> FormalSum:
    return ell([a, b])


def _op(i, xs, kind):
    if i == 1:
        return differential(xs[0], kind)
    return ell(xs)


def _koszul(degs, perm) -> int:
    """Koszul sign of reordering elements of degrees ``degs`` into ``perm`` order."""
    s = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and degs[perm[a]] % 2 and degs[perm[b]] % 2:
                s ^= 1
    return -1 if s else 1


def jacobiator(xs) -> FormalSum:
    """Left side of the arity ``len(xs)`` identity; zero iff the identity holds."""
    xs = list(xs)
    N = len(xs)
    params, flavor = xs[0].params, xs[0].flavor
    kind = DifferentialKind.for_flavor(flavor)
    degs = [x.degree() or 0 for x in xs]
    total = FormalSum(params, flavor)
    for i in range(1, N + 1):
        for first in itertools.combinations(range(N), i):
            rest = [k for k in range(N) if k not in first]
            perm = list(first) + rest
            sign = _koszul(degs, perm)
            inner = _op(i, [xs[k] for k in first], kind)
            if inner.is_zero():
                continue
            outer_args = [inner] + [xs[k] for k in rest]
            outer = _op(N - i + 1, outer_args, kind)
            total = total + outer.scale(sign)
    return total


@dataclass
class RelationReport:
    arity: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def linfty_relation_check(arity: int, graphs, params, flavor=Flavor.A, sample=None, seed=0,
                          max_failures=5) -> RelationReport:
    """Check the arity 2 or 3 identity on tuples of basis graphs.

    ``sample=None`` checks every multiset of ``arity`` graphs; otherwise
    ``sample`` random tuples drawn with a seeded generator.
    """
    if arity not in (2, 3):
        raise ValueError("arity must be 2 or 3")
    graphs = list(graphs)
    if sample is None:
        tuples = itertools.combinations_with_replacement(range(len(graphs)), arity)
    else:
        rng = random.Random(seed)
        tuples = [tuple(rng.randrange(len(graphs)) for _ in range(arity)) for _ in range(sample)]
    rep = RelationReport(arity)
    for t in tuples:
        xs = [FormalSum(params, flavor, {graphs[k]: 1}) for k in t]
        rep.checked += 1
        if not jacobiator(xs).is_zero():
            rep.failures.append(tuple(graphs[k] for k in t))
            if len(rep.failures) >= max_failures:
                break
    return rep


def _series_length(pi: FormalSum) -> int:
    """Largest r for which l_r with r - 1 copies of ``pi`` can be nonzero.

    Every copy of an omega-only element contributes an omega-hair to the new
    vertex, and two omega-hairs multiply to zero, so at most one copy fits.
    """
    for g in pi.terms:
        if any(d != OMEGA for d in g.hairs):
            raise ValueError("Maurer-Cartan series is only evaluated for omega-only elements")
    return 1


def mc_curvature(pi: FormalSum) -> FormalSum:
    """``d pi + sum_{r>=2} l_r(pi, ..., pi) / r!``."""
    if pi.flavor is not Flavor.A:
        raise ValueError("Maurer-Cartan elements live in flavor A")
    out = differential(pi)
    if pi.is_zero():
        return out
    d = pi.degree()
    if d != 0:
        raise ValueError(f"Maurer-Cartan element must have degree 0, got {d}")
    top = _series_length(pi) + 1
    for r in range(2, top + 1):
        out = out + ell([pi] * r).scale(Fraction(1, math.factorial(r)))
    return out


def mc_check(pi: FormalSum) -> bool:
    return mc_curvature(pi).is_zero()


@dataclass(frozen=True)
class MCElement:
    value: FormalSum

    def __post_init__(self):
        if not mc_check(self.value):
            raise NotMaurerCartan("element does not satisfy the Maurer-Cartan equation")

    @property
    def flavor(self):
        return self.value.flavor


def twist_differential(pi, x: FormalSum) -> FormalSum:
    """``d^pi x = d x + sum_{r>=1} l_{r+1}(pi, ..., pi, x) / r!``."""
    if not isinstance(pi, MCElement):
        pi = MCElement(pi)
    p = pi.value
    out = differential(x)
    if p.is_zero() or x.is_zero():
        return out
    top = _series_length(p)
    for r in range(1, top + 1):
        out = out + ell([p] * r + [x]).scale(Fraction(1, math.factorial(r)))
    return out


__all__ = [
    "MCElement",
    "NotMaurerCartan",
    "RelationReport",
    "bracket",
    "degree",
    "ell",
    "jacobiator",
    "linfty_relation_check",
    "mc_check",
    "mc_curvature",
    "twist_differential",
]
