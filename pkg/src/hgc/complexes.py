"""Differentials of the hairy graph complexes and the mapping cone of the
inclusion of the omega-only complex into the full one."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from . import surgery
from .formal import Accumulator, FormalSum
from .graphcore import ONE, OMEGA, Flavor, degree


class DifferentialKind(str, Enum):
    SPLIT_ONLY = "split"
    FULL = "full"
    PRIME = "prime"

    @property
    def flavor(self) -> Flavor:
        return {DifferentialKind.SPLIT_ONLY: Flavor.ABAR,
                DifferentialKind.FULL: Flavor.A,
                DifferentialKind.PRIME: Flavor.APRIME}[self]

    @classmethod
    def for_flavor(cls, flavor: Flavor) -> DifferentialKind:
        return {Flavor.ABAR: cls.SPLIT_ONLY, Flavor.A: cls.FULL, Flavor.APRIME: cls.PRIME}[flavor]


def _expand(x: FormalSum, op) -> FormalSum:
    acc = Accumulator(x.params)
    for g, c in x.terms.items():
        for h in op(g):
            acc.add(h, c)
    return acc.result(x.flavor)


def delta_split(x: FormalSum) -> FormalSum:
    """Sum over vertices and over splittings into two blocks of >= 2 half-edges."""
    return _expand(x, surgery.split_terms)


def delta_join(x: FormalSum) -> FormalSum:
    """Sum over hair subsets of size >= 2 fused into one hair (product decoration)."""
    if x.flavor is Flavor.ABAR:
        raise ValueError("delta_join is not defined on the omega-only complex")
    flavor = x.flavor
    return _expand(x, lambda g: surgery.join_terms(g, flavor))


def differential(x: FormalSum, kind: DifferentialKind | None = None) -> FormalSum:
    kind = DifferentialKind.for_flavor(x.flavor) if kind is None else DifferentialKind(kind)
    if kind.flavor is not x.flavor:
        raise ValueError(f"differential {kind.value} needs flavor {kind.flavor.value}, got {x.flavor.value}")
    acc = Accumulator(x.params)
    for g, c in x.terms.items():
        for h, e in _d_canonical(g, x.params, kind).items():
            acc.terms[h] = acc.terms.get(h, 0) + c * e
    return acc.result(x.flavor)


@lru_cache(maxsize=1 << 18)
def _d_canonical(g, params, kind: DifferentialKind) -> dict:
    """Differential of one canonical graph as ``{canonical graph: int}``."""
    acc = Accumulator(params)
    raw = surgery.split_terms(g)
    if kind is not DifferentialKind.SPLIT_ONLY:
        raw = raw + surgery.join_terms(g, kind.flavor)
    for h in raw:
        acc.add(h, 1)
    return {h: c for h, c in acc.terms.items() if c}


def d_graph(g, params, flavor) -> FormalSum:
    """Differential of a single canonical graph."""
    return differential(FormalSum(params, flavor, {g: 1}))


def inclusion_bar_to_full(x: FormalSum) -> FormalSum:
    if x.flavor is not Flavor.ABAR:
        raise ValueError("inclusion expects an omega-only sum")
    return FormalSum(x.params, Flavor.A, x.terms)


def inclusion_bar_to_prime(x: FormalSum) -> FormalSum:
    if x.flavor is not Flavor.ABAR:
        raise ValueError("inclusion expects an omega-only sum")
    return FormalSum(x.params, Flavor.APRIME, x.terms)


@dataclass(frozen=True)
class ConeElement:
    """Element ``(x, y)`` of the cone, ``x`` omega-only and ``y`` in the full complex.

    In cone degree ``k`` the omega-only part has graph degree ``k - 1``.
    """

    bar: FormalSum
    full: FormalSum

    def __post_init__(self):
        if self.bar.flavor is not Flavor.ABAR or self.full.flavor is not Flavor.A:
            raise ValueError("cone element needs (Abar, A) parts")
        if self.bar.params != self.full.params:
            raise ValueError("cone parts have different parameters")
        db, df = self.bar.degrees(), self.full.degrees()
        if db and df and {d + 1 for d in db} != df:
            raise ValueError(f"cone degree mismatch: bar degrees {sorted(db)}, full degrees {sorted(df)}")

    @property
    def degree(self):
        if self.full:
            return self.full.degree()
        if self.bar:
            return self.bar.degree() + 1
        return None

    def is_zero(self):
        return self.bar.is_zero() and self.full.is_zero()


def cone_differential(c: ConeElement) -> ConeElement:
    """``(x, y) -> (-d x, i(x) + d y)``."""
    bar = -differential(c.bar, DifferentialKind.SPLIT_ONLY)
    full = inclusion_bar_to_full(c.bar) + differential(c.full, DifferentialKind.FULL)
    return ConeElement(bar, full)


def omega_only(g) -> bool:
    return all(d == OMEGA for d in g.hairs)


def in_w0(g) -> bool:
    return OMEGA not in g.hairs


def has_unit_hair(g) -> bool:
    return ONE in g.hairs


__all__ = [
    "ConeElement",
    "DifferentialKind",
    "clear_caches",
    "cone_differential",
    "d_graph",
    "d_squared_failures",
    "degree",
    "delta_join",
    "delta_split",
    "differential",
    "inclusion_bar_to_full",
    "inclusion_bar_to_prime",
]


def clear_caches() -> None:
    """Drop memoized canonical forms and differentials (they grow with every window)."""
    from .graphcore import _canonicalize_cached

    _d_canonical.cache_clear()
    _canonicalize_cached.cache_clear()


def d_squared_failures(graphs, params, kind: DifferentialKind, limit: int = 10):
    """Graphs whose differential squared is nonzero (at most ``limit`` of them)."""
    kind = DifferentialKind(kind)
    bad = []
    for g in graphs:
        acc = {}
        for h, c in _d_canonical(g, params, kind).items():
            for k, e in _d_canonical(h, params, kind).items():
                acc[k] = acc.get(k, 0) + c * e
        if any(acc.values()):
            bad.append(g)
            if len(bad) >= limit:
                break
    return bad
