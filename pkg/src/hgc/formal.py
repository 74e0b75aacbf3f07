"""Exact rational linear combinations of canonical hairy graphs."""

from __future__ import annotations

import json
from fractions import Fraction

from .graphcore import (
    Flavor,
    GraphError,
    HairyGraph,
    Parameters,
    canonicalize,
    canonicalize_parity,
    degree,
    graph_from_obj,
    graph_to_obj,
)


class FormalSum:
    """A finite Q-linear combination of canonical graphs.

    Keys are canonical graphs with sign +1; graphs with an odd symmetry are
    never stored.  Instances are treated as immutable once built.
    """

    __slots__ = ("params", "flavor", "_terms")

    def __init__(self, params: Parameters, flavor: Flavor, terms=None):
        self.params = params
        self.flavor = flavor
        self._terms = {} if terms is None else {g: c for g, c in terms.items() if c}

    # -- construction --------------------------------------------------------

    @classmethod
    def zero(cls, params, flavor):
        return cls(params, flavor)

    @classmethod
    def inject(cls, g: HairyGraph, params: Parameters, flavor: Flavor, coeff=1, enlarged=False):
        g.validate(flavor, enlarged=enlarged)
        s = canonicalize(g, params, enlarged=enlarged, check=False)
        if s.sign == 0:
            return cls(params, flavor)
        return cls(params, flavor, {s.canonical: Fraction(coeff) * s.sign})

    @classmethod
    def from_raw(cls, params, flavor, raw_terms):
        """Sum of ``(graph, coeff)`` pairs whose graphs need not be canonical."""
        acc = Accumulator(params)
        for g, c in raw_terms:
            acc.add(g, c)
        return acc.result(flavor)

    # -- access --------------------------------------------------------------

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        """Terms in deterministic canonical-key order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient(self, g: HairyGraph) -> Fraction:
        """Coefficient of a (possibly non-canonical) graph in this sum."""
        s = canonicalize(g, self.params, enlarged=True)
        if s.sign == 0:
            return Fraction(0)
        return self._terms.get(s.canonical, Fraction(0)) * s.sign

    def degrees(self) -> set[int]:
        return {degree(g, self.params) for g in self._terms}

    def degree(self) -> int | None:
        """The common degree of all terms; None for the empty sum."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous sum with degrees {sorted(ds)}")
        return ds.pop()

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        if other.params != self.params or other.flavor != self.flavor:
            raise ValueError(
                f"mismatched sums: {self.params}/{self.flavor.value} vs {other.params}/{other.flavor.value}"
            )
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for g, c in other._terms.items():
            terms[g] = terms.get(g, 0) + c
        return FormalSum(self.params, self.flavor, terms)

    def __neg__(self):
        return FormalSum(self.params, self.flavor, {g: -c for g, c in self._terms.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, q) -> FormalSum:
        q = Fraction(q)
        if q == 0:
            return FormalSum(self.params, self.flavor)
        return FormalSum(self.params, self.flavor, {g: q * c for g, c in self._terms.items()})

    def __rmul__(self, q):
        return self.scale(q)

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return (self.params == other.params and self.flavor == other.flavor
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.params, self.flavor, frozenset(self._terms.items())))

    def with_flavor(self, flavor: Flavor, mapping: dict[str, str] | None = None) -> FormalSum:
        """Re-tag as another flavor, optionally renaming decorations.

        Renaming can change canonical keys, so terms are re-canonicalized.
        """
        if not mapping:
            return FormalSum(self.params, flavor, self._terms)
        return FormalSum.from_raw(self.params, flavor,
                                  ((g.reflavor(mapping), c) for g, c in self._terms.items()))

    def filter(self, pred) -> FormalSum:
        return FormalSum(self.params, self.flavor, {g: c for g, c in self._terms.items() if pred(g)})

    def __repr__(self):
        if not self._terms:
            return f"FormalSum(0; {self.params}, {self.flavor.value})"
        body = " + ".join(f"({c})*{g}" for g, c in self.items())
        return f"FormalSum({body}; {self.params}, {self.flavor.value})"

    # -- serialization -------------------------------------------------------

    def to_obj(self) -> dict:
        return {
            "m": self.params.m,
            "n": self.params.n,
            "flavor": self.flavor.value,
            "terms": [{"coeff": _qstr(c), "graph": graph_to_obj(g)} for g, c in self.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_obj(), separators=(",", ":"))

    @classmethod
    def from_obj(cls, obj, params=None, flavor=None) -> FormalSum:
        params = params or Parameters(int(obj["m"]), int(obj["n"]))
        flavor = flavor or Flavor(obj["flavor"])
        raw = []
        for t in obj["terms"]:
            g, _, _ = graph_from_obj(t["graph"])
            raw.append((g, Fraction(t["coeff"])))
        return cls.from_raw(params, flavor, raw)


def _qstr(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


class Accumulator:
    """Collects raw signed graphs into canonical coefficients."""

    __slots__ = ("params", "terms", "_n_odd", "_m_odd")

    def __init__(self, params: Parameters):
        self.params = params
        self.terms = {}
        self._n_odd = params.n_odd
        self._m_odd = params.m_odd

    def add(self, g: HairyGraph, coeff):
        canon, sign = canonicalize_parity(g, self._n_odd, self._m_odd)
        if sign:
            self.terms[canon] = self.terms.get(canon, 0) + sign * coeff

    def add_sum(self, s: FormalSum, coeff=1):
        for g, c in s.terms.items():
            self.terms[g] = self.terms.get(g, 0) + coeff * c

    def result(self, flavor: Flavor) -> FormalSum:
        return FormalSum(self.params, flavor,
                         {g: Fraction(c) for g, c in self.terms.items() if c})


def check_flavor(g: HairyGraph, flavor: Flavor):
    for d in g.hairs:
        if d not in flavor.decorations:
            raise GraphError(f"decoration {d!r} illegal in flavor {flavor.value}")
