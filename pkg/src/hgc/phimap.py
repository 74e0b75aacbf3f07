"""The comparison map from the epsilon-decorated primed complex to the unit-decorated one.

``phi(G) = (-1)^{#eps} sum_S R_S(G)``, where ``R_S`` reconnects the
epsilon-hairs in ``S`` to internal vertices other than their own and the
surviving epsilon-hairs are read as unit hairs.  It factors as
``exp(s) o I_eps`` with ``s`` the single-hair reconnection operator and
``I_eps`` the sign ``(-1)^{#eps}``.

The second half of the module works in the enlarged setting (uni- and
bivalent internal vertices allowed) and provides the operators used to prove
that ``phi`` is a chain map, so that each step can be checked on its own.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import surgery
from .complexes import DifferentialKind, differential
from .formal import Accumulator, FormalSum
from .graphcore import EPSILON, OMEGA, ONE, Flavor, HairyGraph

TO_UNIT = {EPSILON: ONE}
TO_EPS = {ONE: EPSILON}


def is_primed(g: HairyGraph) -> bool:
    return g.internal >= 1 and g.omega_count >= 1


@dataclass(frozen=True)
class PrimedElement:
    value: FormalSum

    def __post_init__(self):
        if self.value.flavor not in (Flavor.APRIME, Flavor.A):
            raise ValueError("primed elements have flavor Aprime or A")
        bad = [g for g in self.value.terms if not is_primed(g)]
        if bad:
            raise ValueError(f"{bad[0]} lacks an omega-hair or an internal vertex")


# -- reconnection --------------------------------------------------------------------

def reconnect_raw(g: HairyGraph, S) -> list[HairyGraph]:
    """All graphs of ``R_S(g)`` (each reconnection map once), uncanonicalized."""
    S = sorted(S)
    for j in S:
        if g.hairs[j] != EPSILON:
            raise ValueError(f"hair {j} of {g} is not epsilon-decorated")
    if g.internal < 1:
        raise ValueError("reconnection needs an internal vertex")
    options = [[v for v in range(g.internal) if v != g.hair_attachment(j)] for j in S]
    return [surgery.reconnect(g, dict(zip(S, t))) for t in itertools.product(*options)]


def reconnect_rs(x: FormalSum, S) -> FormalSum:
    """``R_S`` applied to a single-graph sum (``S`` indexes hairs of that graph)."""
    if len(x.terms) != 1:
        raise ValueError("R_S is indexed by hairs of one graph; pass a single-term sum")
    (g, c), = x.terms.items()
    acc = Accumulator(x.params)
    for h in reconnect_raw(g, S):
        acc.add(h, c)
    return acc.result(x.flavor)


def eps_hairs(g: HairyGraph):
    return [j for j, d in enumerate(g.hairs) if d == EPSILON]


def _check_primed(x: FormalSum, flavor: Flavor):
    if x.flavor is not flavor:
        raise ValueError(f"expected flavor {flavor.value}, got {x.flavor.value}")
    PrimedElement(x)


# -- the map and its factorization --------------------------------------------------

def phi(x: FormalSum) -> FormalSum:
    """``(-1)^{#eps} sum_S R_S``, output in flavor A."""
    _check_primed(x, Flavor.APRIME)
    acc = Accumulator(x.params)
    for g, c in x.terms.items():
        E = eps_hairs(g)
        sign = -1 if len(E) % 2 else 1
        for k in range(len(E) + 1):
            for S in itertools.combinations(E, k):
                for h in reconnect_raw(g, S):
                    acc.add(h.reflavor(TO_UNIT), sign * c)
    return acc.result(Flavor.A)


def s_operator(x: FormalSum) -> FormalSum:
    """Reconnect one epsilon-hair to another internal vertex, summed over hairs and targets."""
    if x.flavor is not Flavor.APRIME:
        raise ValueError("s acts on flavor Aprime")
    acc = Accumulator(x.params)
    for g, c in x.terms.items():
        for j in eps_hairs(g):
            for h in reconnect_raw(g, [j]):
                acc.add(h, c)
    return acc.result(Flavor.APRIME)


def i_eps(x: FormalSum) -> FormalSum:
    return FormalSum(x.params, x.flavor,
                     {g: (-c if g.count(EPSILON) % 2 else c) for g, c in x.terms.items()})


def exp_s(x: FormalSum, sign: int = 1) -> FormalSum:
    """``sum_j (sign s)^j / j!``; finite because ``s`` removes an epsilon-hair."""
    out = x
    term = x
    j = 0
    while True:
        j += 1
        term = s_operator(term).scale(Fraction(sign, j))
        if term.is_zero():
            return out
        out = out + term


def phi_factored(x: FormalSum) -> FormalSum:
    """``exp(s) o I_eps`` followed by reading epsilon as 1."""
    _check_primed(x, Flavor.APRIME)
    return exp_s(i_eps(x)).with_flavor(Flavor.A, TO_UNIT)


def phi_inverse(y: FormalSum) -> FormalSum:
    """Inverse by back-substitution on loop order.

    ``phi(G) = (-1)^{#eps} G + (higher loop order)``, so the lowest loop order
    part of the residual determines the next correction exactly.
    """
    _check_primed(y, Flavor.A)
    params = y.params
    result = FormalSum(params, Flavor.APRIME)
    residual = y
    while not residual.is_zero():
        low = min(g.loop_order for g in residual.terms)
        lead = residual.filter(lambda g: g.loop_order == low)
        corr = i_eps(lead.with_flavor(Flavor.APRIME, TO_EPS))
        result = result + corr
        residual = residual - phi(corr)
        if any(g.loop_order <= low for g in residual.terms):
            raise ArithmeticError("back-substitution failed to raise the loop order")
    return result


def phi_inverse_closed(y: FormalSum) -> FormalSum:
    """``I_eps o exp(-s)`` after reading 1 as epsilon."""
    _check_primed(y, Flavor.A)
    return i_eps(exp_s(y.with_flavor(Flavor.APRIME, TO_EPS), sign=-1))


# -- enlarged-complex operators --------------------------------------------------------

def _apply(x: FormalSum, op, flavor=None) -> FormalSum:
    acc = Accumulator(x.params)
    for g, c in x.terms.items():
        for h, s in op(g):
            acc.add(h, s * c)
    return acc.result(flavor or x.flavor)


def _unit_hairs(g):
    return [j for j, d in enumerate(g.hairs) if d in (EPSILON, ONE)]


def d1_enlarged(g):
    return [(h, 1) for h in surgery.split_terms(g, min_block=0)]


def b_op(g, J):
    """Join the hairs ``J`` at a new vertex and connect it to an existing internal vertex."""
    if not J:
        return [(surgery.attach_leaf(g, v), 1) for v in range(g.internal)]
    joined = surgery.join_hairs(g, J, EPSILON)
    new = min(J)  # the fused hair keeps the position of the first joined hair
    return [(surgery.reconnect(joined, {new: v + 1}), 1) for v in range(g.internal)]


def a_op(g, K, deco=EPSILON):
    """Join the unit-like hairs ``K`` at a new vertex carrying a new hair ``deco``."""
    return [(surgery.join_hairs(g, K, deco), 1)]


def c_op(g, J):
    """Join the hairs ``J`` together with one omega-hair, summed over omega-hairs."""
    out = []
    for w in range(len(g.hairs)):
        if g.hairs[w] == OMEGA:
            out.append((surgery.join_hairs(g, [w] + list(J), OMEGA), 1))
    return out


@dataclass
class DPrimePieces:
    d1: FormalSum
    b_empty: FormalSum
    d_eps: FormalSum
    d_omega: FormalSum

    def total(self) -> FormalSum:
        return self.d1 - self.b_empty + self.d_eps + self.d_omega


def d_prime_pieces(x: FormalSum, enlarged: bool = True) -> DPrimePieces:
    """The four pieces of the epsilon-complex differential in the enlarged setting."""
    if not enlarged:
        raise ValueError("the piece decomposition needs enlarged mode")
    if x.flavor is not Flavor.APRIME:
        raise ValueError("d' pieces act on flavor Aprime")

    def deps(g):
        E = eps_hairs(g)
        return [t for k in range(1, len(E) + 1) for K in itertools.combinations(E, k) for t in a_op(g, K)]

    return DPrimePieces(
        d1=_apply(x, d1_enlarged),
        b_empty=_apply(x, lambda g: b_op(g, ())),
        d_eps=_apply(x, deps),
        d_omega=_apply(x, lambda g: c_op(g, ())),
    )


def genuine_part(x: FormalSum) -> FormalSum:
    return x.filter(HairyGraph.is_genuine)


def conjugated_formula(x: FormalSum) -> FormalSum:
    """``d'_1 - B_0 + sum_{|J|>=1} A_J + sum_J C_J`` on unit-decorated graphs (enlarged)."""
    if x.flavor is not Flavor.A:
        raise ValueError("the conjugated formula acts on flavor A")

    def op(g):
        U = _unit_hairs(g)
        out = list(d1_enlarged(g))
        out += [(h, -s) for h, s in b_op(g, ())]
        for k in range(1, len(U) + 1):
            for J in itertools.combinations(U, k):
                out += a_op(g, J, ONE)
        for k in range(len(U) + 1):
            for J in itertools.combinations(U, k):
                out += c_op(g, J)
        return out

    return _apply(x, op)


def ad_s_power(op, x: FormalSum, j: int) -> FormalSum:
    """``ad_s^j(op)`` applied to ``x``, with ``ad_s(X) = sX - Xs``."""
    if j == 0:
        return op(x)
    return s_operator(ad_s_power(op, x, j - 1)) - ad_s_power(op, s_operator(x), j - 1)


def b_j_sum(x: FormalSum, j: int) -> FormalSum:
    def op(g):
        return [t for J in itertools.combinations(eps_hairs(g), j) for t in b_op(g, J)]

    return _apply(x, op)


def inclusion_exclusion_check(size: int, values=None, seed: int = 0) -> bool:
    """``sum_{J, K disjoint} (-1)^{|K|} X_{J u K} = X_empty`` for a ground set of ``size``.

    With ``values=None`` each ``X_T`` is a formal symbol and coefficients are
    collected per symbol; otherwise ``values`` maps frozensets to numbers
    (``"random"`` draws seeded rationals).
    """
    if size > 10:
        raise ValueError("ground set too large")
    ground = range(size)
    subsets = [frozenset(c) for k in range(size + 1) for c in itertools.combinations(ground, k)]
    if values == "random":
        rng = random.Random(seed)
        values = {T: Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for T in subsets}
    coeff: dict = {}
    for J in subsets:
        rest = [i for i in ground if i not in J]
        for k in range(len(rest) + 1):
            for K in itertools.combinations(rest, k):
                T = J | frozenset(K)
                coeff[T] = coeff.get(T, 0) + (-1) ** k
    if values is None:
        return all(c == (1 if not T else 0) for T, c in coeff.items())
    total = sum(c * values[T] for T, c in coeff.items())
    return total == values[frozenset()]


# -- whole-window verification -----------------------------------------------------------

@dataclass
class PhiReport:
    checked: int = 0
    chain_map: list = field(default_factory=list)
    factorization: list = field(default_factory=list)
    round_trip: list = field(default_factory=list)
    triangular: list = field(default_factory=list)
    pieces: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.chain_map or self.factorization or self.round_trip or self.triangular or self.pieces)

    def summary(self) -> dict:
        return {
            "checked": self.checked,
            "chain_map_failures": len(self.chain_map),
            "factorization_failures": len(self.factorization),
            "round_trip_failures": len(self.round_trip),
            "triangularity_failures": len(self.triangular),
            "piece_failures": len(self.pieces),
            "passed": self.passed,
        }


def verify_graph(g: HairyGraph, params, rep: PhiReport, pieces: bool = True):
    x = FormalSum(params, Flavor.APRIME, {g: 1})
    rep.checked += 1
    y = phi(x)
    if differential(y) != phi(differential(x, DifferentialKind.PRIME)):
        rep.chain_map.append(g)
    if phi_factored(x) != y:
        rep.factorization.append(g)
    if phi_inverse(y) != x or phi_inverse_closed(y) != x:
        rep.round_trip.append(g)
    lead = y.coefficient(g.reflavor(TO_UNIT))
    rest = y - FormalSum.inject(g.reflavor(TO_UNIT), params, Flavor.A, lead)
    sign = -1 if g.count(EPSILON) % 2 else 1
    if lead != sign or any(h.loop_order <= g.loop_order for h in rest.terms):
        rep.triangular.append(g)
    if pieces:
        tot = d_prime_pieces(x).total()
        if tot != differential(x, DifferentialKind.PRIME):
            rep.pieces.append(g)


def verify_phi(graphs, params, pieces: bool = True) -> PhiReport:
    rep = PhiReport()
    for g in graphs:
        if is_primed(g):
            verify_graph(g, params, rep, pieces)
    return rep

