from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgc import FormalSum, Flavor, Parameters, raw_named_graph
from hgc.basis import Sector, Window, enumerate_window
from hgc.complexes import differential
from hgc.graphcore import EPSILON, ONE
from hgc.phimap import (
    ad_s_power, b_j_sum, b_op, d_prime_pieces, inclusion_exclusion_check, phi, phi_factored,
    phi_inverse, phi_inverse_closed, reconnect_rs, verify_phi, _apply,
)

from strategies import GRID

_PRIMED = {}


def primed_basis(p, max_v=3, max_h=3):
    key = (p, max_v, max_h)
    if key not in _PRIMED:
        w = Window(max_v, max_h, Flavor.APRIME, p, Sector.PRIMED)
        _PRIMED[key] = [g for s in enumerate_window(w).values() for g in s.graphs]
    return _PRIMED[key]


@st.composite
def primed_graph(draw):
    p = Parameters(*draw(st.sampled_from(GRID)))
    return p, draw(st.sampled_from(primed_basis(p)))


@given(primed_graph())
def test_phi_is_a_chain_map(pg):
    p, g = pg
    x = FormalSum(p, Flavor.APRIME, {g: 1})
    assert differential(phi(x)) == phi(differential(x))


@given(primed_graph())
def test_phi_factorization_and_inverses(pg):
    p, g = pg
    x = FormalSum(p, Flavor.APRIME, {g: 1})
    y = phi(x)
    assert phi_factored(x) == y
    assert phi_inverse(y) == x
    assert phi_inverse_closed(y) == x


@given(primed_graph())
def test_d_prime_pieces_reassemble(pg):
    p, g = pg
    x = FormalSum(p, Flavor.APRIME, {g: 1})
    assert d_prime_pieces(x).total().filter(lambda h: h.is_genuine()) == differential(x)


@given(primed_graph(), st.sampled_from([1, 2]))
def test_commutators_with_s_give_b_sums(pg, j):
    p, g = pg
    x = FormalSum(p, Flavor.APRIME, {g: 1})
    lhs = ad_s_power(lambda y: _apply(y, lambda h: b_op(h, ())), x, j).scale(Fraction(1, 1 if j == 1 else 2))
    assert lhs == b_j_sum(x, j)


def test_phi_leading_term_and_sign():
    p = Parameters(3, 6)
    T_eps = raw_named_graph("T").reflavor({ONE: EPSILON})
    x = FormalSum.inject(T_eps, p, Flavor.APRIME)
    y = phi(x)
    # one vertex: nowhere to reconnect, so only the sign (-1)^{#eps} survives
    assert y == FormalSum.inject(raw_named_graph("T"), p, Flavor.A).scale(-1)


def test_reconnect_requires_epsilon_hairs():
    p = Parameters(3, 6)
    x = FormalSum.inject(raw_named_graph("Tomega"), p, Flavor.APRIME)
    with pytest.raises(ValueError):
        reconnect_rs(x, [0])


def test_phi_rejects_unprimed_input():
    p = Parameters(2, 6)
    with pytest.raises(ValueError):
        phi(FormalSum.inject(raw_named_graph("Lprime"), p, Flavor.APRIME))


@pytest.mark.parametrize("size", range(6))
def test_inclusion_exclusion(size):
    assert inclusion_exclusion_check(size)
    assert inclusion_exclusion_check(size, "random", seed=size)


def test_window_report():
    p = Parameters(2, 5)
    rep = verify_phi(primed_basis(p), p)
    assert rep.passed and rep.checked == len(primed_basis(p))
    assert rep.summary()["passed"]
