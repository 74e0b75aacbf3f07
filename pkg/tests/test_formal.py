from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgc import FormalSum, Flavor, Parameters, raw_named_graph

from strategies import small_basis

P = Parameters(2, 6)
BASIS = small_basis(P, Flavor.A)

sums = st.dictionaries(st.sampled_from(BASIS), st.fractions(max_denominator=7), max_size=5).map(
    lambda d: FormalSum(P, Flavor.A, d))


@given(sums, sums, sums)
def test_vector_space_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a - a).is_zero()
    assert a.scale(2) == a + a
    assert a.scale(0).is_zero()


@given(sums)
def test_json_round_trip(x):
    assert FormalSum.from_obj(x.to_obj()) == x


def test_zero_coefficients_are_dropped():
    g = BASIS[0]
    assert FormalSum(P, Flavor.A, {g: Fraction(0)}).is_zero()


def test_inject_uses_sign_and_forced_zero():
    D = raw_named_graph("D")
    assert FormalSum.inject(D, Parameters(2, 5), Flavor.A).is_zero()
    x = FormalSum.inject(D, P, Flavor.A, coeff=3)
    assert len(x) == 1 and abs(next(iter(x.terms.values()))) == 3
    assert x.coefficient(D) == 3


def test_mismatched_sums_raise():
    x = FormalSum.inject(raw_named_graph("L"), P, Flavor.A)
    y = FormalSum.inject(raw_named_graph("L"), Parameters(2, 5), Flavor.A)
    with pytest.raises(ValueError):
        x + y


def test_coefficients_serialize_as_fractions():
    x = FormalSum.inject(raw_named_graph("L"), P, Flavor.A, coeff=Fraction(-2, 3))
    assert [t["coeff"] for t in x.to_obj()["terms"]] in (["-2/3"], ["2/3"])


def test_inhomogeneous_degree_raises():
    x = FormalSum.inject(raw_named_graph("L"), P, Flavor.A) + FormalSum.inject(raw_named_graph("D"), P, Flavor.A)
    with pytest.raises(ValueError):
        x.degree()
