from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from specpot.errors import DivisionByZero, NotGalois, ValidationError
from specpot.scalars import (
    FieldAutomorphism,
    NumberField,
    field_trace,
    galois_automorphisms,
    mpq,
    rat,
    rat_str,
)


def QI():
    return NumberField("QI", [1, 0, 1])


def QETA():
    # minimal polynomial of 2*cos(2*pi/7), rescaled to x^3 + x^2/2 - x/2 - 1/8
    return NumberField("QETA", [rat("-1/8"), rat("-1/2"), rat("1/2"), 1])


def test_rat_roundtrip():
    assert rat("3/4") == mpq(3, 4)
    assert rat_str(mpq(-6, 4)) == "-3/2"
    assert rat_str(mpq(5)) == "5"


def test_base_field_singleton():
    q = NumberField.rationals()
    assert q.is_base and q.degree == 1
    assert q.one() + q.one() == q.from_rational(2)


def test_reducible_poly_rejected():
    with pytest.raises(ValidationError):
        NumberField("bad", [-1, 0, 1])  # x^2 - 1


def test_gaussian_arithmetic():
    f = QI()
    i = f.gen()
    one = f.one()
    assert (one + i) * (one - i) == f.from_rational(2)
    assert i * i == f.from_rational(-1)
    assert (one + i).inverse() == f.element([rat("1/2"), rat("-1/2")])
    with pytest.raises(DivisionByZero):
        f.zero().inverse()


def test_eta_cube_reduction():
    f = QETA()
    eta = f.gen()
    # from the defining relation: 8 eta^3 + 4 eta^2 - 4 eta - 1 = 0
    lhs = 8 * (eta**3) + 4 * (eta * eta) - 4 * eta
    assert lhs == f.one()


def test_traces():
    f = QI()
    assert field_trace(f.one()) == 2
    assert field_trace(f.gen()) == 0
    g = QETA()
    assert field_trace(g.one()) == 3
    assert field_trace(g.gen()) == mpq(-1, 2)


def test_galois_group_gaussian():
    f = QI()
    autos = galois_automorphisms(f)
    assert len(autos) == 2
    assert autos[0].is_identity
    conj = autos[1]
    assert conj.apply(f.gen()) == -f.gen()
    assert conj.compose(conj).is_identity


def test_galois_group_eta():
    f = QETA()
    autos = galois_automorphisms(f)
    assert len(autos) == 3
    assert autos[0].is_identity
    eta = f.gen()
    sigma = autos[1]
    # canonical ordering puts 2 eta^2 - 1 before the remaining root
    assert sigma.apply(eta) == 2 * (eta * eta) - f.one()
    sigma2 = autos[2]
    assert sigma.compose(sigma) == sigma2
    assert sigma.compose(sigma2).is_identity
    assert sigma.inverse() == sigma2
    # group order: every automorphism fixes the trace
    for a in autos:
        x = f.element([rat("1/3"), 2, rat("-5/7")])
        assert field_trace(a.apply(x)) == field_trace(x)


def test_not_galois():
    # x^3 - 2 has one real root; Q[2^(1/3)] carries only the identity
    f = NumberField("QC2", [-2, 0, 0, 1])
    with pytest.raises(NotGalois):
        galois_automorphisms(f)


def test_automorphism_identity_for_base():
    q = NumberField.rationals()
    (a,) = galois_automorphisms(q)
    assert a.is_identity


rationals = st.builds(
    lambda p, q: rat(p) / q,
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=1, max_value=20),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=2))
def test_gaussian_inverse_property(coords):
    f = QI()
    x = f.element(coords)
    if x.is_zero():
        return
    assert x * x.inverse() == f.one()


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
def test_eta_trace_is_linear_and_symmetric(c1, c2):
    f = QETA()
    x, y = f.element(c1), f.element(c2)
    assert field_trace(x * y) == field_trace(y * x)
    assert field_trace(x + y) == field_trace(x) + field_trace(y)
