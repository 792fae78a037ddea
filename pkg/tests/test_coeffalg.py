import pytest

from specpot.coeffalg import CoefficientAlgebra, casimir_of_D
from specpot.errors import DegenerateTrace, FieldMismatch
from specpot.scalars import NumberField, mpq, rat


def test_rational_casimir_is_trivial():
    QQ = NumberField.rationals()
    D = CoefficientAlgebra([(1, QQ)])
    pairs = D.casimir(1)
    assert len(pairs) == 1
    e, ebar = pairs[0]
    assert e == QQ.one() and ebar == QQ.one()


def test_gaussian_casimir_full_trace():
    QI = NumberField("QI", [1, 0, 1])
    D = CoefficientAlgebra([(1, QI)])
    pairs = D.casimir(1)
    i = QI.gen()
    assert pairs[0] == (QI.one(), QI.element([rat("1/2"), 0]))
    assert pairs[1] == (i, QI.element([0, rat("-1/2")]))


def test_gaussian_casimir_real_part():
    QI = NumberField("QI", [1, 0, 1])
    D = CoefficientAlgebra([(1, QI)], {1: rat("1/2")})
    pairs = D.casimir(1)
    i = QI.gen()
    assert pairs[0] == (QI.one(), QI.one())
    assert pairs[1] == (i, -i)


def test_casimir_reproduces_coordinates():
    # x = sum t(x ebar_j) e_j for every x
    QETA = NumberField("QETA", [rat("-1/8"), rat("-1/2"), rat("1/2"), 1])
    D = CoefficientAlgebra([(1, QETA)], {1: rat("3/7")})
    x = QETA.element([rat("2/3"), -1, rat("5/2")])
    acc = QETA.zero()
    for e, ebar in D.casimir(1):
        acc = acc + D.trace(1, x * ebar) * e
    assert acc == x
    acc = QETA.zero()
    for e, ebar in D.casimir(1):
        acc = acc + e * D.trace(1, ebar * x)
    assert acc == x


def test_casimir_of_D_covers_vertices():
    QQ = NumberField.rationals()
    QI = NumberField("QI", [1, 0, 1])
    D = CoefficientAlgebra([(1, QI), (2, QQ)])
    cas = casimir_of_D(D)
    assert set(cas) == {1, 2}
    assert len(cas[1]) == 2 and len(cas[2]) == 1


def test_zero_scale_rejected():
    QQ = NumberField.rationals()
    with pytest.raises(DegenerateTrace):
        CoefficientAlgebra([(1, QQ)], {1: 0})


def test_unknown_vertex_scale_rejected():
    QQ = NumberField.rationals()
    with pytest.raises(FieldMismatch):
        CoefficientAlgebra([(1, QQ)], {9: 1})


def test_trace_values():
    QI = NumberField("QI", [1, 0, 1])
    D = CoefficientAlgebra([(1, QI)], {1: rat("1/2")})
    assert D.trace(1, QI.one()) == mpq(1)
    assert D.trace(1, QI.gen()) == 0
    assert D.trace(1, QI.element([3, -2])) == mpq(3)
