"""Built-in example species.

These are the working examples the golden test battery runs against; the
CLI `verify` subcommand and the test suite share them.  Trace scales of 1/2
at Q[i] vertices make the symmetrising functional the real part, which is
the normalisation the reference displays of these examples use.
"""

from .bimodule import build_from_carrier
from .coeffalg import CoefficientAlgebra
from .scalars import NumberField, rat
from .species import Species
from .tensor import TensorElement


def gaussian_field():
    return NumberField("QI", [1, 0, 1])


def eta_field():
    """Real subfield generated by 2cos(2pi/7): x^3 + x^2/2 - x/2 - 1/8."""
    return NumberField("QETA", [rat("-1/8"), rat("-1/2"), rat("1/2"), 1])


def one_vertex():
    QQ = NumberField.rationals()
    D = CoefficientAlgebra([(1, QQ)])
    return Species(D, {})


def a2_rational():
    """Two rational vertices, one arrow 1 -> 2."""
    QQ = NumberField.rationals()
    D = CoefficientAlgebra([(1, QQ), (2, QQ)])
    a = build_from_carrier(1, 2, QQ, QQ, QQ)
    return Species(D, {"a": a})


def cycle3():
    """Oriented 3-cycle over Q with the cyclic cubic potential z ⊗ y ⊗ x."""
    QQ = NumberField.rationals()
    D = CoefficientAlgebra([(1, QQ), (2, QQ), (3, QQ)])
    arrows = {
        "x": build_from_carrier(1, 2, QQ, QQ, QQ),
        "y": build_from_carrier(2, 3, QQ, QQ, QQ),
        "z": build_from_carrier(3, 1, QQ, QQ, QQ),
    }
    sp = Species(D, arrows)
    W = (
        TensorElement.letter(sp, "z", 0)
        * TensorElement.letter(sp, "y", 0)
        * TensorElement.letter(sp, "x", 0)
    )
    return sp, W


def b2_arrow():
    """Q[i] -> Q with carrier Q[i]; the rational model of a B2 species."""
    QQ = NumberField.rationals()
    QI = gaussian_field()
    D = CoefficientAlgebra([(1, QI), (2, QQ)], {1: rat("1/2")})
    a = build_from_carrier(1, 2, QI, QQ, QI)
    return Species(D, {"a": a})


def a3_rational():
    """Rational A3 species oriented 1 -> 2 <- 3."""
    QQ = NumberField.rationals()
    D = CoefficientAlgebra([(1, QQ), (2, QQ), (3, QQ)])
    arrows = {
        "a": build_from_carrier(1, 2, QQ, QQ, QQ),
        "b": build_from_carrier(3, 2, QQ, QQ, QQ),
    }
    return Species(D, arrows)


def f4_species():
    """Q[i] -> Q[i] -> Q -> Q, zero potential; rational model of an F4 line."""
    QQ = NumberField.rationals()
    QI = gaussian_field()
    D = CoefficientAlgebra(
        [(1, QI), (2, QI), (3, QQ), (4, QQ)],
        {1: rat("1/2"), 2: rat("1/2")},
    )
    arrows = {
        "c21": build_from_carrier(1, 2, QI, QI, QI),
        "c32": build_from_carrier(2, 3, QI, QQ, QI),
        "r43": build_from_carrier(3, 4, QQ, QQ, QQ),
    }
    sp = Species(D, arrows)
    return sp, TensorElement.zero(sp)


def eta_line():
    """Q[eta] -> Q with carrier Q[eta]; a G2-type species of degree 3."""
    QQ = NumberField.rationals()
    QETA = eta_field()
    D = CoefficientAlgebra([(1, QETA), (2, QQ)])
    a = build_from_carrier(1, 2, QETA, QQ, QETA)
    return Species(D, {"a": a})


def eta_two_cycle():
    """Q[eta] vertex and rational vertex joined both ways; used by the
    randomised operator battery (it has cycles and a nontrivial field)."""
    QQ = NumberField.rationals()
    QETA = eta_field()
    D = CoefficientAlgebra([(1, QETA), (2, QQ)])
    arrows = {
        "u": build_from_carrier(1, 2, QETA, QQ, QETA),
        "v": build_from_carrier(2, 1, QQ, QETA, QETA),
    }
    return Species(D, arrows)


def eta_coline():
    """Q -> Q[eta] with carrier Q[eta]; the arrow of eta_line reversed."""
    QQ = NumberField.rationals()
    QETA = eta_field()
    D = CoefficientAlgebra([(1, QQ), (2, QETA)])
    b = build_from_carrier(1, 2, QQ, QETA, QETA)
    return Species(D, {"b": b})


def gaussian_point():
    """A single Q[i] vertex with no arrows."""
    QI = gaussian_field()
    D = CoefficientAlgebra([(1, QI)], {1: rat("1/2")})
    return Species(D, {})


def gaussian_line_up():
    """Q -> Q[i] with carrier Q[i]."""
    QQ = NumberField.rationals()
    QI = gaussian_field()
    D = CoefficientAlgebra([(1, QQ), (2, QI)], {2: rat("1/2")})
    c = build_from_carrier(1, 2, QQ, QI, QI)
    return Species(D, {"c": c})


def gaussian_line_gg():
    """Q[i] -> Q[i] with carrier Q[i]."""
    QI = gaussian_field()
    D = CoefficientAlgebra([(1, QI), (2, QI)], {1: rat("1/2"), 2: rat("1/2")})
    g = build_from_carrier(1, 2, QI, QI, QI)
    return Species(D, {"g": g})


def a3xb2_vertex_names():
    """Grid (i, j) -> 1..6 relabeling used by the worked example."""
    return {
        (1, 1): 1,
        (2, 1): 2,
        (3, 1): 3,
        (1, 2): 4,
        (2, 2): 5,
        (3, 2): 6,
    }


def a3xb2_species():
    """The relabeled 6-vertex product species with its 6-term potential.

    Vertices 1-3 carry Q[i] (real-part functional), 4-6 carry Q.  The
    potential is cubic: two pairs of Q[i]-flavoured 3-cycles through vertex
    2 minus two rational squares through vertex 5.
    """
    QQ = NumberField.rationals()
    QI = gaussian_field()
    D = CoefficientAlgebra(
        [(1, QI), (2, QI), (3, QI), (4, QQ), (5, QQ), (6, QQ)],
        {1: rat("1/2"), 2: rat("1/2"), 3: rat("1/2")},
    )
    arrows = {
        "C21": build_from_carrier(1, 2, QI, QI, QI),
        "C23": build_from_carrier(3, 2, QI, QI, QI),
        "C41": build_from_carrier(1, 4, QI, QQ, QI),
        "C52": build_from_carrier(2, 5, QI, QQ, QI),
        "C63": build_from_carrier(3, 6, QI, QQ, QI),
        "R54": build_from_carrier(4, 5, QQ, QQ, QQ),
        "R56": build_from_carrier(6, 5, QQ, QQ, QQ),
        "C15": build_from_carrier(5, 1, QQ, QI, QI),
        "C35": build_from_carrier(5, 3, QQ, QI, QI),
    }
    sp = Species(D, arrows)

    def el(aid, coords):
        from .tensor import element_of_arrow

        return element_of_arrow(sp, aid, coords)

    one = [rat(1), rat(0)]
    eye = [rat(0), rat(1)]
    unit = [rat(1)]
    W = (
        el("C21", one) * el("C15", one) * el("C52", one)
        - el("C21", one) * el("C15", eye) * el("C52", eye)
        + el("C23", one) * el("C35", one) * el("C52", one)
        - el("C23", one) * el("C35", eye) * el("C52", eye)
        - el("C41", one) * el("C15", one) * el("R54", unit)
        - el("C63", one) * el("C35", one) * el("R56", unit)
    )
    return sp, W
