"""Mutation goldens: the F4 line, both single-vertex mutations of the
6-vertex product example, and orbit mutation with automorphism transport."""

import pytest

from test_jacobian import a3xb2_gamma

from specpot.bimodule import build_from_carrier, pair_mx, pair_xm
from specpot.catalog import a3xb2_species, cycle3, eta_two_cycle, f4_species
from specpot.coeffalg import CoefficientAlgebra
from specpot.errors import (
    ConditionsABViolated,
    LoopAtVertex,
    NotSparse,
    TwoCycleAtVertex,
    ValidationError,
)
from specpot.jacobian import check_conditions_AB
from specpot.mutation import (
    is_reduced,
    mutate_orbit,
    rotate_off_vertex,
    semi_mutate,
)
from specpot.scalars import ZERO, NumberField
from specpot.species import Species, SpeciesMap
from specpot.tensor import TensorElement, cyclic_equivalent, word_source


def arrow_shapes(sp):
    return {aid: (M.source, M.target, M.dim) for aid, M in sp.arrows.items()}


def test_rotate_off_vertex_moves_base():
    sp, W = cycle3()
    base = word_source(sp, next(iter(W.terms)))
    rotated = rotate_off_vertex(W, base)
    assert all(word_source(sp, w) != base for w in rotated.terms)
    assert cyclic_equivalent(W, rotated)
    # nothing to do when no term is based at the vertex
    again = rotate_off_vertex(rotated, base)
    assert again.terms == rotated.terms


def test_semi_mutate_rejects_two_cycle():
    sp = eta_two_cycle()
    W = TensorElement.zero(sp)
    with pytest.raises(TwoCycleAtVertex):
        semi_mutate(sp, W, 1)


def test_semi_mutate_rejects_loop():
    QQ = NumberField.rationals()
    D = CoefficientAlgebra([(1, QQ)])
    loop = build_from_carrier(1, 1, QQ, QQ, QQ)
    sp = Species(D, {"l": loop})
    with pytest.raises(LoopAtVertex):
        semi_mutate(sp, TensorElement.zero(sp), 1)


def test_f4_mutation_at_three():
    sp, W = f4_species()
    res = semi_mutate(sp, W, 3)
    assert arrow_shapes(res.species) == {
        "c21": (1, 2, 2),
        "c32*": (3, 2, 2),
        "r43*": (4, 3, 1),
        "[r43|c32]": (2, 4, 2),
    }
    assert res.arrow_provenance == {
        "c21": ("kept", "c21"),
        "c32*": ("dual", "c32"),
        "r43*": ("dual", "r43"),
        "[r43|c32]": ("bracket", "r43", "c32"),
    }
    f3 = sp.D.field_of(3)
    expected = TensorElement(
        res.species,
        {(("r43*", 0), ("[r43|c32]", 0), ("c32*", 0)): f3.one()},
    )
    assert res.potential.terms == expected.terms
    assert cyclic_equivalent(res.potential, expected)
    assert is_reduced(res.potential)


def test_product_example_mutation_at_two():
    sp, W = a3xb2_species()
    res = semi_mutate(sp, W, 2)
    assert arrow_shapes(res.species) == {
        "C41": (1, 4, 2),
        "C63": (3, 6, 2),
        "R54": (4, 5, 1),
        "R56": (6, 5, 1),
        "C15": (5, 1, 2),
        "C35": (5, 3, 2),
        "C21*": (2, 1, 2),
        "C23*": (2, 3, 2),
        "C52*": (5, 2, 2),
        "[C52|C21]": (1, 5, 2),
        "[C52|C23]": (3, 5, 2),
    }
    D = res.species.D
    f2, f4, f5, f6 = (D.field_of(v) for v in (2, 4, 5, 6))
    i2 = f2.gen()
    expected = TensorElement(
        res.species,
        {
            # rewritten triangles through vertices 4 and 6
            (("C41", 0), ("C15", 0), ("R54", 0)): -f4.one(),
            (("C63", 0), ("C35", 0), ("R56", 0)): -f6.one(),
            # collapsed pairs through vertex 2
            (("[C52|C21]", 0), ("C15", 0)): f5.one(),
            (("[C52|C23]", 0), ("C35", 0)): f5.one(),
            # canonical cycles dual . composite . dual
            (("C52*", 0), ("[C52|C21]", 0), ("C21*", 0)): f2.one(),
            (("C52*", 1), ("[C52|C21]", 0), ("C21*", 0)): i2,
            (("C52*", 0), ("[C52|C23]", 0), ("C23*", 0)): f2.one(),
            (("C52*", 1), ("[C52|C23]", 0), ("C23*", 0)): i2,
        },
    )
    assert res.potential.terms == expected.terms
    assert cyclic_equivalent(res.potential, expected)
    assert not is_reduced(res.potential)


def test_product_example_mutation_at_five():
    sp, W = a3xb2_species()
    res = semi_mutate(sp, W, 5)
    shapes = arrow_shapes(res.species)
    assert shapes == {
        "C21": (1, 2, 2),
        "C23": (3, 2, 2),
        "C41": (1, 4, 2),
        "C63": (3, 6, 2),
        "C15*": (1, 5, 2),
        "C35*": (3, 5, 2),
        "C52*": (5, 2, 2),
        "R54*": (5, 4, 1),
        "R56*": (5, 6, 1),
        "[C15|C52]": (2, 1, 4),
        "[C35|C52]": (2, 3, 4),
        "[C15|R54]": (4, 1, 2),
        "[C35|R54]": (4, 3, 2),
        "[C15|R56]": (6, 1, 2),
        "[C35|R56]": (6, 3, 2),
    }
    # the two 4-dimensional composites come from tensoring two
    # 2-dimensional carriers over the rational middle vertex
    assert shapes["[C15|C52]"][2] == 4
    assert shapes["[C35|C52]"][2] == 4
    D = res.species.D
    f2, f4, f5, f6 = (D.field_of(v) for v in (2, 4, 5, 6))
    i2 = f2.gen()
    expected = TensorElement(
        res.species,
        {
            (("C21", 0), ("[C15|C52]", 0)): f2.one(),
            (("C21", 0), ("[C15|C52]", 1)): -i2,
            (("C23", 0), ("[C35|C52]", 0)): f2.one(),
            (("C23", 0), ("[C35|C52]", 1)): -i2,
            (("C41", 0), ("[C15|R54]", 0)): -f4.one(),
            (("C63", 0), ("[C35|R56]", 0)): -f6.one(),
            (("C15*", 0), ("[C15|C52]", 0), ("C52*", 0)): f5.one(),
            (("C15*", 0), ("[C15|R54]", 0), ("R54*", 0)): f5.one(),
            (("C15*", 0), ("[C15|R56]", 0), ("R56*", 0)): f5.one(),
            (("C35*", 0), ("[C35|C52]", 0), ("C52*", 0)): f5.one(),
            (("C35*", 0), ("[C35|R54]", 0), ("R54*", 0)): f5.one(),
            (("C35*", 0), ("[C35|R56]", 0), ("R56*", 0)): f5.one(),
        },
    )
    assert res.potential.terms == expected.terms
    assert cyclic_equivalent(res.potential, expected)
    assert not is_reduced(res.potential)


def test_dual_arrow_pairings_reconstruct():
    """Both one-sided bases of every mutated arrow reconstruct through the
    canonical pairings, including duals whose pairing runs through the
    double-dual identification."""
    sp, W = a3xb2_species()
    res = semi_mutate(sp, W, 5)
    D = res.species.D
    for aid, M in res.species.arrows.items():
        dual = res.species.dual_of(aid)
        for r in range(M.dim):
            x = M.basis_vector(r)
            acc = [ZERO] * M.dim
            for j in range(len(M.underline)):
                val = pair_xm(M, D, dual.overline[j], x)
                acc = [a + b for a, b in zip(acc, M.act_right(M.underline[j], val))]
            assert acc == list(x), f"right reconstruction failed for {aid}"
            acc = [ZERO] * M.dim
            for i in range(len(M.overline)):
                val = pair_mx(M, D, x, dual.underline[i])
                acc = [a + b for a, b in zip(acc, M.act_left(val, M.overline[i]))]
            assert acc == list(x), f"left reconstruction failed for {aid}"


def test_orbit_must_be_closed():
    sp, W = a3xb2_species()
    gamma = a3xb2_gamma(sp)
    with pytest.raises(ValidationError):
        mutate_orbit(sp, W, gamma, [1])


def test_orbit_rejects_unreduced_intermediate():
    sp, W = a3xb2_species()
    gamma = a3xb2_gamma(sp)
    # vertices 1 and 3 form an orbit with no arrows between them, but the
    # potential stops being reduced after the first step
    with pytest.raises(NotSparse):
        mutate_orbit(sp, W, gamma, [1, 3])


def test_orbit_five_transport():
    sp, W = a3xb2_species()
    gamma = a3xb2_gamma(sp)
    res, g2 = mutate_orbit(sp, W, gamma, [5])
    assert g2.vertex_map == gamma.vertex_map
    assert {a: g2.arrow_map[a][0] for a in g2.arrow_map} == {
        "C21": "C23",
        "C23": "C21",
        "C41": "C63",
        "C63": "C41",
        "C15*": "C35*",
        "C35*": "C15*",
        "C52*": "C52*",
        "R54*": "R56*",
        "R56*": "R54*",
        "[C15|C52]": "[C35|C52]",
        "[C35|C52]": "[C15|C52]",
        "[C15|R54]": "[C35|R56]",
        "[C35|R56]": "[C15|R54]",
        "[C15|R56]": "[C35|R54]",
        "[C35|R54]": "[C15|R56]",
    }
    assert check_conditions_AB(res.species, res.potential, g2) == (True, True)


def test_orbit_two_transport():
    sp, W = a3xb2_species()
    gamma = a3xb2_gamma(sp)
    res, g2 = mutate_orbit(sp, W, gamma, [2])
    assert {a: g2.arrow_map[a][0] for a in g2.arrow_map} == {
        "C15": "C35",
        "C35": "C15",
        "C41": "C63",
        "C63": "C41",
        "R54": "R56",
        "R56": "R54",
        "C21*": "C23*",
        "C23*": "C21*",
        "C52*": "C52*",
        "[C52|C21]": "[C52|C23]",
        "[C52|C23]": "[C52|C21]",
    }
    assert check_conditions_AB(res.species, res.potential, g2) == (True, True)


def test_identity_transports_to_identity():
    """A trivial automorphism stays trivial through mutation."""
    sp, W = a3xb2_species()
    ident = SpeciesMap.identity(sp)
    res, g2 = mutate_orbit(sp, W, ident, [5])
    assert g2.vertex_map == {v: v for v in sp.vertex_ids}
    for aid, (bid, mat) in g2.arrow_map.items():
        assert bid == aid
        n = res.species.arrows[aid].dim
        for r in range(n):
            for c in range(n):
                want = 1 if r == c else 0
                assert mat[r][c] == want
