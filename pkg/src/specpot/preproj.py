"""Double species, Casimir relation elements, and the degree-2 relation
presentation of a product's derivative ideal.

The double of an acyclic species keeps every carrier and adds its dual as
a reversed arrow.  Summing a (x) a* over each arrow's right basis and
subtracting the same sum for the dual arrows gives a degree-2 element
that is central over the vertex algebras; the quotient of the doubled
tensor algebra by it is the classical preprojective algebra.

For the product of two species the cubic potential differentiates down
to degree-2 relations of three kinds: the left factor's Casimir paired
with a dual generator of the right factor, a dual generator of the left
factor paired with the right factor's Casimir, and plain commutators of
factor generators.  relation_set assembles them on the materialised
product species and verify_ideal_equality checks, stratum by stratum,
that they span the same ideal as the potential's derivatives.
"""

from collections import Counter

from .bimodule import casimir_pair
from .errors import UnsupportedAlgebra, ValidationError
from .jacobian import TruncatedIdeal, close_ideal, compute_jacobian, ideal_generators
from .mutation import dual_id
from .product import _kron_vec, _unit_vec, product_potential, species_product
from .species import Species
from .tensor import TensorElement, element_of_arrow, word_degree, word_source, word_target


def double_species(species):
    """The same vertices with every arrow joined by its reversed dual."""
    arrows = dict(species.arrows)
    for aid in species.arrows:
        arrows[dual_id(aid)] = species.dual_of(aid)
    return Species(species.D, arrows)


def double_casimir(species, double=None):
    """sum of a (x) a* over all arrows minus the dual-arrow counterpart,
    as an element of the double of the species (built here, or passed in
    so the result can be compared against other elements on it)."""
    dbl = double if double is not None else double_species(species)
    for aid in species.arrows:
        if aid not in dbl.arrows or dual_id(aid) not in dbl.arrows:
            raise ValidationError(f"the provided double is missing {aid} or its dual")
    c = TensorElement.zero(dbl)
    for aid, M in species.arrows.items():
        star = dual_id(aid)
        for a_vec, astar_vec in casimir_pair(M, species.D, "right"):
            c = c + element_of_arrow(dbl, aid, a_vec) * element_of_arrow(
                dbl, star, astar_vec
            )
        for xstar_vec, x_vec in casimir_pair(M, species.D, "left"):
            c = c - element_of_arrow(dbl, star, xstar_vec) * element_of_arrow(
                dbl, aid, x_vec
            )
    return c


class RelationSet:
    """Degree-2 generators of the product species' derivative ideal.

    families maps "casimir_left", "casimir_right" and "commutator" to the
    elements as displayed (one per dual generator of the opposite factor,
    respectively one per generator pair).  The displayed Casimir elements
    mix hom-spaces, so ideal computations use components(), where each
    element is split by the endpoints of its words.
    """

    __slots__ = ("species", "families")

    def __init__(self, species, families):
        self.species = species
        self.families = {
            name: [e for e in elems if not e.is_zero()]
            for name, elems in families.items()
        }

    @property
    def elements(self):
        return [e for elems in self.families.values() for e in elems]

    def components(self):
        out = []
        for elem in self.elements:
            by_block = {}
            for word, coeff in elem.terms.items():
                key = (
                    word_target(self.species, word),
                    word_source(self.species, word),
                )
                by_block.setdefault(key, {})[word] = coeff
            out.extend(
                TensorElement(self.species, terms) for terms in by_block.values()
            )
        return out

    def __repr__(self):
        sizes = {name: len(elems) for name, elems in self.families.items()}
        return f"RelationSet({sizes})"


def relation_set(S1, S2, product=None):
    """The three relation families on the materialised product species."""
    prod = product if product is not None else species_product(S1, S2)
    sp = prod.species
    if sp is None:
        raise UnsupportedAlgebra(
            "the product has composite vertex algebras; relations are only "
            "assembled on a materialised product"
        )

    def unit(field):
        return _unit_vec(field.degree)

    casimir_left = []
    for bid, N in S2.arrows.items():
        N_dual = S2.dual_of(bid)
        u_sb = unit(S2.D.field_of(N.source))
        u_tb = unit(S2.D.field_of(N.target))
        for r in range(N_dual.dim):
            ystar = N_dual.basis_vector(r)
            elem = TensorElement.zero(sp)
            for aid, M in S1.arrows.items():
                dual_aid = f"({aid}*,{bid}*)"
                for a_vec, astar_vec in casimir_pair(M, S1.D, "right"):
                    elem = elem + element_of_arrow(
                        sp, f"({aid},e{N.source})", _kron_vec(a_vec, u_sb)
                    ) * element_of_arrow(sp, dual_aid, _kron_vec(astar_vec, ystar))
                for xstar_vec, x_vec in casimir_pair(M, S1.D, "left"):
                    elem = elem - element_of_arrow(
                        sp, dual_aid, _kron_vec(xstar_vec, ystar)
                    ) * element_of_arrow(
                        sp, f"({aid},e{N.target})", _kron_vec(x_vec, u_tb)
                    )
            casimir_left.append(elem)

    casimir_right = []
    for aid, M in S1.arrows.items():
        M_dual = S1.dual_of(aid)
        u_sa = unit(S1.D.field_of(M.source))
        u_ta = unit(S1.D.field_of(M.target))
        for r in range(M_dual.dim):
            xstar = M_dual.basis_vector(r)
            elem = TensorElement.zero(sp)
            for bid, N in S2.arrows.items():
                dual_aid = f"({aid}*,{bid}*)"
                for b_vec, bstar_vec in casimir_pair(N, S2.D, "right"):
                    elem = elem + element_of_arrow(
                        sp, f"(e{M.source},{bid})", _kron_vec(u_sa, b_vec)
                    ) * element_of_arrow(sp, dual_aid, _kron_vec(xstar, bstar_vec))
                for ystar_vec, y_vec in casimir_pair(N, S2.D, "left"):
                    elem = elem - element_of_arrow(
                        sp, dual_aid, _kron_vec(xstar, ystar_vec)
                    ) * element_of_arrow(
                        sp, f"(e{M.target},{bid})", _kron_vec(u_ta, y_vec)
                    )
            casimir_right.append(elem)

    commutators = []
    for aid, M in S1.arrows.items():
        u_sa = unit(S1.D.field_of(M.source))
        u_ta = unit(S1.D.field_of(M.target))
        for bid, N in S2.arrows.items():
            u_sb = unit(S2.D.field_of(N.source))
            u_tb = unit(S2.D.field_of(N.target))
            for i in range(M.dim):
                x = M.basis_vector(i)
                for j in range(N.dim):
                    y = N.basis_vector(j)
                    first = element_of_arrow(
                        sp, f"({aid},e{N.target})", _kron_vec(x, u_tb)
                    ) * element_of_arrow(
                        sp, f"(e{M.source},{bid})", _kron_vec(u_sa, y)
                    )
                    second = element_of_arrow(
                        sp, f"(e{M.target},{bid})", _kron_vec(u_ta, y)
                    ) * element_of_arrow(
                        sp, f"({aid},e{N.source})", _kron_vec(x, u_sb)
                    )
                    commutators.append(first - second)

    return RelationSet(
        sp,
        {
            "casimir_left": casimir_left,
            "casimir_right": casimir_right,
            "commutator": commutators,
        },
    )


def verify_ideal_equality(S1, S2, max_degree=12):
    """True when the relation set and the potential's derivatives close to
    the same truncated ideal, checked in both directions and stratum by
    stratum up to the degree where the Jacobian quotient stabilises."""
    prod = species_product(S1, S2)
    sp = prod.species
    if sp is None:
        raise UnsupportedAlgebra(
            "ideal comparison needs a materialised product species"
        )
    W = product_potential(S1, S2, prod)
    algebra = compute_jacobian(sp, W, max_degree)
    cap = algebra.max_degree
    relations = relation_set(S1, S2, prod)
    r_ideal = close_ideal(sp, relations.components(), cap)
    j_ideal = algebra.ideal
    for elem in relations.elements:
        if j_ideal.reduce_element(elem):
            return False
    for _, _, gen in ideal_generators(sp, W):
        if r_ideal.reduce_element(gen):
            return False
    j_strata = Counter(word_degree(w) for w, _ in j_ideal.pivot_coords())
    r_strata = Counter(word_degree(w) for w, _ in r_ideal.pivot_coords())
    return j_strata == r_strata
