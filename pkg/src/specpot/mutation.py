"""Semi-mutation at a vertex and mutation along Nakayama orbits.

Mutating at k replaces the arrows touching k by their duals, adds one
composite arrow M_alpha (x)_{D_k} M_beta per (out, in) pair, rewrites the
potential by collapsing every adjacent letter pair passing through k into a
composite letter, and appends the canonical cyclic terms a* [a(x)b] b*.

Orbit mutation chains these steps along a permutation orbit and transports
the algebra automorphism: untouched arrows keep their maps, composite
arrows get the tensor of the factor maps, and dual arrows get the unique
map making image Casimir elements out of transported ones.
"""

from .bimodule import dualize, tensor_over_vertex
from .errors import (
    ConditionsABViolated,
    LoopAtVertex,
    NotSparse,
    TwoCycleAtVertex,
    ValidationError,
)
from .linalg import mat_vec, transpose
from .scalars import ZERO
from .species import Species, SpeciesMap
from .tensor import (
    TensorElement,
    element_of_arrow,
    epsilon_r,
    is_potential,
    word_source,
    word_target,
)


def dual_id(aid):
    return f"{aid}*"


def bracket_id(alpha, beta):
    return f"[{alpha}|{beta}]"


def is_reduced(W):
    """True when no cyclic term has word length two."""
    return all(word[0] == "e" or len(word) != 2 for word in W.terms)


def rotate_off_vertex(W, k):
    """A cyclically equivalent potential with no term based at k.

    Terms based at k are rotated with epsilon_r until their base vertex
    moves off k; terms supported entirely on loops at k never move.
    """
    sp = W.species
    rest = {}
    block = {}
    for word, coeff in W.terms.items():
        if word_source(sp, word) == k:
            block[word] = coeff
        else:
            rest[word] = coeff
    out = TensorElement(sp, rest)
    stay = TensorElement(sp, block)
    if stay.is_zero():
        return out
    cap = max(len(w) for w in block) + 2
    rounds = 0
    while not stay.is_zero():
        if rounds > cap:
            raise LoopAtVertex(f"potential cannot be rotated off vertex {k!r}")
        stay = epsilon_r(stay)
        keep = {}
        for word, coeff in stay.terms.items():
            if word_source(sp, word) == k:
                keep[word] = coeff
            else:
                out = out + TensorElement(sp, {word: coeff})
        stay = TensorElement(sp, keep)
        rounds += 1
    return out


def bracket_vector(Ma, Mb, a_vec, b_vec):
    """k-coordinates of a (x) b inside tensor_over_vertex(Ma, Mb)."""
    ca = Ma.right_coords(a_vec)
    dim = len(Ma.underline) * Mb.dim
    out = [ZERO] * dim
    for j, c in enumerate(ca):
        if c.is_zero():
            continue
        moved = Mb.act_left(c, b_vec)
        for r, v in enumerate(moved):
            out[j * Mb.dim + r] += v
    return out


class MutationResult:
    """Species, potential and arrow bookkeeping of one (semi-)mutation."""

    __slots__ = ("species", "potential", "arrow_provenance", "vertex", "old_species")

    def __init__(self, species, potential, arrow_provenance, vertex, old_species):
        self.species = species
        self.potential = potential
        self.arrow_provenance = arrow_provenance
        self.vertex = vertex
        self.old_species = old_species

    def __repr__(self):
        return (
            f"MutationResult(at {self.vertex!r}, {len(self.species.arrows)} arrows, "
            f"{len(self.potential.terms)} potential terms)"
        )


def semi_mutate(species, W, k):
    if species.has_loop_at(k):
        raise LoopAtVertex(f"cannot mutate at {k!r}: loop present")
    if species.two_cycle_partners(k):
        raise TwoCycleAtVertex(f"cannot mutate at {k!r}: 2-cycle present")
    W = rotate_off_vertex(W, k)

    ins = sorted((aid for aid, M in species.arrows.items() if M.target == k), key=repr)
    outs = sorted((aid for aid, M in species.arrows.items() if M.source == k), key=repr)

    arrows = {}
    provenance = {}
    for aid, M in species.arrows.items():
        if aid in ins or aid in outs:
            continue
        arrows[aid] = M
        provenance[aid] = ("kept", aid)
    for aid in ins + outs:
        nid = dual_id(aid)
        if nid in arrows:
            raise ValidationError(f"arrow name collision at {nid!r}")
        arrows[nid] = species.dual_of(aid)
        provenance[nid] = ("dual", aid)
    for alpha in outs:
        for beta in ins:
            nid = bracket_id(alpha, beta)
            if nid in arrows:
                raise ValidationError(f"arrow name collision at {nid!r}")
            arrows[nid] = tensor_over_vertex(
                species.arrows[alpha], species.arrows[beta], species.D
            )
            provenance[nid] = ("bracket", alpha, beta)
    new_species = Species(species.D, arrows)

    # [W]: collapse adjacent letter pairs passing through k
    bracketed = {}
    for word, coeff in W.terms.items():
        new_word = []
        i = 0
        while i < len(word):
            if i + 1 < len(word):
                aid, ja = word[i]
                bid, jb = word[i + 1]
                if species.arrows[aid].source == k:
                    nb = len(species.arrows[bid].underline)
                    new_word.append((bracket_id(aid, bid), ja * nb + jb))
                    i += 2
                    continue
            new_word.append(word[i])
            i += 1
        new_word = tuple(new_word)
        if new_word in bracketed:
            bracketed[new_word] = bracketed[new_word] + coeff
        else:
            bracketed[new_word] = coeff
    W_brack = TensorElement(new_species, bracketed)

    # the canonical new cyclic terms a* [a(x)b] b*
    delta = TensorElement.zero(new_species)
    for alpha in outs:
        Ma = species.arrows[alpha]
        da = species.dual_of(alpha)
        for beta in ins:
            Mb = species.arrows[beta]
            db = species.dual_of(beta)
            bid = bracket_id(alpha, beta)
            for ia in range(len(Ma.overline)):
                lead = TensorElement(
                    new_species,
                    {((dual_id(alpha), ia),): da.src_field.one()},
                )
                for jb in range(len(Mb.underline)):
                    mid = element_of_arrow(
                        new_species,
                        bid,
                        bracket_vector(Ma, Mb, Ma.overline[ia], Mb.underline[jb]),
                    )
                    tail = element_of_arrow(
                        new_species, dual_id(beta), db.overline[jb]
                    )
                    delta = delta + lead * mid * tail
    W_new = W_brack + delta
    if not is_potential(new_species, W_new):
        raise ValidationError("mutated potential failed the centrality check")
    return MutationResult(new_species, W_new, provenance, k, species)


def _field_matrix_inverse(rows, field):
    n = len(rows)
    aug = [
        list(r) + [field.one() if i == j else field.zero() for j in range(n)]
        for i, r in enumerate(rows)
    ]
    for c in range(n):
        piv = next((r for r in range(c, n) if not aug[r][c].is_zero()), None)
        if piv is None:
            raise ValidationError("carrier map is singular on the distinguished basis")
        aug[c], aug[piv] = aug[piv], aug[c]
        scale = aug[c][c].inverse()
        aug[c] = [x * scale for x in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c].is_zero():
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def transport_automorphism(orig_species, new_species, provenance, gamma):
    """gamma' on the mutated species from gamma on the original.

    Composite arrows map by the tensor of the factor maps; dual arrows by
    the unique semilinear map for which the transported Casimir element is
    again a Casimir element.
    """
    arrow_map = {}
    for nid, prov in provenance.items():
        if prov[0] == "kept":
            old = prov[1]
            img, mat = gamma.arrow_map[old]
            arrow_map[nid] = (img, [list(r) for r in mat])
        elif prov[0] == "bracket":
            alpha, beta = prov[1], prov[2]
            ia, mata = gamma.arrow_map[alpha]
            ib, matb = gamma.arrow_map[beta]
            Ma = orig_species.arrows[alpha]
            Mb = orig_species.arrows[beta]
            Na = orig_species.arrows[ia]
            Nb = orig_species.arrows[ib]
            cols = []
            for j in range(len(Ma.underline)):
                va = mat_vec(mata, Ma.underline[j])
                for r in range(Mb.dim):
                    vb = mat_vec(matb, Mb.basis_vector(r))
                    cols.append(bracket_vector(Na, Nb, va, vb))
            arrow_map[nid] = (bracket_id(ia, ib), transpose(cols))
        else:
            alpha = prov[1]
            ia, mata = gamma.arrow_map[alpha]
            Ma = orig_species.arrows[alpha]
            Na = orig_species.arrows[ia]
            dual_a = orig_species.dual_of(alpha)
            dual_na = orig_species.dual_of(ia)
            k_field = Na.src_field
            nu = len(Ma.underline)
            g = [
                [Na.right_coords(mat_vec(mata, Ma.underline[j]))[l] for j in range(nu)]
                for l in range(nu)
            ]
            ginv = _field_matrix_inverse(g, k_field)
            images = []
            for j in range(nu):
                vec = [ZERO] * dual_na.dim
                for l in range(nu):
                    if ginv[j][l].is_zero():
                        continue
                    moved = dual_na.act_left(ginv[j][l], dual_na.overline[l])
                    vec = [a + b for a, b in zip(vec, moved)]
                images.append(vec)
            fm = gamma.field_maps[Ma.source]
            cols = []
            for r in range(dual_a.dim):
                coords = dual_a.left_coords(dual_a.basis_vector(r))
                vec = [ZERO] * dual_na.dim
                for j, d in enumerate(coords):
                    if d.is_zero():
                        continue
                    moved = dual_na.act_left(fm.apply(d), images[j])
                    vec = [a + b for a, b in zip(vec, moved)]
                cols.append(vec)
            arrow_map[nid] = (dual_id(ia), transpose(cols))
    return SpeciesMap(
        new_species,
        new_species,
        dict(gamma.vertex_map),
        dict(gamma.field_maps),
        arrow_map,
    )


def mutate_orbit(species, W, gamma, orbit):
    """Chain semi-mutations along a permutation orbit; transport gamma."""
    from .jacobian import check_conditions_AB

    orbit = list(orbit)
    if not orbit:
        raise ValidationError("empty orbit")
    seen = set()
    v = orbit[0]
    while v not in seen:
        seen.add(v)
        v = gamma.vertex_map[v]
    if seen != set(orbit):
        raise ValidationError(
            f"orbit {orbit!r} is not a full orbit of the automorphism's vertex map"
        )
    for aid, M in species.arrows.items():
        if M.source in seen and M.target in seen:
            raise NotSparse(f"arrow {aid!r} connects two orbit vertices")
    if check_conditions_AB(species, W, gamma) != (True, True):
        raise ConditionsABViolated("input automorphism fails (A)/(B)")

    current_species = species
    current_W = W
    provenance = {aid: ("kept", aid) for aid in species.arrows}
    for k in orbit:
        if not is_reduced(current_W):
            raise NotSparse(
                f"potential is not reduced before mutating at {k!r}"
            )
        step = semi_mutate(current_species, current_W, k)
        composed = {}
        for nid, prov in step.arrow_provenance.items():
            if prov[0] == "kept":
                composed[nid] = provenance[prov[1]]
            elif prov[0] == "dual":
                base = provenance[prov[1]]
                if base[0] != "kept":
                    raise NotSparse(
                        f"arrow {prov[1]!r} was already rewritten earlier in the orbit"
                    )
                composed[nid] = ("dual", base[1])
            else:
                ba = provenance[prov[1]]
                bb = provenance[prov[2]]
                if ba[0] != "kept" or bb[0] != "kept":
                    raise NotSparse(
                        "composite factors were already rewritten earlier in the orbit"
                    )
                composed[nid] = ("bracket", ba[1], bb[1])
        provenance = composed
        current_species = step.species
        current_W = step.potential

    result = MutationResult(
        current_species, current_W, provenance, tuple(orbit), species
    )
    gamma_new = transport_automorphism(species, current_species, provenance, gamma)
    if check_conditions_AB(current_species, current_W, gamma_new) != (True, True):
        raise ConditionsABViolated("transported automorphism fails (A)/(B)")
    return result, gamma_new
