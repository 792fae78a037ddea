"""Tensor products of species and the splitting of composite vertices.

The product of two species lives over the quiver Q1 (x)~ Q2: one vertex per
vertex pair, one arrow (alpha, e_j) resp. (e_i, beta) per factor arrow and
opposite vertex, and one reversed arrow (alpha*, beta*) per arrow pair.
Vertex (i, j) carries D1_i tensored with D2_j over the base field.  When at
most one of the two factors is a genuine extension that tensor is itself a
field and the product materialises directly as a Species; otherwise the
composite algebras have to be split first, which basic_version does.

Splitting convention: all extension fields in sight must equal a single
Galois extension G of the base field.  A composite vertex G (x) G breaks
into one copy per automorphism in the fixed Galois order, copy k reading
the value of d1 (x) d2 as d1 . rho_k(d2).  Every incident bimodule is cut
into matching components and rebuilt through build_from_carrier with the
whole twist moved to the right action, so left actions stay plain; the
potential is transported by the same component maps.
"""

from .bimodule import Bimodule, _power_label, build_from_carrier
from .coeffalg import CoefficientAlgebra
from .errors import (
    DivisionByZero,
    NotGalois,
    UnknownType,
    UnsupportedAlgebra,
    ValidationError,
    VertexMismatch,
)
from .linalg import identity_matrix, invert, mat_vec, nullspace
from .scalars import ONE, ZERO, NumberField, galois_automorphisms
from .species import Species
from .tensor import TensorElement, element_of_arrow


def _mult_matrix(field, elem):
    cols = [(elem * b).coords for b in field.basis()]
    return [[cols[j][i] for j in range(field.degree)] for i in range(field.degree)]


def _kron_mat(a, b):
    na, nb = len(a), len(b)
    out = [[ZERO] * (na * nb) for _ in range(na * nb)]
    for i1 in range(na):
        for j1 in range(na):
            if a[i1][j1] == 0:
                continue
            for i2 in range(nb):
                for j2 in range(nb):
                    out[i1 * nb + i2][j1 * nb + j2] = a[i1][j1] * b[i2][j2]
    return out


def _kron_vec(x, y):
    out = [ZERO] * (len(x) * len(y))
    for r1, v1 in enumerate(x):
        if v1 == 0:
            continue
        for r2, v2 in enumerate(y):
            out[r1 * len(y) + r2] = v1 * v2
    return out


def _unit_vec(degree):
    return [ONE] + [ZERO] * (degree - 1)


class _Part:
    """One tensor factor of a product arrow: a vertex field or a bimodule."""

    __slots__ = ("field", "bim", "dim", "tgt_field", "src_field",
                 "left_gen", "right_gen", "labels")

    def __init__(self, field=None, bim=None):
        if bim is None:
            self.field = field
            self.bim = None
            self.dim = field.degree
            self.tgt_field = field
            self.src_field = field
            mat = _mult_matrix(field, field.gen())
            self.left_gen = mat
            self.right_gen = mat
            self.labels = ["1"] if field.is_base else [
                _power_label(r) for r in range(field.degree)
            ]
        else:
            self.field = None
            self.bim = bim
            self.dim = bim.dim
            self.tgt_field = bim.tgt_field
            self.src_field = bim.src_field
            self.left_gen = bim.left_gen
            self.right_gen = bim.right_gen
            self.labels = list(bim.labels)


class QuiverArrow:
    __slots__ = ("source", "target", "block", "left", "right")

    def __init__(self, source, target, block, left, right):
        self.source = source
        self.target = target
        self.block = block
        self.left = left
        self.right = right

    def __repr__(self):
        return f"QuiverArrow({self.target!r} <- {self.source!r}, {self.block})"


class TensorQuiver:
    """Vertex pairs and the three arrow blocks of Q1 (x)~ Q2.

    Arrow blocks: "left" pairs a Q1-arrow with a Q2-vertex, "right" a
    Q1-vertex with a Q2-arrow, and "dual" reverses a pair of arrows,
    running from (t(alpha), t(beta)) back to (s(alpha), s(beta)).
    """

    __slots__ = ("vertices", "arrows")

    def __init__(self, vertices, arrows):
        self.vertices = list(vertices)
        self.arrows = dict(arrows)

    def __repr__(self):
        return f"TensorQuiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def quiver_tensor(Q1, Q2):
    """The product quiver of two species (only their shapes are read)."""
    vertices = [(i, j) for j in Q2.D.vertex_ids for i in Q1.D.vertex_ids]
    arrows = {}
    for aid, M in Q1.arrows.items():
        for j in Q2.D.vertex_ids:
            arrows[f"({aid},e{j})"] = QuiverArrow(
                (M.source, j), (M.target, j), "left", aid, j
            )
    for i in Q1.D.vertex_ids:
        for bid, N in Q2.arrows.items():
            arrows[f"(e{i},{bid})"] = QuiverArrow(
                (i, N.source), (i, N.target), "right", i, bid
            )
    for aid, M in Q1.arrows.items():
        for bid, N in Q2.arrows.items():
            arrows[f"({aid}*,{bid}*)"] = QuiverArrow(
                (M.target, N.target), (M.source, N.source), "dual", aid, bid
            )
    return TensorQuiver(vertices, arrows)


def _pair_field(F1, F2):
    """The plain field of a vertex pair, or None when both are extensions."""
    if not F1.is_base and not F2.is_base:
        return None
    return F1 if not F1.is_base else F2


def _kron_bimodule(qa, p1, p2, vertex_algebras):
    """The product bimodule on its flattened k-basis, for field endpoints."""
    tgt_field = _pair_field(*vertex_algebras[qa.target])
    src_field = _pair_field(*vertex_algebras[qa.source])
    if tgt_field is None or src_field is None:
        raise UnsupportedAlgebra(
            f"arrow {qa!r} touches a composite vertex algebra; split it first"
        )
    Ft1, _ = vertex_algebras[qa.target]
    Fs1, _ = vertex_algebras[qa.source]
    left_host2 = Ft1.is_base and not tgt_field.is_base
    right_host2 = Fs1.is_base and not src_field.is_base
    left_gen = (
        _kron_mat(identity_matrix(p1.dim), p2.left_gen)
        if left_host2
        else _kron_mat(p1.left_gen, identity_matrix(p2.dim))
    )
    right_gen = (
        _kron_mat(identity_matrix(p1.dim), p2.right_gen)
        if right_host2
        else _kron_mat(p1.right_gen, identity_matrix(p2.dim))
    )
    labels = [f"{l1}(x){l2}" for l1 in p1.labels for l2 in p2.labels]
    return Bimodule(
        qa.source, qa.target, src_field, tgt_field, labels, left_gen, right_gen
    )


class ProductSpecies:
    """The species over Q1 (x)~ Q2 together with its provenance.

    vertex_algebras maps each vertex pair to its two factor fields, and
    arrow_parts keeps the two tensor factors of every arrow (the dual
    block stores the factor duals, taken with the factor trace data).
    The materialised .species exists exactly when every vertex algebra is
    a field, i.e. when at least one factor species is entirely rational;
    otherwise it is None and basic_version does the splitting.
    """

    __slots__ = ("left", "right", "quiver", "vertex_algebras", "arrow_parts",
                 "species")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.quiver = quiver_tensor(left, right)
        self.vertex_algebras = {
            (i, j): (left.D.field_of(i), right.D.field_of(j))
            for (i, j) in self.quiver.vertices
        }
        self.arrow_parts = {}
        for aid, qa in self.quiver.arrows.items():
            if qa.block == "left":
                parts = (_Part(bim=left.arrows[qa.left]),
                         _Part(field=right.D.field_of(qa.right)))
            elif qa.block == "right":
                parts = (_Part(field=left.D.field_of(qa.left)),
                         _Part(bim=right.arrows[qa.right]))
            else:
                parts = (_Part(bim=left.dual_of(qa.left)),
                         _Part(bim=right.dual_of(qa.right)))
            self.arrow_parts[aid] = parts
        if all(_pair_field(F1, F2) is not None
               for F1, F2 in self.vertex_algebras.values()):
            self.species = self._materialize()
        else:
            self.species = None

    def _materialize(self):
        D = CoefficientAlgebra(
            [(v, _pair_field(*self.vertex_algebras[v]))
             for v in self.quiver.vertices],
            {
                (i, j): s
                for (i, j) in self.quiver.vertices
                if (s := self.left.D.trace_scale(i) * self.right.D.trace_scale(j)) != 1
            },
        )
        arrows = {
            aid: _kron_bimodule(qa, *self.arrow_parts[aid], self.vertex_algebras)
            for aid, qa in self.quiver.arrows.items()
        }
        return Species(D, arrows)

    def __repr__(self):
        kind = "materialised" if self.species is not None else "composite"
        return (
            f"ProductSpecies({len(self.quiver.vertices)} vertices, "
            f"{len(self.quiver.arrows)} arrows, {kind})"
        )


def species_product(S1, S2):
    return ProductSpecies(S1, S2)


def _potential_terms(S1, S2):
    """Yield (sign, letters) for the product potential, letters as
    (arrow id, flattened product vector) triples.

    The positive family runs over the right basis of each M1-arrow against
    the left basis of each M2-arrow; the negative family swaps the sides.
    Dual letters pair each basis vector with its trace-dual partner.
    """
    for aid1, M1 in S1.arrows.items():
        A1 = S1.dual_of(aid1)
        sa, ta = M1.source, M1.target
        u_sa = _unit_vec(S1.D.field_of(sa).degree)
        u_ta = _unit_vec(S1.D.field_of(ta).degree)
        for aid2, M2 in S2.arrows.items():
            A2 = S2.dual_of(aid2)
            sb, tb = M2.source, M2.target
            u_sb = _unit_vec(S2.D.field_of(sb).degree)
            u_tb = _unit_vec(S2.D.field_of(tb).degree)
            dual_aid = f"({aid1}*,{aid2}*)"
            for i, a in enumerate(M1.underline):
                astar = A1.overline[i]
                for r, bprime in enumerate(M2.overline):
                    bprimestar = A2.underline[r]
                    yield ONE, [
                        (f"({aid1},e{sb})", _kron_vec(a, u_sb)),
                        (dual_aid, _kron_vec(astar, bprimestar)),
                        (f"(e{ta},{aid2})", _kron_vec(u_ta, bprime)),
                    ]
            for r, aprime in enumerate(M1.overline):
                aprimestar = A1.underline[r]
                for i, b in enumerate(M2.underline):
                    bstar = A2.overline[i]
                    yield -ONE, [
                        (f"(e{sa},{aid2})", _kron_vec(u_sa, b)),
                        (dual_aid, _kron_vec(aprimestar, bstar)),
                        (f"({aid1},e{tb})", _kron_vec(aprime, u_tb)),
                    ]


def product_potential(S1, S2, product=None):
    """W1 - W2 on the materialised product species."""
    prod = product if product is not None else species_product(S1, S2)
    sp = prod.species
    if sp is None:
        raise UnsupportedAlgebra(
            "the product has composite vertex algebras; basic_version computes "
            "the split species together with its transported potential"
        )
    W = TensorElement.zero(sp)
    for sign, letters in _potential_terms(S1, S2):
        term = None
        for aid, vec in letters:
            el = element_of_arrow(sp, aid, vec)
            term = el if term is None else term * el
        W = W + term.scale(sign)
    return W


# -- basic version ----------------------------------------------------------------


def _intertwiner(pairs, dim_m, dim_c):
    """A matrix X with X A = B X for every (A, B) pair, or None.

    Searches the solution space for an invertible member (for the twisted
    lines this module feeds in, any nonzero solution qualifies).
    """
    rows = []
    for A, B in pairs:
        for r in range(dim_c):
            for c in range(dim_m):
                row = [ZERO] * (dim_c * dim_m)
                for k in range(dim_m):
                    row[r * dim_m + k] += A[k][c]
                for k in range(dim_c):
                    row[k * dim_m + c] -= B[r][k]
                rows.append(row)
    for vec in nullspace(rows):
        X = [vec[r * dim_m:(r + 1) * dim_m] for r in range(dim_c)]
        try:
            invert([list(r) for r in X])
        except DivisionByZero:
            continue
        return X
    return None


def _present_line(part, G, autos):
    """Present a part as (carrier, right twist index, theta) or None.

    theta maps part coordinates to carrier power-basis coordinates, is
    left-plain, twists the right action by the returned automorphism, and
    is normalised so the part's first k-basis vector goes to 1.
    """
    if part.bim is None:
        return (part.field, 0, identity_matrix(part.dim))
    T, S = part.tgt_field, part.src_field
    if T.is_base and S.is_base:
        if part.dim == 1:
            return (NumberField.rationals(), 0, [[ONE]])
        return None
    if G is None or part.dim != G.degree:
        return None
    gmat = _mult_matrix(G, G.gen())
    twists = range(len(autos)) if S == G else (0,)
    for t in twists:
        pairs = []
        if T == G:
            pairs.append((part.left_gen, gmat))
        if S == G:
            pairs.append((part.right_gen, _mult_matrix(G, autos[t].gen_image)))
        theta = _intertwiner(pairs, part.dim, G.degree)
        if theta is None:
            continue
        v0 = G.element([theta[r][0] for r in range(G.degree)])
        if v0.is_zero():
            continue
        norm = _mult_matrix(G, v0.inverse())
        theta = [
            [sum(norm[i][k] * theta[k][c] for k in range(G.degree))
             for c in range(part.dim)]
            for i in range(G.degree)
        ]
        return (G, t, theta)
    return None


class _Component:
    __slots__ = ("aid", "galois", "bimodule", "transport")

    def __init__(self, aid, galois, bimodule, transport):
        self.aid = aid
        self.galois = galois
        self.bimodule = bimodule
        self.transport = transport


def _theta_element(C, theta, col):
    return C.element([theta[r][col] for r in range(C.degree)])


def _arrow_components(pre_aid, qa, parts, G, autos, vertex_algebras):
    """Cut one product arrow into carrier-canonical component arrows."""
    p1, p2 = parts
    pres1 = _present_line(p1, G, autos)
    pres2 = _present_line(p2, G, autos)
    if pres1 is None or pres2 is None:
        bim = _kron_bimodule(qa, p1, p2, vertex_algebras)
        n = p1.dim * p2.dim
        return [_Component(pre_aid, None, bim, identity_matrix(n))]
    C1, rt1_idx, th1 = pres1
    C2, rt2_idx, th2 = pres2
    QQ = NumberField.rationals()
    ident = autos[0]
    rt1 = autos[rt1_idx] if C1 == G else ident
    rt2 = autos[rt2_idx] if C2 == G else ident
    split = C1 == G and C2 == G
    K = G if (C1 == G or C2 == G) else QQ
    Ft1, Ft2 = vertex_algebras[qa.target]
    Fs1, Fs2 = vertex_algebras[qa.source]
    components = []
    for k, rho in enumerate(autos if split else [ident]):
        if not Ft1.is_base and not Ft2.is_base:
            vid_t = qa.target + (k,)
            tgt_field, psi_l = G, ident
        elif not Ft1.is_base:
            vid_t, tgt_field, psi_l = qa.target, Ft1, ident
        elif not Ft2.is_base:
            vid_t, tgt_field, psi_l = qa.target, Ft2, rho
        else:
            vid_t, tgt_field, psi_l = qa.target, QQ, ident
        if not Fs1.is_base and not Fs2.is_base:
            source_copy = autos.index(rt1.inverse().compose(rho.compose(rt2)))
            vid_s = qa.source + (source_copy,)
            src_field, psi_r = G, rt1
        elif not Fs1.is_base:
            vid_s, src_field, psi_r = qa.source, Fs1, rt1
        elif not Fs2.is_base:
            vid_s, src_field, psi_r = qa.source, Fs2, rho.compose(rt2)
        else:
            vid_s, src_field, psi_r = qa.source, QQ, ident
        twist = (
            autos.index(psi_l.inverse().compose(psi_r))
            if src_field == G else 0
        )
        bim = build_from_carrier(vid_s, vid_t, src_field, tgt_field, K, 0, twist)
        unl = psi_l.inverse()
        transport = [[ZERO] * (p1.dim * p2.dim) for _ in range(K.degree)]
        for r1 in range(p1.dim):
            x1 = _theta_element(C1, th1, r1)
            a = x1 if C1 == K else K.from_rational(x1.coords[0])
            for r2 in range(p2.dim):
                x2 = _theta_element(C2, th2, r2)
                if C2 == G:
                    b = rho.apply(x2)
                    b = b if K == G else K.from_rational(b.coords[0])
                else:
                    b = K.from_rational(x2.coords[0])
                val = a * b
                if K == G:
                    val = unl.apply(val)
                for r, coord in enumerate(val.coords):
                    transport[r][r1 * p2.dim + r2] = coord
        components.append(
            _Component(f"{pre_aid}@{k}" if split else pre_aid,
                       k if split else None, bim, transport)
        )
    if sum(c.bimodule.dim for c in components) != p1.dim * p2.dim:
        raise ValidationError(
            f"component dimensions of {pre_aid} do not add up to the product"
        )
    return components


class BasicVersion:
    """Split species with the transported potential and provenance tags.

    Unpacks as (species, potential).  vertex_tags maps every vertex to
    (original pair, copy index) and arrow_tags maps every arrow to
    (block, original arrow, Galois index of its component); copy and
    Galois entries are None where nothing was split.
    """

    __slots__ = ("species", "potential", "vertex_tags", "arrow_tags")

    def __init__(self, species, potential, vertex_tags, arrow_tags):
        self.species = species
        self.potential = potential
        self.vertex_tags = dict(vertex_tags)
        self.arrow_tags = dict(arrow_tags)

    def __iter__(self):
        return iter((self.species, self.potential))

    def __repr__(self):
        return (
            f"BasicVersion({len(self.species.D.vertex_ids)} vertices, "
            f"{len(self.species.arrows)} arrows)"
        )


def _component_letter(sp, comps, vec):
    acc = TensorElement.zero(sp)
    for comp in comps:
        acc = acc + element_of_arrow(sp, comp.aid, mat_vec(comp.transport, vec))
    return acc


def basic_version(product, potential=None):
    """Split composite vertex algebras into Galois copies.

    Accepts a ProductSpecies (a plain Species passes through untouched).
    With potential=None the product potential is computed and transported
    in one go, which is the only route when the product does not
    materialise; an explicit potential must live on the materialised
    product species.
    """
    if isinstance(product, Species):
        if potential is not None and potential.species is not product:
            raise VertexMismatch("the potential does not live on this species")
        W = potential if potential is not None else TensorElement.zero(product)
        return BasicVersion(
            product,
            W,
            {v: (v, None) for v in product.D.vertex_ids},
            {aid: (None, aid, None) for aid in product.arrows},
        )
    prod = product
    if potential is not None:
        if prod.species is None:
            raise ValidationError(
                "an explicit potential needs a materialised product; "
                "pass potential=None to have it computed during the split"
            )
        if potential.species is not prod.species:
            raise VertexMismatch(
                "the potential does not live on this product species"
            )
    extensions = []
    for F1, F2 in prod.vertex_algebras.values():
        for F in (F1, F2):
            if not F.is_base and all(F != E for E in extensions):
                extensions.append(F)
    if len(extensions) > 1:
        names = ", ".join(E.name for E in extensions)
        raise UnsupportedAlgebra(
            f"vertex fields mix several extensions ({names}); splitting "
            "needs a single Galois extension over the base field"
        )
    if not extensions:
        sp = prod.species
        W = potential if potential is not None else product_potential(
            prod.left, prod.right, prod
        )
        return BasicVersion(
            sp,
            W,
            {v: (v, None) for v in sp.D.vertex_ids},
            {aid: (qa.block, aid, None) for aid, qa in prod.quiver.arrows.items()},
        )
    G = extensions[0]
    try:
        autos = galois_automorphisms(G)
    except NotGalois as exc:
        raise UnsupportedAlgebra(f"not a Galois extension: {exc}") from None

    copies = len(autos)
    vertex_list = []
    vertex_tags = {}
    scales = {}
    for (i, j) in prod.quiver.vertices:
        F1, F2 = prod.vertex_algebras[(i, j)]
        s = prod.left.D.trace_scale(i) * prod.right.D.trace_scale(j)
        if F1.is_base or F2.is_base:
            vid = (i, j)
            vertex_list.append((vid, _pair_field(F1, F2)))
            vertex_tags[vid] = ((i, j), None)
            if s != 1:
                scales[vid] = s
        else:
            for k in range(copies):
                vid = (i, j, k)
                vertex_list.append((vid, G))
                vertex_tags[vid] = ((i, j), k)
                if s != 1:
                    scales[vid] = s
    D = CoefficientAlgebra(vertex_list, scales)

    comp_table = {}
    arrows = {}
    arrow_tags = {}
    for pre_aid, qa in prod.quiver.arrows.items():
        comps = _arrow_components(
            pre_aid, qa, prod.arrow_parts[pre_aid], G, autos,
            prod.vertex_algebras,
        )
        comp_table[pre_aid] = comps
        for comp in comps:
            arrows[comp.aid] = comp.bimodule
            arrow_tags[comp.aid] = (qa.block, pre_aid, comp.galois)
    sp = Species(D, arrows)

    if potential is not None:
        W = _transport_potential(prod, comp_table, sp, potential)
    else:
        W = TensorElement.zero(sp)
        for sign, letters in _potential_terms(prod.left, prod.right):
            term = None
            for aid, vec in letters:
                el = _component_letter(sp, comp_table[aid], vec)
                term = el if term is None else term * el
            W = W + term.scale(sign)
    return BasicVersion(sp, W, vertex_tags, arrow_tags)


def _transport_potential(prod, comp_table, sp, potential):
    old = prod.species
    out = TensorElement.zero(sp)
    for word, coeff in potential.terms.items():
        if word[0] == "e":
            out = out + TensorElement.scalar_at(sp, word[1], coeff)
            continue
        acc = None
        for aid, j in word:
            M = old.arrows[aid]
            letter = _component_letter(sp, comp_table[aid], M.underline[j])
            acc = letter if acc is None else acc * letter
        out = out + acc.scale_field(coeff)
    return out


# -- homogeneity table --------------------------------------------------------------


_EXCEPTIONAL_L = {("E", 6): 6, ("E", 7): 9, ("E", 8): 15, ("F", 4): 6, ("G", 2): 3}


def homogeneity_l(dynkin_type):
    """Common tau-orbit length of the representation-finite tensor algebra
    attached to a Dynkin label, from the fixed table; A_n needs odd n."""
    label = str(dynkin_type).strip()
    family, digits = label[:1].upper(), label[1:]
    if not digits.isdigit():
        raise UnknownType(f"not a Dynkin label: {dynkin_type!r}")
    n = int(digits)
    if family == "A" and n >= 1:
        if n % 2 == 0:
            raise UnknownType(f"A{n} has no homogeneity value (even rank)")
        return (n + 1) // 2
    if family == "B" and n >= 2:
        return n
    if family == "C" and n >= 3:
        return n
    if family == "D" and n >= 4:
        return n - 1
    value = _EXCEPTIONAL_L.get((family, n))
    if value is None:
        raise UnknownType(f"not a Dynkin label: {dynkin_type!r}")
    return value
