"""Species: a coefficient algebra plus a bimodule for every quiver arrow.

The species owns the dual bimodules (they depend on its trace data) and a
small cache of conjugation matrices used when coefficients are pushed
through letters during normal-form multiplication.
"""

from .bimodule import dualize, pair_mx, pair_xm
from .errors import FieldMismatch, NotAMorphism, ValidationError, VertexMismatch
from .linalg import invert, mat_vec
from .scalars import ZERO


class Species:
    __slots__ = ("D", "arrows", "_duals", "_conj_cache")

    def __init__(self, D, arrows, check=True):
        """arrows: ordered dict arrow_id -> Bimodule."""
        self.D = D
        self.arrows = dict(arrows)
        self._duals = {}
        self._conj_cache = {}
        if check:
            self.validate()

    def validate(self):
        for aid, M in self.arrows.items():
            if M.source not in self.D or M.target not in self.D:
                raise ValidationError(f"arrow {aid!r} touches an unknown vertex")
            if M.src_field != self.D.field_of(M.source):
                raise ValidationError(f"arrow {aid!r}: source field mismatch")
            if M.tgt_field != self.D.field_of(M.target):
                raise ValidationError(f"arrow {aid!r}: target field mismatch")

    @property
    def vertex_ids(self):
        return self.D.vertex_ids

    def arrows_out(self, v):
        return [aid for aid, M in self.arrows.items() if M.source == v]

    def arrows_in(self, v):
        return [aid for aid, M in self.arrows.items() if M.target == v]

    def has_loop_at(self, v):
        return any(M.source == v and M.target == v for M in self.arrows.values())

    def two_cycle_partners(self, v):
        """Vertices joined to v by arrows in both directions."""
        outs = {self.arrows[a].target for a in self.arrows_out(v)}
        ins = {self.arrows[a].source for a in self.arrows_in(v)}
        return sorted(outs & ins, key=repr)

    def dual_of(self, aid):
        if aid not in self._duals:
            self._duals[aid] = dualize(self.arrows[aid], self.D)
        return self._duals[aid]

    def pair_mx(self, aid, m_vec, f_vec):
        return pair_mx(self.arrows[aid], self.D, m_vec, f_vec)

    def pair_xm(self, aid, f_vec, m_vec):
        return pair_xm(self.arrows[aid], self.D, f_vec, m_vec)

    def left_conj(self, aid, d):
        """Columns right_coords(d . u_j): how a left coefficient passes a letter."""
        key = (aid, d.coords)
        cached = self._conj_cache.get(key)
        if cached is None:
            M = self.arrows[aid]
            cached = [M.right_coords(M.act_left(d, u)) for u in M.underline]
            if len(self._conj_cache) < 4096:
                self._conj_cache[key] = cached
        return cached

    def __repr__(self):
        return f"Species({len(self.D.vertex_ids)} vertices, {len(self.arrows)} arrows)"


class SpeciesMap:
    """Structure-preserving map between species.

    Carries a vertex bijection, a field map per vertex, and per arrow the
    image arrow plus the k-basis matrix of the carrier map.  Used both for
    transporting potentials across documented identifications and as the
    underlying data of algebra automorphisms.
    """

    __slots__ = ("src", "dst", "vertex_map", "field_maps", "arrow_map")

    def __init__(self, src, dst, vertex_map, field_maps, arrow_map):
        self.src = src
        self.dst = dst
        self.vertex_map = dict(vertex_map)
        self.field_maps = dict(field_maps)
        self.arrow_map = {aid: (bid, [list(r) for r in mat]) for aid, (bid, mat) in arrow_map.items()}

    @classmethod
    def identity(cls, species):
        from .scalars import FieldAutomorphism
        from .linalg import identity_matrix

        return cls(
            species,
            species,
            {v: v for v in species.vertex_ids},
            {v: FieldAutomorphism.identity(species.D.field_of(v)) for v in species.vertex_ids},
            {aid: (aid, identity_matrix(M.dim)) for aid, M in species.arrows.items()},
        )

    def map_scalar(self, v, elem):
        fm = self.field_maps[v]
        out = fm.apply(elem)
        want = self.dst.D.field_of(self.vertex_map[v])
        if out.field != want:
            raise NotAMorphism(
                f"field map at vertex {v!r} lands in {out.field.name}, expected {want.name}"
            )
        return out

    def map_arrow_vector(self, aid, vec):
        bid, mat = self.arrow_map[aid]
        return bid, mat_vec(mat, vec)

    def check_bimodule_compatibility(self, aid):
        """gamma(d . m . d') = gamma(d) . gamma(m) . gamma(d') on generators."""
        M = self.src.arrows[aid]
        bid, mat = self.arrow_map[aid]
        N = self.dst.arrows[bid]
        if self.vertex_map[M.source] != N.source or self.vertex_map[M.target] != N.target:
            raise NotAMorphism(f"arrow {aid!r} image endpoints disagree")
        try:
            invert([list(r) for r in mat])
        except Exception:
            raise NotAMorphism(f"arrow {aid!r}: carrier map is not bijective") from None
        gt = M.tgt_field.gen()
        gs = M.src_field.gen()
        for r in range(M.dim):
            e = M.basis_vector(r)
            lhs = mat_vec(mat, M.act_left(gt, e))
            rhs = N.act_left(self.map_scalar(M.target, gt), mat_vec(mat, e))
            if lhs != rhs:
                raise NotAMorphism(f"arrow {aid!r}: left action not intertwined")
            lhs = mat_vec(mat, M.act_right(e, gs))
            rhs = N.act_right(mat_vec(mat, e), self.map_scalar(M.source, gs))
            if lhs != rhs:
                raise NotAMorphism(f"arrow {aid!r}: right action not intertwined")
        return True

    def apply(self, element):
        """Transport a tensor element along the map."""
        from .tensor import TensorElement, element_of_arrow

        out = TensorElement.zero(self.dst)
        for word, coeff in element.terms.items():
            if word[0] == "e":
                v = word[1]
                term = TensorElement.idempotent(self.dst, self.vertex_map[v])
                term = term.scale_field(self.map_scalar(v, coeff))
                out = out + term
                continue
            acc = None
            src_vertex = None
            for aid, j in word:
                M = self.src.arrows[aid]
                bid, vec = self.map_arrow_vector(aid, M.underline[j])
                letter = element_of_arrow(self.dst, bid, vec)
                acc = letter if acc is None else acc * letter
                src_vertex = M.source
            acc = acc.scale_field(self.map_scalar(src_vertex, coeff))
            out = out + acc
        return out


def relabel_species(species, vertex_names, arrow_names=None):
    """Fresh species with renamed vertices (and optionally arrows).

    Returns (new_species, SpeciesMap old->new with identity carriers).
    """
    from .bimodule import Bimodule
    from .coeffalg import CoefficientAlgebra
    from .linalg import identity_matrix
    from .scalars import FieldAutomorphism

    D = species.D
    new_D = CoefficientAlgebra(
        [(vertex_names[v], D.field_of(v)) for v in D.vertex_ids],
        {vertex_names[v]: D.trace_scale(v) for v in D.vertex_ids if D.trace_scale(v) != 1},
    )
    arrow_names = arrow_names or {aid: aid for aid in species.arrows}
    new_arrows = {}
    for aid, M in species.arrows.items():
        new_arrows[arrow_names[aid]] = Bimodule(
            vertex_names[M.source],
            vertex_names[M.target],
            M.src_field,
            M.tgt_field,
            M.labels,
            M.left_gen,
            M.right_gen,
            M.underline,
            M.overline,
            check=False,
        )
    new_species = Species(new_D, new_arrows, check=False)
    smap = SpeciesMap(
        species,
        new_species,
        vertex_names,
        {v: FieldAutomorphism.identity(D.field_of(v)) for v in D.vertex_ids},
        {aid: (arrow_names[aid], identity_matrix(M.dim)) for aid, M in species.arrows.items()},
    )
    return new_species, smap
