"""Elements of the completed tensor algebra and the potential calculus.

Words are tuples of letters read left to right against composition:
w = l1 ⊗ ... ⊗ ln with s(l_m) = t(l_{m+1}), so the whole word runs from
s(ln) to t(l1).  Each letter is (arrow_id, underline_index); the unique
normal form keeps coefficients as a single source-field element attached
at the right end.  Degree-0 terms use the word ("e", vertex).

The left derivative removes l1, the right derivative removes ln.
"""

from .errors import FieldMismatch, VertexMismatch
from .scalars import ONE, ZERO


def word_target(species, word):
    if word[0] == "e":
        return word[1]
    aid, _ = word[0]
    return species.arrows[aid].target


def word_source(species, word):
    if word[0] == "e":
        return word[1]
    aid, _ = word[-1]
    return species.arrows[aid].source


def word_degree(word):
    return 0 if word[0] == "e" else len(word)


class TensorElement:
    __slots__ = ("species", "terms")

    def __init__(self, species, terms=None):
        self.species = species
        self.terms = {}
        if terms:
            for word, coeff in terms.items():
                if not coeff.is_zero():
                    self.terms[word] = coeff

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, species):
        return cls(species)

    @classmethod
    def idempotent(cls, species, v):
        field = species.D.field_of(v)
        return cls(species, {("e", v): field.one()})

    @classmethod
    def scalar_at(cls, species, v, d):
        if d.field != species.D.field_of(v):
            raise FieldMismatch(f"scalar at vertex {v!r} lives in {d.field.name}")
        return cls(species, {("e", v): d})

    @classmethod
    def letter(cls, species, aid, j):
        M = species.arrows[aid]
        return cls(species, {((aid, j),): M.src_field.one()})

    # -- ring structure ----------------------------------------------------------

    def _add_term(self, acc, word, coeff):
        cur = acc.get(word)
        new = coeff if cur is None else cur + coeff
        if new.is_zero():
            acc.pop(word, None)
        else:
            acc[word] = new

    def __add__(self, other):
        self._same_species(other)
        acc = dict(self.terms)
        for word, coeff in other.terms.items():
            self._add_term(acc, word, coeff)
        return TensorElement(self.species, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorElement(self.species, {w: -c for w, c in self.terms.items()})

    def scale(self, q):
        """Multiply by a rational scalar."""
        if q == 0:
            return TensorElement.zero(self.species)
        return TensorElement(self.species, {w: c * q for w, c in self.terms.items()})

    def scale_field(self, d):
        """Right-multiply by a field element at the common source vertex."""
        acc = {}
        for word, coeff in self.terms.items():
            if coeff.field != d.field:
                raise FieldMismatch("scale_field across different source fields")
            self._add_term(acc, word, coeff * d)
        return TensorElement(self.species, acc)

    def _same_species(self, other):
        if self.species is not other.species:
            raise VertexMismatch("elements live on different species")

    def __mul__(self, other):
        self._same_species(other)
        sp = self.species
        acc = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if w1[0] == "e":
                    if w1[1] != word_target(sp, w2):
                        continue
                    pushed = _push_left(sp, c1, w2, c2)
                    for w, c in pushed.items():
                        self._add_term(acc, w, c)
                elif w2[0] == "e":
                    if word_source(sp, w1) != w2[1]:
                        continue
                    self._add_term(acc, w1, c1 * c2)
                else:
                    if word_source(sp, w1) != word_target(sp, w2):
                        continue
                    pushed = _push_left(sp, c1, w2, c2)
                    for w, c in pushed.items():
                        self._add_term(acc, w1 + w, c)
        return TensorElement(self.species, acc)

    # -- structure ---------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({word_degree(w) for w in self.terms})

    def component(self, degree):
        return TensorElement(
            self.species,
            {w: c for w, c in self.terms.items() if word_degree(w) == degree},
        )

    def max_degree(self):
        return max((word_degree(w) for w in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for word in sorted(self.terms, key=_word_sort_key):
            coeff = self.terms[word]
            if word[0] == "e":
                bits.append(f"e_{word[1]}*{coeff!r}")
            else:
                letters = ".".join(
                    _letter_label(self.species, aid, j) for aid, j in word
                )
                bits.append(f"{letters}*{coeff!r}")
        return " + ".join(bits)


def _letter_label(species, aid, j):
    from .bimodule import _vector_label

    M = species.arrows[aid]
    return f"{aid}[{_vector_label(M, M.underline[j])}]"


def _word_sort_key(word):
    if word[0] == "e":
        return (0, repr(word[1]), ())
    return (len(word), "", tuple((repr(a), j) for a, j in word))


def _push_left(species, d, word, coeff):
    """Normal form of d . (word . coeff) as a dict word -> coefficient."""
    if word[0] == "e":
        out = d * coeff
        return {} if out.is_zero() else {word: out}
    aid, j = word[0]
    cols = species.left_conj(aid, d)
    rest = word[1:]
    acc = {}
    ncols = len(cols[j])
    for l in range(ncols):
        c = cols[j][l]
        if c.is_zero():
            continue
        head = ((aid, l),)
        if rest:
            for w2, c2 in _push_left(species, c, rest, coeff).items():
                cur = acc.get(head + w2)
                new = c2 if cur is None else cur + c2
                if new.is_zero():
                    acc.pop(head + w2, None)
                else:
                    acc[head + w2] = new
        else:
            cur = acc.get(head)
            new = c * coeff if cur is None else cur + c * coeff
            if new.is_zero():
                acc.pop(head, None)
            else:
                acc[head] = new
    return acc


def element_of_arrow(species, aid, vec):
    """The degree-1 element with the given k-basis coordinates."""
    M = species.arrows[aid]
    coords = M.right_coords(vec)
    terms = {}
    for j, c in enumerate(coords):
        if not c.is_zero():
            terms[((aid, j),)] = c
    return TensorElement(species, terms)


# -- potentials -----------------------------------------------------------------


def is_potential(species, W, reduced=False):
    """Degree >= 2, every word a cycle, and central for the vertex fields."""
    if W.is_zero():
        return True
    for word in W.terms:
        if word_degree(word) < 2:
            return False
        if word_source(species, word) != word_target(species, word):
            return False
    if reduced and 2 in W.degrees():
        return False
    for v in species.vertex_ids:
        field = species.D.field_of(v)
        if field.degree == 1:
            continue
        g = TensorElement.scalar_at(species, v, field.gen())
        if g * W != W * g:
            return False
    return True


def partial_r(species, xi_arrow, xi_vec, x):
    """Right derivative: a ⊗ b -> a . b(b ⊗ xi), removing the last letter."""
    acc = TensorElement.zero(species)
    M = species.arrows[xi_arrow]
    for word, coeff in x.terms.items():
        if word[0] == "e":
            continue
        aid, j = word[-1]
        if aid != xi_arrow:
            continue
        m_vec = M.act_right(M.underline[j], coeff)
        val = species.pair_mx(xi_arrow, m_vec, xi_vec)
        if val.is_zero():
            continue
        if len(word) == 1:
            acc = acc + TensorElement.scalar_at(species, M.target, val)
        else:
            acc = acc + TensorElement(species, {word[:-1]: val})
    return acc


def partial_l(species, xi_arrow, xi_vec, x):
    """Left derivative: a ⊗ b -> b(xi ⊗ a) . b, removing the first letter."""
    acc = TensorElement.zero(species)
    M = species.arrows[xi_arrow]
    for word, coeff in x.terms.items():
        if word[0] == "e":
            continue
        aid, j = word[0]
        if aid != xi_arrow:
            continue
        val = species.pair_xm(xi_arrow, xi_vec, M.underline[j])
        if val.is_zero():
            continue
        if len(word) == 1:
            acc = acc + TensorElement.scalar_at(species, M.source, val * coeff)
        else:
            pushed = _push_left(species, val, word[1:], coeff)
            acc = acc + TensorElement(species, pushed)
    return acc


def epsilon_l(W):
    """Rotation sum: move first letters to the back through the left pairing."""
    sp = W.species
    acc = TensorElement.zero(sp)
    for aid, M in sp.arrows.items():
        dual = sp.dual_of(aid)
        for i in range(len(M.overline)):
            left = partial_l(sp, aid, dual.underline[i], W)
            if left.is_zero():
                continue
            acc = acc + left * element_of_arrow(sp, aid, M.overline[i])
    return acc


def epsilon_r(W):
    """Rotation sum: move last letters to the front through the right pairing."""
    sp = W.species
    acc = TensorElement.zero(sp)
    for aid, M in sp.arrows.items():
        dual = sp.dual_of(aid)
        for j in range(len(M.underline)):
            right = partial_r(sp, aid, dual.overline[j], W)
            if right.is_zero():
                continue
            acc = acc + TensorElement.letter(sp, aid, j) * right
    return acc


def epsilon_c(W):
    """Cyclic symmetriser: on a degree d+1 component, sum eps_l^k, k = 0..d."""
    sp = W.species
    acc = TensorElement.zero(sp)
    for deg in W.degrees():
        comp = W.component(deg)
        if deg == 0:
            continue
        cur = comp
        total = comp
        for _ in range(deg - 1):
            cur = epsilon_l(cur)
            total = total + cur
        acc = acc + total
    return acc


def cyclic_derivative(species, xi_arrow, xi_vec, W):
    return partial_l(species, xi_arrow, xi_vec, epsilon_c(W))


def cyclic_equivalent(W1, W2):
    """Equal cyclic derivatives against every dual functional."""
    sp = W1.species
    if sp is not W2.species:
        raise VertexMismatch("potentials live on different species")
    diff = W1 - W2
    if diff.is_zero():
        return True
    for aid, M in sp.arrows.items():
        for r in range(M.dim):
            xi = [ZERO] * M.dim
            xi[r] = ONE
            if not cyclic_derivative(sp, aid, xi, diff).is_zero():
                return False
    return True


def derivative_matrix(species, W, beta_id, alpha_id):
    """Second derivatives: rows over underline(beta), columns over overline(alpha).

    Entry (b, a) is the right derivative at a* of the cyclic derivative at b*.
    """
    dual_b = species.dual_of(beta_id)
    dual_a = species.dual_of(alpha_id)
    rows = []
    for b in range(len(species.arrows[beta_id].underline)):
        db = cyclic_derivative(species, beta_id, dual_b.overline[b], W)
        row = []
        for a in range(len(species.arrows[alpha_id].overline)):
            row.append(partial_r(species, alpha_id, dual_a.underline[a], db))
        rows.append(row)
    return rows
