"""Bimodules over pairs of vertex fields, with chosen one-sided bases.

A bimodule here is a finite-dimensional Q-space with commuting left and
right field actions, stored through the action matrices of the two field
generators.  Every arrow of a species carries one.  The distinguished
right basis (underline) and left basis (overline) drive normal forms,
dual bases and Casimir elements; the defaults pick the first k-basis
vectors that generate freely.

Elements are plain coordinate lists over the k-basis.
"""

from .errors import FieldMismatch, NoEmbedding, ValidationError
from .linalg import RowSpan, identity_matrix, invert, mat_vec, transpose
from .scalars import ONE, ZERO, galois_automorphisms


class Bimodule:
    __slots__ = (
        "source",
        "target",
        "src_field",
        "tgt_field",
        "labels",
        "dim",
        "left_gen",
        "right_gen",
        "underline",
        "overline",
        "predual",
        "_left_powers",
        "_right_powers",
        "_right_solver",
        "_left_solver",
    )

    def __init__(
        self,
        source,
        target,
        src_field,
        tgt_field,
        labels,
        left_gen,
        right_gen,
        underline=None,
        overline=None,
        check=True,
    ):
        self.source = source
        self.target = target
        self.src_field = src_field
        self.tgt_field = tgt_field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.left_gen = left_gen
        self.right_gen = right_gen
        self.predual = None
        self._left_powers = None
        self._right_powers = None
        self._right_solver = None
        self._left_solver = None
        if check:
            self._check_actions()
        if underline is None:
            underline = self._default_basis(side="right")
        if overline is None:
            overline = self._default_basis(side="left")
        self.underline = [list(v) for v in underline]
        self.overline = [list(v) for v in overline]
        if check:
            self._check_bases()

    # -- construction checks ---------------------------------------------------

    def _poly_at_matrix(self, field, mat):
        n = self.dim
        acc = [[ZERO] * n for _ in range(n)]
        power = identity_matrix(n)
        for c in field.min_poly or (ZERO, ONE):
            for i in range(n):
                for j in range(n):
                    acc[i][j] += c * power[i][j]
            power = [
                [sum(power[i][k] * mat[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
        return acc

    def _check_actions(self):
        n = self.dim
        for mat, field, side in (
            (self.left_gen, self.tgt_field, "left"),
            (self.right_gen, self.src_field, "right"),
        ):
            if len(mat) != n or any(len(r) != n for r in mat):
                raise ValidationError(f"{side} action matrix is not {n}x{n}")
            if field.degree > 1:
                red = self._poly_at_matrix(field, mat)
                if any(any(x != 0 for x in row) for row in red):
                    raise ValidationError(f"{side} action violates the field relation")
        lg, rg = self.left_gen, self.right_gen
        lr = [[sum(lg[i][k] * rg[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        rl = [[sum(rg[i][k] * lg[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if lr != rl:
            raise ValidationError("left and right actions do not commute")
        if n % self.src_field.degree or n % self.tgt_field.degree:
            raise ValidationError("dimension incompatible with the field degrees")

    def left_powers(self):
        if self._left_powers is None:
            self._left_powers = _matrix_powers(self.left_gen, self.tgt_field.degree)
        return self._left_powers

    def right_powers(self):
        if self._right_powers is None:
            self._right_powers = _matrix_powers(self.right_gen, self.src_field.degree)
        return self._right_powers

    def _default_basis(self, side):
        powers = self.right_powers() if side == "right" else self.left_powers()
        deg = self.src_field.degree if side == "right" else self.tgt_field.degree
        span = RowSpan()
        chosen = []
        for r in range(self.dim):
            vec = [ZERO] * self.dim
            vec[r] = ONE
            trial = span.copy()
            added = 0
            for p in powers:
                moved = mat_vec(p, vec)
                if trial.add({i: v for i, v in enumerate(moved) if v != 0}):
                    added += 1
            if added == deg:
                span = trial
                chosen.append(vec)
        if span.dim != self.dim:
            raise ValidationError(f"no free {side} basis found")
        return chosen

    def _basis_matrix(self, basis, powers):
        cols = []
        for vec in basis:
            for p in powers:
                cols.append(mat_vec(p, vec))
        return transpose(cols)

    def _check_bases(self):
        if len(self.underline) * self.src_field.degree != self.dim:
            raise ValidationError("underline basis has the wrong size")
        if len(self.overline) * self.tgt_field.degree != self.dim:
            raise ValidationError("overline basis has the wrong size")
        self.right_solver()
        self.left_solver()

    def right_solver(self):
        """Inverse of the k-matrix whose columns are u_j . g^l (right action)."""
        if self._right_solver is None:
            mat = self._basis_matrix(self.underline, self.right_powers())
            try:
                self._right_solver = invert(mat)
            except Exception as exc:
                raise ValidationError("underline basis is not free") from exc
        return self._right_solver

    def left_solver(self):
        if self._left_solver is None:
            mat = self._basis_matrix(self.overline, self.left_powers())
            try:
                self._left_solver = invert(mat)
            except Exception as exc:
                raise ValidationError("overline basis is not free") from exc
        return self._left_solver

    # -- actions and coordinates -----------------------------------------------

    def act_left(self, d, vec):
        """d . vec for d in the target field."""
        if d.field != self.tgt_field:
            raise FieldMismatch(f"left action of {d.field.name} on {self.tgt_field.name}-module")
        out = [ZERO] * self.dim
        for c, p in zip(d.coords, self.left_powers()):
            if c != 0:
                moved = mat_vec(p, vec)
                for i in range(self.dim):
                    out[i] += c * moved[i]
        return out

    def act_right(self, vec, d):
        if d.field != self.src_field:
            raise FieldMismatch(f"right action of {d.field.name} on {self.src_field.name}-module")
        out = [ZERO] * self.dim
        for c, p in zip(d.coords, self.right_powers()):
            if c != 0:
                moved = mat_vec(p, vec)
                for i in range(self.dim):
                    out[i] += c * moved[i]
        return out

    def right_coords(self, vec):
        """Coefficients d_j in m = sum_j u_j . d_j, as source-field elements."""
        sol = mat_vec(self.right_solver(), vec)
        deg = self.src_field.degree
        return [
            self.src_field.element(sol[j * deg : (j + 1) * deg])
            for j in range(len(self.underline))
        ]

    def left_coords(self, vec):
        """Coefficients d_j in m = sum_j d_j . o_j, as target-field elements."""
        sol = mat_vec(self.left_solver(), vec)
        deg = self.tgt_field.degree
        return [
            self.tgt_field.element(sol[j * deg : (j + 1) * deg])
            for j in range(len(self.overline))
        ]

    def basis_vector(self, r):
        vec = [ZERO] * self.dim
        vec[r] = ONE
        return vec

    def with_bases(self, underline=None, overline=None):
        """Same bimodule with alternative one-sided bases (for invariance tests)."""
        return Bimodule(
            self.source,
            self.target,
            self.src_field,
            self.tgt_field,
            self.labels,
            self.left_gen,
            self.right_gen,
            underline if underline is not None else self.underline,
            overline if overline is not None else self.overline,
        )

    def __repr__(self):
        return (
            f"Bimodule({self.target!r}<-{self.source!r}, dim {self.dim}, "
            f"{self.tgt_field.name}-{self.src_field.name})"
        )


def _matrix_powers(mat, count):
    n = len(mat)
    powers = [identity_matrix(n)]
    for _ in range(count - 1):
        prev = powers[-1]
        powers.append(
            [[sum(prev[i][k] * mat[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        )
    return powers


def _twist_auto(field, twist):
    if twist == 0:
        return None
    autos = galois_automorphisms(field)
    if twist < 0 or twist >= len(autos):
        raise NoEmbedding(f"twist index {twist} out of range for {field.name}")
    return autos[twist]


def build_from_carrier(source, target, src_field, tgt_field, carrier_field,
                       left_twist=0, right_twist=0):
    """Bimodule whose k-space is the carrier field itself.

    The vertex fields must embed into the carrier: either equal to it (then
    the twist picks the Galois automorphism composed into the action) or the
    base field.  This covers every twisted carrier the document schema can
    express.
    """
    dim = carrier_field.degree
    basis = carrier_field.basis()

    def mult_matrix(elem):
        cols = [(elem * b).coords for b in basis]
        return [[cols[j][i] for j in range(dim)] for i in range(dim)]

    def action_matrix(vertex_field, twist, side):
        if vertex_field.is_base:
            if twist != 0:
                raise NoEmbedding(f"twist on a base-field {side} action")
            return identity_matrix(dim)
        if vertex_field != carrier_field:
            raise NoEmbedding(
                f"no embedding of {vertex_field.name} into carrier {carrier_field.name}"
            )
        auto = _twist_auto(carrier_field, twist)
        gen_img = carrier_field.gen() if auto is None else auto.apply(carrier_field.gen())
        return mult_matrix(gen_img)

    return Bimodule(
        source,
        target,
        src_field,
        tgt_field,
        [f"b{r}" if dim > 1 else "1" for r in range(dim)] if carrier_field.is_base
        else [_power_label(r) for r in range(dim)],
        action_matrix(tgt_field, left_twist, "left"),
        action_matrix(src_field, right_twist, "right"),
    )


def _power_label(r):
    if r == 0:
        return "1"
    if r == 1:
        return "g"
    return f"g{r}"


def twisted_carrier(D, source, target, carrier_field, left_twist=0, right_twist=0):
    """build_from_carrier wired to a coefficient algebra's vertex fields."""
    return build_from_carrier(
        source,
        target,
        D.field_of(source),
        D.field_of(target),
        carrier_field,
        left_twist,
        right_twist,
    )


def dualize(M, D):
    """The dual bimodule Hom(M, K) on the functional dual basis.

    Dualising a dual returns the original object: the canonical double-dual
    identification sends ev_m back to m and (a*)* to a, which the shared
    trace data makes exact.
    """
    if M.predual is not None:
        return M.predual
    # a* = t ∘ (coordinate functional of a), tabulated on the k-basis
    lc_table = [M.left_coords(M.basis_vector(r)) for r in range(M.dim)]
    rc_table = [M.right_coords(M.basis_vector(r)) for r in range(M.dim)]
    underline_star = [
        [D.trace(M.target, lc_table[r][idx]) for r in range(M.dim)]
        for idx in range(len(M.overline))
    ]
    overline_star = [
        [D.trace(M.source, rc_table[r][idx]) for r in range(M.dim)]
        for idx in range(len(M.underline))
    ]
    dual = Bimodule(
        source=M.target,
        target=M.source,
        src_field=M.tgt_field,
        tgt_field=M.src_field,
        labels=[f"{lab}*" for lab in M.labels],
        left_gen=transpose(M.right_gen),
        right_gen=transpose(M.left_gen),
        underline=underline_star,
        overline=overline_star,
    )
    dual.predual = M
    return dual


def pair_mx(M, D, m_vec, f_vec):
    """b(m ⊗ f) in the target field of M, for f in the dual of M."""
    if M.predual is not None:
        return _base_pair_xm(M.predual, D, m_vec, f_vec)
    return _base_pair_mx(M, D, m_vec, f_vec)


def pair_xm(M, D, f_vec, m_vec):
    """b(f ⊗ m) in the source field of M, for f in the dual of M."""
    if M.predual is not None:
        # roles flip through the double dual: f is the predual element
        return _base_pair_mx(M.predual, D, f_vec, m_vec)
    return _base_pair_xm(M, D, f_vec, m_vec)


def _base_pair_mx(M, D, m_vec, f_vec):
    field = M.tgt_field
    out = field.zero()
    for e, ebar in D.casimir(M.target):
        moved = M.act_left(ebar, m_vec)
        val = sum((f_vec[r] * moved[r] for r in range(M.dim)), ZERO)
        if val != 0:
            out = out + val * e
    return out


def _base_pair_xm(M, D, f_vec, m_vec):
    field = M.src_field
    out = field.zero()
    for e, ebar in D.casimir(M.source):
        moved = M.act_right(m_vec, ebar)
        val = sum((f_vec[r] * moved[r] for r in range(M.dim)), ZERO)
        if val != 0:
            out = out + val * e
    return out


def casimir_pair(M, D, kind="right"):
    """Casimir tensors: sum_a a ⊗ a* (kind 'right', a over underline) or
    sum_a a* ⊗ a (kind 'left', a over overline), as lists of vector pairs."""
    dual = dualize(M, D)
    if kind == "right":
        return [(list(a), list(astar)) for a, astar in zip(M.underline, dual.overline)]
    if kind == "left":
        return [(list(astar), list(a)) for astar, a in zip(dual.underline, M.overline)]
    raise ValueError(f"unknown casimir kind {kind!r}")


def tensor_over_vertex(Ma, Mb, D):
    """M_a ⊗_{D_k} M_b for s(a) = k = t(b), with the product one-sided bases."""
    if Ma.source != Mb.target:
        raise FieldMismatch(
            f"cannot tensor over vertex: {Ma.source!r} vs {Mb.target!r}"
        )
    k_field = Ma.src_field
    if k_field != Mb.tgt_field:
        raise FieldMismatch("middle fields disagree")
    nu = len(Ma.underline)
    dimb = Mb.dim
    dim = nu * dimb

    def flat(j, vec_b):
        out = [ZERO] * dim
        for r, v in enumerate(vec_b):
            out[j * dimb + r] = v
        return out

    # left action of the target generator: theta . u_j = sum_l u_l . C[l][j]
    theta_t = Ma.tgt_field.gen()
    cmat = []
    for j in range(nu):
        moved = Ma.act_left(theta_t, Ma.underline[j])
        cmat.append(Ma.right_coords(moved))  # column j, entries in k_field
    left_cols = []
    for j in range(nu):
        for r in range(dimb):
            col = [ZERO] * dim
            for l in range(nu):
                c = cmat[j][l]
                if not c.is_zero():
                    moved = Mb.act_left(c, Mb.basis_vector(r))
                    for rr, v in enumerate(moved):
                        col[l * dimb + rr] += v
            left_cols.append(col)
    left_gen = transpose(left_cols)

    theta_s = Mb.src_field.gen()
    right_cols = []
    for j in range(nu):
        for r in range(dimb):
            moved = Mb.act_right(Mb.basis_vector(r), theta_s)
            right_cols.append(flat(j, moved))
    right_gen = transpose(right_cols)

    underline = []
    for j in range(nu):
        for ub in Mb.underline:
            underline.append(flat(j, ub))
    overline = []
    for oa in Ma.overline:
        da = Ma.right_coords(oa)
        for ob in Mb.overline:
            vec = [ZERO] * dim
            for j in range(nu):
                if not da[j].is_zero():
                    moved = Mb.act_left(da[j], ob)
                    for rr, v in enumerate(moved):
                        vec[j * dimb + rr] += v
            overline.append(vec)

    labels = []
    for j in range(nu):
        la = _vector_label(Ma, Ma.underline[j])
        for r in range(dimb):
            labels.append(f"[{la}(x){Mb.labels[r]}]")

    return Bimodule(
        source=Mb.source,
        target=Ma.target,
        src_field=Mb.src_field,
        tgt_field=Ma.tgt_field,
        labels=labels,
        left_gen=left_gen,
        right_gen=right_gen,
        underline=underline,
        overline=overline,
    )


def _vector_label(M, vec):
    nz = [(r, v) for r, v in enumerate(vec) if v != 0]
    if len(nz) == 1 and nz[0][1] == 1:
        return M.labels[nz[0][0]]
    return "(" + "+".join(f"{v}*{M.labels[r]}" for r, v in nz) + ")"


def lambda_tilde_hat(species, k, lam):
    """Conjugation matrices of lam in D_k through the dual bases.

    For every arrow a out of k: lam . underline(a*) = underline(a*) . tilde,
    entries in the field at t(a).  For every arrow b into k:
    overline(b*) . lam = hat . overline(b*), entries in the field at s(b).
    Returns ({arrow_id: tilde}, {arrow_id: hat}).
    """
    tildes = {}
    hats = {}
    for aid, M in species.arrows.items():
        if M.source == k:
            dual = species.dual_of(aid)
            nu = len(dual.underline)
            cols = []
            for j in range(nu):
                moved = dual.act_left(lam, dual.underline[j])
                cols.append(dual.right_coords(moved))
            tildes[aid] = [[cols[j][m] for j in range(nu)] for m in range(nu)]
        if M.target == k:
            dual = species.dual_of(aid)
            no = len(dual.overline)
            rows = []
            for j in range(no):
                moved = dual.act_right(dual.overline[j], lam)
                rows.append(dual.left_coords(moved))
            hats[aid] = [[rows[j][m] for m in range(no)] for j in range(no)]
    return tildes, hats
