"""Dense and sparse exact linear algebra over the rationals.

Dense matrices are lists of row lists holding mpq values; they stay small
(field degrees, bimodule dimensions).  The sparse RowSpan is the workhorse
for ideal strata and socle computations, where coordinates are indexed by
arbitrary hashable keys (typically words) instead of integers.
"""

from .errors import DivisionByZero
from .scalars import ZERO, ONE, mpq


def identity_matrix(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(mat):
    if not mat:
        return []
    return [[mat[i][j] for i in range(len(mat))] for j in range(len(mat[0]))]


def mat_vec(mat, vec):
    return [sum((row[j] * vec[j] for j in range(len(vec))), ZERO) for row in mat]


def mat_mul(a, b):
    if not a or not b:
        return []
    n, m, p = len(a), len(b), len(b[0])
    return [
        [sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)]
        for i in range(n)
    ]


def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    mat = [list(map(mpq, row)) for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


def solve(a, b):
    """One solution of A x = b, or None when inconsistent."""
    if not a:
        return [] if all(x == 0 for x in b) else None
    n = len(a[0])
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [ZERO] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return x


def solve_unique(a, b):
    """Solution of a square nonsingular system."""
    x = solve(a, b)
    if x is None:
        raise DivisionByZero("inconsistent linear system")
    # uniqueness check: full column rank
    if rank(a) != len(a[0]):
        raise DivisionByZero("singular linear system")
    return x


def nullspace(a):
    """Basis of the right kernel of A."""
    if not a:
        return []
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def invert(a):
    n = len(a)
    aug = [list(a[i]) + identity_matrix(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DivisionByZero("singular matrix")
    return [row[n:] for row in red[:n]]


def column_space_basis(a):
    """Deterministic basis of the column space: leading columns of the RREF."""
    red, pivots = rref(transpose(a))
    return [list(row) for row in red]


class RowSpan:
    """Incremental reduced span of sparse vectors.

    Vectors are dicts mapping hashable coordinate keys to nonzero mpq.  Rows
    are kept inter-reduced, so membership tests and residuals are exact and
    order-independent.  sort_key fixes which coordinate of a new row becomes
    its pivot (the minimal one); with a degree-then-lex key this makes the
    non-pivot coordinates a canonical quotient basis.
    """

    __slots__ = ("pivots", "sort_key")

    def __init__(self, sort_key=None):
        self.pivots = {}
        self.sort_key = sort_key

    def _min_key(self, keys):
        if self.sort_key is None:
            return min(keys, key=repr)
        return min(keys, key=self.sort_key)

    def reduce(self, vec):
        """Residual of vec modulo the span, as a fresh dict."""
        out = dict(vec)
        for k in [k for k in out if out[k] == 0]:
            del out[k]
        while True:
            hits = [k for k in out if k in self.pivots]
            if not hits:
                return out
            k = hits[0]
            coef = out[k]
            for kk, vv in self.pivots[k].items():
                nv = out.get(kk, ZERO) - coef * vv
                if nv == 0:
                    out.pop(kk, None)
                else:
                    out[kk] = nv

    def add(self, vec):
        """Insert vec; returns True when it enlarged the span."""
        res = self.reduce(vec)
        if not res:
            return False
        p = self._min_key(res.keys())
        c = res[p]
        row = {k: v / c for k, v in res.items()}
        for qrow in self.pivots.values():
            if p in qrow:
                coef = qrow[p]
                for kk, vv in row.items():
                    nv = qrow.get(kk, ZERO) - coef * vv
                    if nv == 0:
                        qrow.pop(kk, None)
                    else:
                        qrow[kk] = nv
        self.pivots[p] = row
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    @property
    def dim(self):
        return len(self.pivots)

    def copy(self):
        other = RowSpan(self.sort_key)
        other.pivots = {k: dict(v) for k, v in self.pivots.items()}
        return other
