"""Exact scalars: rationals and number fields presented on a power basis.

Every field in play is a finite extension Q[x]/(f) of the rationals, with
elements stored as coordinate vectors over the power basis 1, g, g^2, ...
of the generator g.  Arithmetic stays in gmpy2.mpq (Fraction if gmpy2 is
missing) so all downstream linear algebra is exact.
"""

import functools

from .errors import DivisionByZero, FieldMismatch, NotGalois, ValidationError

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as mpq

ZERO = mpq(0)
ONE = mpq(1)


def rat(value):
    """Coerce an int, string 'p/q', or rational into mpq."""
    if isinstance(value, str):
        return mpq(value)
    return mpq(value)


def rat_str(value):
    """Render an mpq as 'p' or 'p/q'."""
    v = mpq(value)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


class NumberField:
    """Q[x]/(min_poly) with min_poly monic, stored low-degree-first.

    The base field is the degree-1 instance with min_poly None; use
    NumberField.rationals() to get the shared singleton.
    """

    __slots__ = ("name", "min_poly", "degree", "_red", "_trace_vec", "_autos")

    _base = None

    def __init__(self, name, min_poly):
        self.name = name
        if min_poly is None:
            self.min_poly = None
            self.degree = 1
        else:
            coeffs = [rat(c) for c in min_poly]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if len(coeffs) < 2:
                raise ValidationError(f"min_poly for {name} must have degree >= 1")
            lead = coeffs[-1]
            if lead != 1:
                coeffs = [c / lead for c in coeffs]
            self.min_poly = tuple(coeffs)
            self.degree = len(coeffs) - 1
            if self.degree > 1:
                self._check_irreducible()
        self._red = None
        self._trace_vec = None
        self._autos = None

    @classmethod
    def rationals(cls):
        if cls._base is None:
            cls._base = cls("QQ", None)
        return cls._base

    @property
    def is_base(self):
        return self.min_poly is None or self.degree == 1

    def _check_irreducible(self):
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(
            [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.min_poly)],
            x,
            domain="QQ",
        )
        if not poly.is_irreducible:
            raise ValidationError(f"min_poly for {self.name} is reducible over Q")

    # -- reduction table: coords of g^d .. g^(2d-2) --------------------------

    def _reduction(self):
        if self._red is None:
            d = self.degree
            rows = []
            # g^d = -(c_0 + c_1 g + ... + c_{d-1} g^{d-1})
            cur = [-c for c in self.min_poly[:d]]
            rows.append(list(cur))
            for _ in range(d - 2):
                # multiply by g: shift, then reduce the overflow
                top = cur[d - 1]
                cur = [ZERO] + cur[: d - 1]
                if top != 0:
                    cur = [cur[i] - top * self.min_poly[i] for i in range(d)]
                rows.append(list(cur))
            self._red = rows
        return self._red

    def mul_coords(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        prod = [ZERO] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    prod[i + j] += ai * bj
        red = self._reduction()
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c != 0:
                row = red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    # -- elements -------------------------------------------------------------

    def element(self, coords):
        coords = tuple(rat(c) for c in coords)
        if len(coords) != self.degree:
            raise FieldMismatch(
                f"{self.name}: expected {self.degree} coordinates, got {len(coords)}"
            )
        return FieldElement(self, coords)

    def zero(self):
        return FieldElement(self, (ZERO,) * self.degree)

    def one(self):
        return FieldElement(self, (ONE,) + (ZERO,) * (self.degree - 1))

    def gen(self):
        if self.degree == 1:
            return self.one()
        coords = [ZERO] * self.degree
        coords[1] = ONE
        return FieldElement(self, tuple(coords))

    def from_rational(self, value):
        coords = [ZERO] * self.degree
        coords[0] = rat(value)
        return FieldElement(self, tuple(coords))

    def basis(self):
        out = []
        for i in range(self.degree):
            coords = [ZERO] * self.degree
            coords[i] = ONE
            out.append(FieldElement(self, tuple(coords)))
        return out

    # -- trace ----------------------------------------------------------------

    def trace_vector(self):
        """Tr(g^j) for j = 0..degree-1, via traces of companion-matrix powers."""
        if self._trace_vec is None:
            d = self.degree
            if d == 1:
                self._trace_vec = (ONE,)
            else:
                comp = [[ZERO] * d for _ in range(d)]
                for i in range(1, d):
                    comp[i][i - 1] = ONE
                for i in range(d):
                    comp[i][d - 1] = -self.min_poly[i]
                vec = [mpq(d)]
                power = [row[:] for row in comp]
                for _ in range(d - 1):
                    vec.append(sum(power[i][i] for i in range(d)))
                    power = [
                        [
                            sum(power[i][k] * comp[k][j] for k in range(d))
                            for j in range(d)
                        ]
                        for i in range(d)
                    ]
                self._trace_vec = tuple(vec)
        return self._trace_vec

    def __repr__(self):
        return f"NumberField({self.name})"

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.name == other.name
            and self.min_poly == other.min_poly
        )

    def __hash__(self):
        return hash((self.name, self.min_poly))


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(
            self.field, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        return self.field.from_rational(other)

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(self.field, self.field.mul_coords(self.coords, other.coords))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero(f"inverting zero in {self.field.name}")
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (ONE / self.coords[0],))
        # columns of the multiplication-by-self matrix, solved against e_0
        from .linalg import solve_unique

        basis = self.field.basis()
        cols = [(self * b).coords for b in basis]
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        target = [ONE] + [ZERO] * (d - 1)
        sol = solve_unique(mat, target)
        return FieldElement(self.field, tuple(sol))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def rational_part(self):
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, mpq)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field.name, self.coords))

    def __repr__(self):
        return f"{self.field.name}[{', '.join(rat_str(c) for c in self.coords)}]"


def field_trace(elem):
    """Field trace to Q, as an mpq."""
    vec = elem.field.trace_vector()
    return sum(c * t for c, t in zip(elem.coords, vec))


class FieldAutomorphism:
    """K-automorphism of a number field, pinned by the image of the generator."""

    __slots__ = ("field", "gen_image", "_matrix")

    def __init__(self, field, gen_image):
        self.field = field
        self.gen_image = gen_image
        d = field.degree
        cols = []
        acc = field.one()
        for _ in range(d):
            cols.append(acc.coords)
            acc = acc * gen_image
        self._matrix = [[cols[j][i] for j in range(d)] for i in range(d)]

    @classmethod
    def identity(cls, field):
        return cls(field, field.gen())

    def apply(self, elem):
        if elem.field != self.field:
            raise FieldMismatch(f"{elem.field.name} vs {self.field.name}")
        d = self.field.degree
        out = [ZERO] * d
        for j, c in enumerate(elem.coords):
            if c != 0:
                col = [self._matrix[i][j] for i in range(d)]
                for i in range(d):
                    out[i] += c * col[i]
        return FieldElement(self.field, tuple(out))

    def compose(self, other):
        """self after other."""
        return FieldAutomorphism(self.field, self.apply(other.gen_image))

    def inverse(self):
        from .linalg import invert

        inv = invert(self._matrix)
        d = self.field.degree
        img = tuple(inv[i][1] if d > 1 else ONE for i in range(d))
        if d == 1:
            return FieldAutomorphism.identity(self.field)
        return FieldAutomorphism(self.field, FieldElement(self.field, img))

    @property
    def is_identity(self):
        return self.gen_image == self.field.gen()

    def __eq__(self, other):
        return (
            isinstance(other, FieldAutomorphism)
            and self.field == other.field
            and self.gen_image == other.gen_image
        )

    def __hash__(self):
        return hash((self.field.name, self.gen_image.coords))

    def __repr__(self):
        return f"Aut({self.field.name}: g -> {self.gen_image!r})"


@functools.lru_cache(maxsize=None)
def _automorphism_images(field):
    """Coordinate tuples of all roots of min_poly inside the field itself."""
    import sympy

    d = field.degree
    if d == 1:
        return ((ONE,),)
    x = sympy.Symbol("x")
    f_expr = sum(
        sympy.Rational(c.numerator, c.denominator) * x**i
        for i, c in enumerate(field.min_poly)
    )
    theta = sympy.CRootOf(f_expr, 0)
    fp = sympy.Poly(f_expr, x, domain=sympy.QQ.algebraic_field(theta))
    images = []
    s = sympy.Dummy("s")
    for fac, _mult in fp.factor_list()[1]:
        if fac.degree() != 1:
            continue
        lead, const = fac.all_coeffs()
        root = sympy.expand((-const / lead).subs(theta, s))
        poly = sympy.Poly(root, s)
        coords = [ZERO] * d
        for i, c in enumerate(reversed(poly.all_coeffs())):
            coords[i] = mpq(int(c.p), int(c.q))
        images.append(tuple(coords))
    # keep only genuine roots, deduped
    seen = set()
    verified = []
    for coords in images:
        elem = field.element(coords)
        acc = field.zero()
        power = field.one()
        for c in field.min_poly:
            acc = acc + power * field.from_rational(c)
            power = power * elem
        if acc.is_zero() and coords not in seen:
            seen.add(coords)
            verified.append(coords)
    return tuple(verified)


def galois_automorphisms(field):
    """All K-automorphisms, identity first then ascending lex on image coords.

    Raises NotGalois when the extension is not normal.
    """
    if field._autos is not None:
        return field._autos
    if field.degree == 1:
        autos = [FieldAutomorphism.identity(field)]
        field._autos = autos
        return autos
    images = _automorphism_images(field)
    if len(images) != field.degree:
        raise NotGalois(
            f"{field.name}: found {len(images)} automorphisms, degree {field.degree}"
        )
    gen_coords = field.gen().coords
    rest = sorted(c for c in images if c != gen_coords)
    ordered = [gen_coords] + rest
    autos = [FieldAutomorphism(field, field.element(c)) for c in ordered]
    field._autos = autos
    return autos
