"""Exception taxonomy.

Everything raised on purpose derives from SpecpotError so the CLI can map
computational failures to exit code 1 and argument/parse problems to 2.
"""


class SpecpotError(Exception):
    """Base class for all deliberate failures."""


class DivisionByZero(SpecpotError):
    pass


class FieldMismatch(SpecpotError):
    """Operands live over different fields or vertices."""


class NotGalois(SpecpotError):
    """Extension is not normal: fewer automorphisms than the degree."""


class DegenerateTrace(SpecpotError):
    """Symmetrising functional with singular Gram matrix."""


class VertexMismatch(SpecpotError):
    """Word letters or module elements attached to the wrong vertex."""


class NoEmbedding(SpecpotError):
    """Required field embedding does not exist."""


class LoopAtVertex(SpecpotError):
    pass


class TwoCycleAtVertex(SpecpotError):
    pass


class NotStabilized(SpecpotError):
    """Quotient did not stabilise within the degree bound."""

    def __init__(self, max_degree, message=None):
        self.max_degree = max_degree
        super().__init__(message or f"no stabilisation up to degree {max_degree}")


class NotSelfInjective(SpecpotError):
    pass


class NotAMorphism(SpecpotError):
    """Map fails multiplicativity, unit or bijectivity checks."""


class NotSparse(SpecpotError):
    """Orbit mutation hit arrows between orbit vertices or an unreduced step."""


class ConditionsABViolated(SpecpotError):
    """Automorphism does not permute the arrow bimodules or move the potential."""


class UnsupportedAlgebra(SpecpotError):
    """Vertex algebra outside the supported commutative field patterns."""


class UnknownType(SpecpotError):
    """Unrecognised Dynkin type label."""


class ParseError(SpecpotError):
    """Malformed species document."""


class ValidationError(SpecpotError):
    """Well-formed document describing an inconsistent species."""
