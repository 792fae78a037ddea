"""Semisimple coefficient algebra: one number field per vertex.

D = prod_i D_i acts on everything through its vertex components, so the
class is little more than an ordered vertex -> field map plus the chosen
symmetrising functionals.  Each functional is a rational multiple of the
field trace; the multiple (trace scale) matters because dual bases, Casimir
elements and hence every epsilon/derivative computation depend on it.
"""

from .errors import DegenerateTrace, FieldMismatch
from .linalg import invert
from .scalars import ONE, field_trace, rat


class CoefficientAlgebra:
    __slots__ = ("_fields", "_order", "_scales", "_casimirs")

    def __init__(self, vertices, trace_scales=None):
        """vertices: iterable of (vertex_id, NumberField)."""
        self._order = []
        self._fields = {}
        for vid, field in vertices:
            if vid in self._fields:
                raise FieldMismatch(f"duplicate vertex id {vid!r}")
            self._order.append(vid)
            self._fields[vid] = field
        self._scales = {}
        for vid in self._order:
            self._scales[vid] = ONE
        if trace_scales:
            for vid, s in trace_scales.items():
                if vid not in self._fields:
                    raise FieldMismatch(f"trace scale for unknown vertex {vid!r}")
                s = rat(s)
                if s == 0:
                    raise DegenerateTrace(f"zero trace scale at vertex {vid!r}")
                self._scales[vid] = s
        self._casimirs = {}

    @property
    def vertex_ids(self):
        return list(self._order)

    def field_of(self, vid):
        try:
            return self._fields[vid]
        except KeyError:
            raise FieldMismatch(f"unknown vertex {vid!r}") from None

    def trace_scale(self, vid):
        return self._scales[vid]

    def trace(self, vid, elem):
        """The symmetrising functional at a vertex, valued in Q."""
        field = self.field_of(vid)
        if elem.field != field:
            raise FieldMismatch(f"element of {elem.field.name} at vertex {vid!r}")
        return self._scales[vid] * field_trace(elem)

    def gram(self, vid):
        field = self.field_of(vid)
        basis = field.basis()
        return [[self.trace(vid, a * b) for b in basis] for a in basis]

    def casimir(self, vid):
        """Pairs (e_j, ebar_j) with t(ebar_i * e_j) = delta_ij.

        e runs over the power basis; ebar is its dual under the functional.
        """
        if vid not in self._casimirs:
            field = self.field_of(vid)
            basis = field.basis()
            try:
                cinv = invert(self.gram(vid))
            except Exception as exc:
                raise DegenerateTrace(f"singular form at vertex {vid!r}") from exc
            duals = [
                sum((cinv[i][k] * basis[k] for k in range(len(basis))), field.zero())
                for i in range(len(basis))
            ]
            self._casimirs[vid] = list(zip(basis, duals))
        return self._casimirs[vid]

    def restricted(self, vertex_ids):
        """Sub-algebra on a subset of vertices, preserving order and scales."""
        keep = set(vertex_ids)
        return CoefficientAlgebra(
            [(v, self._fields[v]) for v in self._order if v in keep],
            {v: s for v, s in self._scales.items() if v in keep and s != 1},
        )

    def __contains__(self, vid):
        return vid in self._fields

    def __repr__(self):
        parts = ", ".join(f"{v!r}: {f.name}" for v, f in self._fields.items())
        return f"CoefficientAlgebra({parts})"


def casimir_of_D(D):
    """All vertex Casimir pair lists, keyed by vertex id."""
    return {vid: D.casimir(vid) for vid in D.vertex_ids}
