"""Species document files: a JSON encoding of one species plus an optional
potential, exact enough to round-trip bases and scalars byte for byte.

A document names its extension fields once (monic minimal polynomials,
constant term first), lists vertices with their field and optional trace
scale, and gives each arrow either compactly (a carrier field acted on
through a pair of Galois twists, as build_from_carrier would) or
explicitly (labels, the two generator action matrices, and the chosen
one-sided bases).  Emitted documents always use the explicit arrow form
so that mutated species, whose bimodules are not single-carrier, keep
their exact bases.  Potential terms spell out each word letter by letter
with coordinates over the arrow's right basis, and carry the coefficient
as a scalar vector over the word's right-end field.

Everything numeric is a rational string like "-3/2"; vertex ids may be
integers, strings, or tuples (written as JSON arrays).
"""

import json

from gmpy2 import mpq

from .bimodule import Bimodule, build_from_carrier
from .coeffalg import CoefficientAlgebra
from .errors import ParseError
from .scalars import NumberField, rat_str
from .species import Species
from .tensor import TensorElement, is_potential


BASE_FIELD_TAG = "Q"
_RESERVED_FIELD_NAMES = {BASE_FIELD_TAG, "QQ"}


def _fail(where, message):
    raise ParseError(f"{where}: {message}")


def _as_rational(value, where):
    try:
        return mpq(value)
    except (ValueError, TypeError, ZeroDivisionError):
        _fail(where, f"not a rational: {value!r}")


def _as_vector(value, where, length=None):
    if not isinstance(value, list):
        _fail(where, "expected a list of rationals")
    vec = [_as_rational(x, f"{where}[{i}]") for i, x in enumerate(value)]
    if length is not None and len(vec) != length:
        _fail(where, f"expected {length} entries, got {len(vec)}")
    return vec


def _as_matrix(value, where, rows, cols):
    if not isinstance(value, list) or len(value) != rows:
        _fail(where, f"expected {rows} rows")
    return [_as_vector(row, f"{where}[{r}]", cols) for r, row in enumerate(value)]


def _vertex_id(value, where):
    if isinstance(value, list):
        return tuple(_vertex_id(x, where) for x in value)
    if isinstance(value, (int, str)):
        return value
    _fail(where, f"vertex ids are integers, strings, or arrays: {value!r}")


def _id_to_json(vid):
    if isinstance(vid, tuple):
        return [_id_to_json(x) for x in vid]
    return vid


def _require(mapping, key, where, kind=None):
    if key not in mapping:
        _fail(where, f"missing field {key!r}")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        _fail(f"{where}.{key}", f"expected {kind.__name__}")
    return value


def parse_document(text):
    """Text of a species document -> (Species, potential element)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        _fail("document", "top level must be an object")
    if _require(data, "base_field", "document") != BASE_FIELD_TAG:
        _fail("base_field", f"only {BASE_FIELD_TAG!r} is supported")

    fields = {BASE_FIELD_TAG: NumberField.rationals()}
    for name, coeffs in _require(data, "fields", "document", dict).items():
        if name in _RESERVED_FIELD_NAMES:
            _fail(f"fields.{name}", "name is reserved for the base field")
        vec = _as_vector(coeffs, f"fields.{name}")
        fields[name] = NumberField(name, vec)

    def field_by_name(name, where):
        if name not in fields:
            _fail(where, f"unknown field {name!r}")
        return fields[name]

    pairs = []
    scales = {}
    seen = set()
    for n, entry in enumerate(_require(data, "vertices", "document", list)):
        where = f"vertices[{n}]"
        if not isinstance(entry, dict):
            _fail(where, "expected an object")
        vid = _vertex_id(_require(entry, "id", where), f"{where}.id")
        if vid in seen:
            _fail(f"{where}.id", f"duplicate vertex id {vid!r}")
        seen.add(vid)
        field = field_by_name(_require(entry, "field", where, str), f"{where}.field")
        pairs.append((vid, field))
        if "trace_scale" in entry:
            scales[vid] = _as_rational(entry["trace_scale"], f"{where}.trace_scale")
    if not pairs:
        _fail("vertices", "at least one vertex is required")
    D = CoefficientAlgebra(pairs, scales or None)

    arrows = {}
    for n, entry in enumerate(_require(data, "arrows", "document", list)):
        where = f"arrows[{n}]"
        if not isinstance(entry, dict):
            _fail(where, "expected an object")
        aid = _require(entry, "id", where, str)
        if aid in arrows:
            _fail(f"{where}.id", f"duplicate arrow id {aid!r}")
        src = _vertex_id(_require(entry, "source", where), f"{where}.source")
        tgt = _vertex_id(_require(entry, "target", where), f"{where}.target")
        if src not in seen or tgt not in seen:
            _fail(where, f"endpoints {src!r} -> {tgt!r} must be declared vertices")
        if "carrier" in entry:
            carrier = field_by_name(entry["carrier"], f"{where}.carrier")
            arrows[aid] = build_from_carrier(
                src,
                tgt,
                D.field_of(src),
                D.field_of(tgt),
                carrier,
                entry.get("left_twist", 0),
                entry.get("right_twist", 0),
            )
        elif "structure" in entry:
            struct = entry["structure"]
            if not isinstance(struct, dict):
                _fail(f"{where}.structure", "expected an object")
            labels = _require(struct, "labels", f"{where}.structure", list)
            if not all(isinstance(lab, str) for lab in labels):
                _fail(f"{where}.structure.labels", "labels are strings")
            k = len(labels)
            arrows[aid] = Bimodule(
                src,
                tgt,
                D.field_of(src),
                D.field_of(tgt),
                labels,
                _as_matrix(
                    _require(struct, "left_action", f"{where}.structure"),
                    f"{where}.structure.left_action",
                    k,
                    k,
                ),
                _as_matrix(
                    _require(struct, "right_action", f"{where}.structure"),
                    f"{where}.structure.right_action",
                    k,
                    k,
                ),
                [
                    _as_vector(v, f"{where}.structure.underline[{i}]", k)
                    for i, v in enumerate(
                        _require(struct, "underline", f"{where}.structure", list)
                    )
                ],
                [
                    _as_vector(v, f"{where}.structure.overline[{i}]", k)
                    for i, v in enumerate(
                        _require(struct, "overline", f"{where}.structure", list)
                    )
                ],
            )
        else:
            _fail(where, "an arrow needs either a carrier or a structure block")

    species = Species(D, arrows)
    potential = _parse_potential(data.get("potential", []), species)
    return species, potential


def _parse_potential(entries, species):
    if not isinstance(entries, list):
        _fail("potential", "expected a list of terms")
    W = TensorElement.zero(species)
    for n, entry in enumerate(entries):
        where = f"potential[{n}]"
        if not isinstance(entry, dict):
            _fail(where, "expected an object")
        letters = _require(entry, "word", where, list)
        if not letters:
            _fail(f"{where}.word", "empty word")
        term = None
        prev_source = None
        for m, letter in enumerate(letters):
            lw = f"{where}.word[{m}]"
            if not (isinstance(letter, list) and len(letter) == 2):
                _fail(lw, "a letter is a pair [arrow id, coordinates]")
            aid, coords = letter
            if aid not in species.arrows:
                _fail(lw, f"unknown arrow {aid!r}")
            M = species.arrows[aid]
            if prev_source is not None and M.target != prev_source:
                _fail(lw, f"letter does not chain: expected target {prev_source!r}")
            prev_source = M.source
            vec = _as_vector(coords, lw, len(M.underline))
            factor = TensorElement.zero(species)
            for idx, c in enumerate(vec):
                if c == 0:
                    continue
                piece = TensorElement(
                    species, {((aid, idx),): M.src_field.one()}
                ).scale(c)
                factor = factor + piece
            term = factor if term is None else term * factor
        tail_field = species.arrows[letters[-1][0]].src_field
        coeff = tail_field.element(
            _as_vector(
                _require(entry, "coefficient", where),
                f"{where}.coefficient",
                tail_field.degree,
            )
        )
        W = W + term.scale_field(coeff)
    if not is_potential(species, W):
        _fail("potential", "the element is not cyclic and central")
    return W


def emit_document(species, potential=None):
    """Species (+ optional potential) -> canonical document text.

    Arrows are written in the explicit structure form, so any bimodule
    round-trips with its exact bases.
    """
    fields = {}
    for vid in species.vertex_ids:
        f = species.D.field_of(vid)
        if f.degree > 1:
            fields[f.name] = f
    data = {
        "base_field": BASE_FIELD_TAG,
        "fields": {
            name: [rat_str(c) for c in fields[name].min_poly]
            for name in sorted(fields)
        },
        "vertices": [],
        "arrows": [],
    }
    for vid in species.vertex_ids:
        f = species.D.field_of(vid)
        entry = {
            "id": _id_to_json(vid),
            "field": f.name if f.degree > 1 else BASE_FIELD_TAG,
        }
        scale = species.D.trace_scale(vid)
        if scale != 1:
            entry["trace_scale"] = rat_str(scale)
        data["vertices"].append(entry)
    for aid in sorted(species.arrows):
        M = species.arrows[aid]
        data["arrows"].append(
            {
                "id": aid,
                "source": _id_to_json(M.source),
                "target": _id_to_json(M.target),
                "structure": {
                    "labels": list(M.labels),
                    "left_action": [[rat_str(x) for x in row] for row in M.left_gen],
                    "right_action": [[rat_str(x) for x in row] for row in M.right_gen],
                    "underline": [[rat_str(x) for x in v] for v in M.underline],
                    "overline": [[rat_str(x) for x in v] for v in M.overline],
                },
            }
        )
    terms = []
    if potential is not None:
        for word in sorted(potential.terms, key=repr):
            coeff = potential.terms[word]
            letters = []
            for aid, idx in word:
                width = len(species.arrows[aid].underline)
                vec = ["0"] * width
                vec[idx] = "1"
                letters.append([aid, vec])
            terms.append(
                {
                    "coefficient": [rat_str(c) for c in coeff.coords],
                    "word": letters,
                }
            )
    data["potential"] = terms
    return json.dumps(data, indent=2) + "\n"
