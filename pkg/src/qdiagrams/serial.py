"""
JSON documents for diagrams and formal sums.

A diagram document looks like::

    {"version": 1, "dom": ["qubit"], "cod": ["qubit"],
     "layers": [{"left": [], "right": [],
                 "box": {"name": "Rz", "dom": ["qubit"], "cod": ["qubit"],
                         "kind": "gate", "payload": {"phase": 0.25},
                         "dagger": false}}]}

A sum replaces ``"layers"`` by ``"terms": [{"layers": [...]}, ...]``.
Wire labels are strings (``"qubit"``, ``"bit"``) or ``{"name", "dim"}``
objects, complex numbers are ``[re, im]`` pairs and phases are half-turns.
"""

from __future__ import annotations

import json

from qdiagrams import expr as ex
from qdiagrams.core import (
    KNOWN_DIMS, Box, Bubble, Diagram, Entries, Layer, Ob, Scalar, ScalarValue, Sum,
    Swap, Ty, well_typed)
from qdiagrams.quantum import Bra, Controlled, Discard, Encode, Ket, Measure
from qdiagrams.zx import Spider

VERSION = 1
KINDS = ("gate", "spider", "scalar", "ket", "bra", "measure", "encode",
         "discard", "swap", "bubble", "controlled")


class DocumentError(ValueError):
    """A document does not match the schema; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class TypingError(DocumentError):
    """The document is well formed but its layers do not chain."""


# encoding

def _ob(o: Ob):
    if o.dim == KNOWN_DIMS.get(o.name):
        return o.name
    return {"name": o.name, "dim": o.dim}


def _ty(t: Ty) -> list:
    return [_ob(o) for o in t]


def _complex(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _optional_expr(e):
    return None if e is None else ex.to_tree(e)


def box_to_tree(box: Box) -> dict:
    data, kind = box.data, box.kind
    if kind == "gate":
        if data is None:
            payload = None
        elif isinstance(data, Entries):
            payload = {"entries": [_complex(v) for v in data.values]}
        else:
            payload = {"phase": ex.to_tree(data)}
    elif kind == "spider":
        payload = {"phase": ex.to_tree(data)}
    elif kind == "scalar":
        payload = {"coeff": _complex(data.coeff), "factor": _optional_expr(data.factor),
                   "phase": _optional_expr(data.phase)}
    elif kind in ("ket", "bra"):
        payload = {"bits": list(data)}
    elif kind == "bubble":
        payload = {"function": box.name, "inner": diagram_to_tree(data)}
    elif kind == "controlled":
        payload = {"gate": box_to_tree(data)}
    else:
        payload = None
    return {"name": box.name, "dom": _ty(box.dom), "cod": _ty(box.cod),
            "kind": kind, "payload": payload, "dagger": box.is_dagger}


def _layers(d: Diagram) -> list:
    return [{"left": _ty(layer.left), "box": box_to_tree(layer.box),
             "right": _ty(layer.right)} for layer in d.layers]


def diagram_to_tree(d: Diagram) -> dict:
    return {"dom": _ty(d.dom), "cod": _ty(d.cod), "layers": _layers(d)}


def to_tree(d: Diagram | Sum) -> dict:
    tree = {"version": VERSION, "dom": _ty(d.dom), "cod": _ty(d.cod)}
    if isinstance(d, Sum):
        tree["terms"] = [{"layers": _layers(t)} for t in d.terms]
    else:
        tree["layers"] = _layers(d)
    return tree


def encode_doc(d: Diagram | Sum) -> str:
    return json.dumps(to_tree(d), indent=1, ensure_ascii=False) + "\n"


# decoding

def _field(tree, key: str, path: str, types=None, optional=False):
    if not isinstance(tree, dict):
        raise DocumentError(path, "expected an object")
    if key not in tree:
        if optional:
            return None
        raise DocumentError(path, f"missing field {key!r}")
    value = tree[key]
    if types is not None and not isinstance(value, types):
        raise DocumentError(f"{path}.{key}", f"expected {_type_names(types)}")
    return value


def _type_names(types) -> str:
    types = types if isinstance(types, tuple) else (types, )
    return " or ".join(t.__name__ for t in types)


def _decode_ob(tree, path: str) -> Ob:
    if isinstance(tree, str):
        return Ob(tree, KNOWN_DIMS.get(tree))
    name = _field(tree, "name", path, str)
    dim = _field(tree, "dim", path, (int, type(None)))
    if isinstance(dim, bool) or (dim is not None and dim < 1):
        raise DocumentError(f"{path}.dim", "expected a positive integer")
    return Ob(name, dim)


def _decode_ty(tree, path: str) -> Ty:
    if not isinstance(tree, list):
        raise DocumentError(path, "expected a list of wire labels")
    return Ty(*(_decode_ob(o, f"{path}[{i}]") for i, o in enumerate(tree)))


def _decode_complex(tree, path: str) -> complex:
    if (not isinstance(tree, list) or len(tree) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in tree)):
        raise DocumentError(path, "expected a [re, im] pair")
    return complex(tree[0], tree[1])


def _decode_expr(tree, path: str):
    try:
        return ex.from_tree(tree)
    except ValueError as err:
        raise DocumentError(path, str(err)) from None


def _payload(tree, path: str, key: str, types=None, optional=False):
    payload = _field(tree, "payload", path, (dict, type(None)))
    if payload is None:
        if optional:
            return None
        raise DocumentError(f"{path}.payload", f"missing field {key!r}")
    return _field(payload, key, f"{path}.payload", types, optional)


def decode_box(tree, path: str = "$") -> Box:
    name = _field(tree, "name", path, str)
    dom = _decode_ty(_field(tree, "dom", path), f"{path}.dom")
    cod = _decode_ty(_field(tree, "cod", path), f"{path}.cod")
    kind = _field(tree, "kind", path, str)
    dagger = _field(tree, "dagger", path, bool, optional=True) or False
    if kind not in KINDS:
        raise DocumentError(f"{path}.kind", f"unknown kind {kind!r}")
    if dagger:
        base = decode_box(dict(tree, dom=tree["cod"], cod=tree["dom"], dagger=False), path)
        return Box(base.name, base.cod, base.dom, base.data, base.kind, True)
    try:
        box = _build(name, dom, cod, kind, tree, path)
    except DocumentError:
        raise
    except (ValueError, TypeError) as err:
        raise DocumentError(path, str(err)) from None
    if (box.name, box.dom, box.cod) != (name, dom, cod):
        raise DocumentError(path, f"{kind} box {name!r} cannot have type {dom} -> {cod}")
    return box


def _build(name, dom, cod, kind, tree, path) -> Box:
    payload_path = f"{path}.payload"
    if kind == "gate":
        payload = _field(tree, "payload", path, (dict, type(None)))
        if payload is None:
            return Box(name, dom, cod)
        if "phase" in payload:
            return Box(name, dom, cod, _decode_expr(payload["phase"], f"{payload_path}.phase"))
        entries = _field(payload, "entries", payload_path, list)
        values = [_decode_complex(v, f"{payload_path}.entries[{i}]") for i, v in enumerate(entries)]
        return Box(name, dom, cod, Entries(tuple(values)))
    if kind == "spider":
        phase = _decode_expr(_payload(tree, path, "phase"), f"{payload_path}.phase")
        if any(o != Ob("qubit", 2) for o in dom @ cod):
            raise DocumentError(path, "spiders act on qubit wires")
        return Spider(name, len(dom), len(cod), phase)
    if kind == "scalar":
        coeff = _decode_complex(_payload(tree, path, "coeff"), f"{payload_path}.coeff")
        factor, phase = (
            None if (t := _payload(tree, path, key, optional=True)) is None
            else _decode_expr(t, f"{payload_path}.{key}") for key in ("factor", "phase"))
        return Scalar(ScalarValue(coeff, factor, phase))
    if kind in ("ket", "bra"):
        bits = _payload(tree, path, "bits", list)
        if not all(isinstance(b, int) and not isinstance(b, bool) for b in bits):
            raise DocumentError(f"{payload_path}.bits", "expected a list of integers")
        wires = cod if kind == "ket" else dom
        dim = wires[0].dim if len(wires) else 2
        return (Ket if kind == "ket" else Bra)(*bits, dim=dim or 2)
    if kind in ("measure", "encode"):
        wires = dom if kind == "measure" else cod
        if len(wires) != 1:
            raise DocumentError(path, f"{kind} acts on a single wire")
        return (Measure if kind == "measure" else Encode)(wires[0].dim or 2)
    if kind == "discard":
        return Discard(dom)
    if kind == "swap":
        if len(dom) != 2:
            raise DocumentError(path, "elementary swaps act on two wires")
        return Swap(dom[:1], dom[1:])
    if kind == "bubble":
        function = _payload(tree, path, "function", str)
        inner_tree = _payload(tree, path, "inner", dict)
        inner = _decode_diagram(inner_tree, f"{payload_path}.inner")
        return Bubble(inner, function)
    if kind == "controlled":
        gate = decode_box(_payload(tree, path, "gate", dict), f"{payload_path}.gate")
        return Controlled(gate)
    raise DocumentError(f"{path}.kind", f"unknown kind {kind!r}")


def _decode_layers(tree, dom: Ty, cod: Ty, path: str) -> Diagram:
    layers_tree = _field(tree, "layers", path, list)
    layers = []
    for i, layer in enumerate(layers_tree):
        lpath = f"{path}.layers[{i}]"
        left = _decode_ty(_field(layer, "left", lpath), f"{lpath}.left")
        box = decode_box(_field(layer, "box", lpath, dict), f"{lpath}.box")
        right = _decode_ty(_field(layer, "right", lpath), f"{lpath}.right")
        layers.append(Layer(left, box, right))
    diagram = Diagram(dom, cod, layers)
    check = well_typed(diagram)
    if not check:
        raise TypingError(f"{path}.layers[{check.index}]", f"ill-typed: {check.message}")
    return diagram


def _decode_diagram(tree, path: str) -> Diagram:
    dom = _decode_ty(_field(tree, "dom", path), f"{path}.dom")
    cod = _decode_ty(_field(tree, "cod", path), f"{path}.cod")
    return _decode_layers(tree, dom, cod, path)


def from_tree(tree) -> Diagram | Sum:
    path = "$"
    version = _field(tree, "version", path)
    if version != VERSION:
        raise DocumentError(f"{path}.version", f"unsupported version {version!r}")
    dom = _decode_ty(_field(tree, "dom", path), f"{path}.dom")
    cod = _decode_ty(_field(tree, "cod", path), f"{path}.cod")
    if "terms" in tree:
        terms = _field(tree, "terms", path, list)
        return Sum([_decode_layers(t, dom, cod, f"{path}.terms[{i}]")
                    for i, t in enumerate(terms)], dom, cod)
    return _decode_layers(tree, dom, cod, path)


def decode_doc(text: str) -> Diagram | Sum:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError("$", f"invalid JSON: {err}") from None
    return from_tree(tree)
