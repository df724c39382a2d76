"""
ZX diagrams: Z and X spiders, Hadamard boxes and swaps on qubit wires.

Spider phases are in half-turns: a Z spider is ``|0...0><0...0| +
exp(i pi phase) |1...1><1...1|`` and an X spider is the same with a
Hadamard on every leg.

Circuits translate into ZX diagrams with exact scalars, and ZX diagrams
convert to and from :class:`ZxGraph`, an undirected graph on which
:func:`fuse_spiders` merges neighbouring spiders of the same colour.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from qdiagrams.core import (
    Box, Diagram, Id, Scalar, ScalarValue, Swap, Ty, permutation, qubit)
from qdiagrams.expr import Const, Expr, as_expr
from qdiagrams.functor import DiagramFunctor, FunctorError
from qdiagrams.quantum import CX as CX_GATE, H, PURE_FUNCTOR
from qdiagrams.tensor import Dim, Tensor

__all__ = [
    "Spider", "Z", "X", "H", "spider_tensor", "circuit2zx", "evaluate",
    "ZxGraph", "GraphError", "to_graph", "from_graph", "fuse_spiders",
]

_SQRT2 = math.sqrt(2)


class Spider(Box):
    """A Z or X spider with ``legs_in`` inputs, ``legs_out`` outputs and a phase."""

    def __init__(self, color: str, legs_in: int, legs_out: int, phase: Expr | float = 0):
        if color not in ("Z", "X"):
            raise ValueError(f"spider colour must be 'Z' or 'X', got {color!r}")
        super().__init__(color, qubit ** legs_in, qubit ** legs_out, as_expr(phase), kind="spider")

    @property
    def color(self) -> str:
        return self.name

    @property
    def phase(self) -> Expr:
        return self.data

    @property
    def legs(self) -> tuple[int, int]:
        return len(self.dom), len(self.cod)

    def dagger(self):
        return Spider(self.color, len(self.cod), len(self.dom), -self.phase)

    def __str__(self):
        n_in, n_out = self.legs
        return f"{self.color}({n_in}, {n_out}, {self.phase})"


def Z(legs_in: int, legs_out: int, phase=0) -> Spider:
    return Spider("Z", legs_in, legs_out, phase)


def X(legs_in: int, legs_out: int, phase=0) -> Spider:
    return Spider("X", legs_in, legs_out, phase)


_H_MATRIX = np.array([[1, 1], [1, -1]]) / _SQRT2


def spider_tensor(s: Spider, params: Mapping = None) -> Tensor:
    n_in, n_out = len(s.dom), len(s.cod)
    n = n_in + n_out
    array = np.zeros((2, ) * n, dtype=complex)
    array[(0, ) * n] = 1
    array[(1, ) * n] += cmath.exp(1j * math.pi * s.phase.eval(params))
    if s.color == "X":
        for axis in range(n):
            array = np.moveaxis(np.tensordot(_H_MATRIX, array, axes=([1], [axis])), 0, axis)
    return Tensor(Dim(*(2, ) * n_in), Dim(*(2, ) * n_out), array)


def evaluate(d, params: Mapping = None) -> Tensor:
    """Tensor of a ZX diagram (gates from the circuit catalog are allowed too)."""
    return PURE_FUNCTOR(d, params)


def _ket_image(bits) -> Diagram:
    result = Id()
    for b in bits:
        result = result @ X(0, 1, b)
    return Scalar(_SQRT2 ** -len(bits)) @ result


def _cx_image() -> Diagram:
    return Scalar(_SQRT2) @ (Z(1, 2) @ Id(qubit) >> Id(qubit) @ X(2, 1))


def _rotation(color: str, phase: Expr) -> Diagram:
    # R(theta) = exp(-i pi theta) * spider(2 theta)
    return Scalar(ScalarValue(1, None, -phase)) @ Spider(color, 1, 1, 2 * phase)


def _gate_image(box: Box) -> Diagram:
    name, phase = box.name, box.data
    if box.kind == "scalar" or box.kind == "spider":
        return box
    if box.kind == "swap":
        return Swap(box.dom[:1], box.dom[1:])
    if box.kind == "ket":
        return _ket_image(box.data)
    if box.kind == "bra":
        return _ket_image(box.data).dagger()
    if box.kind != "gate":
        raise FunctorError(f"cannot translate {box} to ZX")
    if phase is None:
        if name == "H":
            return H
        if name == "Z":
            return Z(1, 1, 1)
        if name == "X":
            return X(1, 1, 1)
        if name == "S":
            return Z(1, 1, 0.5)
        if name == "T":
            return Z(1, 1, 0.25)
        if name == "Y":
            # Y = i X Z
            return Scalar(1j) @ (Z(1, 1, 1) >> X(1, 1, 1))
        if name == "CX":
            return _cx_image()
        if name == "CZ":
            return Id(qubit) @ H >> _cx_image() >> Id(qubit) @ H
        if name == "SWAP":
            return Swap(qubit, qubit)
    elif isinstance(phase, Expr):
        if name == "Rz":
            return _rotation("Z", phase)
        if name == "Rx":
            return _rotation("X", phase)
        if name == "CRz":
            # CRz(t) = CX ; 1 @ Rz(-t/2) ; CX ; 1 @ Rz(t/2)
            half = phase * 0.5
            return (_cx_image() >> Id(qubit) @ _rotation("Z", -half)
                    >> _cx_image() >> Id(qubit) @ _rotation("Z", half))
    raise FunctorError(f"cannot translate {box} to ZX")


_CIRCUIT2ZX = DiagramFunctor(ar=_gate_image)


def circuit2zx(c):
    """Translate a pure circuit into a ZX diagram with the same tensor, scalars included."""
    return _CIRCUIT2ZX(c)


class GraphError(ValueError):
    """A ZX graph violates its invariants, or a diagram cannot become a graph."""


@dataclass(frozen=True)
class Node:
    id: int
    kind: str
    phase: float | None = None


KINDS = ("Z", "X", "H", "in", "out")


@dataclass
class ZxGraph:
    """
    Undirected multigraph of spiders, Hadamard nodes and boundary nodes.

    ``scalar`` is a global factor kept so that graph evaluation is exact.
    """

    nodes: list[Node] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    inputs: list[int] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    scalar: complex = 1

    def node(self, i: int) -> Node:
        return self._index()[i]

    def _index(self) -> dict[int, Node]:
        return {n.id: n for n in self.nodes}

    def degree(self, i: int) -> int:
        return sum((a == i) + (b == i) for a, b in self.edges)

    def neighbours(self, i: int) -> list[int]:
        result = []
        for a, b in self.edges:
            if a == i:
                result.append(b)
            if b == i:
                result.append(a)
        return result

    def validate(self) -> None:
        index = {}
        for n in self.nodes:
            if n.kind not in KINDS:
                raise GraphError(f"node {n.id}: unknown kind {n.kind!r}")
            if n.id in index:
                raise GraphError(f"node {n.id}: duplicate id")
            if n.kind in ("Z", "X") and n.phase is None:
                raise GraphError(f"node {n.id}: spider without a phase")
            index[n.id] = n
        for k, (a, b) in enumerate(self.edges):
            for end in (a, b):
                if end not in index:
                    raise GraphError(f"edge {k}: endpoint {end} is not a node")
        degrees = {i: 0 for i in index}
        for a, b in self.edges:
            degrees[a] += 1
            degrees[b] += 1
        for n in self.nodes:
            if n.kind in ("in", "out") and degrees[n.id] != 1:
                raise GraphError(
                    f"node {n.id}: boundary node has degree {degrees[n.id]}, expected 1")
            if n.kind == "H" and degrees[n.id] != 2:
                raise GraphError(
                    f"node {n.id}: H node has degree {degrees[n.id]}, expected 2")
        for name, ids, kind in (("inputs", self.inputs, "in"), ("outputs", self.outputs, "out")):
            for i in ids:
                if i not in index or index[i].kind != kind:
                    raise GraphError(f"{name}: node {i} is not an '{kind}' node")
        boundary = [n.id for n in self.nodes if n.kind in ("in", "out")]
        if sorted(boundary) != sorted(self.inputs + self.outputs):
            raise GraphError("every boundary node must be listed exactly once in inputs or outputs")

    def to_json(self) -> dict:
        doc = {
            "nodes": [{"id": n.id, "kind": n.kind, "phase": n.phase} for n in self.nodes],
            "edges": [[a, b] for a, b in self.edges],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }
        if self.scalar != 1:
            doc["scalar"] = [self.scalar.real, self.scalar.imag]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc: dict) -> ZxGraph:
        try:
            nodes = [Node(int(n["id"]), n["kind"],
                          None if n.get("phase") is None else float(n["phase"]))
                     for n in doc["nodes"]]
            edges = [(int(a), int(b)) for a, b in doc["edges"]]
            re, im = doc.get("scalar", [1, 0])
            graph = cls(nodes, edges, [int(i) for i in doc["inputs"]],
                        [int(i) for i in doc["outputs"]], complex(re, im))
        except (KeyError, TypeError, ValueError) as err:
            raise GraphError(f"malformed graph document: {err}") from None
        graph.validate()
        return graph

    @classmethod
    def loads(cls, text: str) -> ZxGraph:
        return cls.from_json(json.loads(text))


def to_graph(d: Diagram, params: Mapping = None) -> ZxGraph:
    """Graph of a diagram made of spiders, H boxes, swaps and scalars."""
    graph = ZxGraph()
    ids = iter(range(10 ** 9))

    def add(kind, phase=None):
        node = Node(next(ids), kind, phase)
        graph.nodes.append(node)
        return node.id

    # each open wire is the node its upper end is attached to
    wires = []
    for _ in d.dom:
        i = add("in")
        graph.inputs.append(i)
        wires.append(i)
    for layer in d.layers:
        box, offset = layer.box, len(layer.left)
        n_in = len(box.dom)
        incoming = wires[offset:offset + n_in]
        if box.kind == "swap":
            outgoing = incoming[1:] + incoming[:1]
        elif box.kind == "scalar":
            graph.scalar *= box.data.eval(params)
            outgoing = []
        elif box.kind == "spider" or (box.kind == "gate" and box.name == "H"
                                      and box.data is None):
            if box.kind == "spider":
                phase = box.phase.eval(params)
                node = add(box.color, float(phase % 2))
            else:
                node = add("H")
            for w in incoming:
                graph.edges.append((w, node))
            outgoing = [node] * len(box.cod)
            if box.kind == "gate" and len(incoming) != 1:
                raise GraphError("H boxes must have one input and one output")
        else:
            raise GraphError(f"box {box} has no graph representation")
        wires = wires[:offset] + outgoing + wires[offset + n_in:]
    for w in wires:
        o = add("out")
        graph.outputs.append(o)
        graph.edges.append((w, o))
    graph.validate()
    return graph


def from_graph(g: ZxGraph) -> Diagram:
    """
    Diagram with the same tensor as ``g``. Nodes are placed one at a time;
    swaps gather the wires of the next node at the right end.
    """
    g.validate()
    index = g._index()
    placed = set(g.inputs)
    # open wires are edge numbers, ordered left to right
    open_edges = []
    for i in g.inputs:
        (k, ) = [k for k, e in enumerate(g.edges) if i in e]
        open_edges.append(k)
    diagram = Id(qubit ** len(open_edges))
    if g.scalar != 1:
        diagram = Scalar(g.scalar) @ diagram
    incident = {n.id: [] for n in g.nodes}
    for k, (a, b) in enumerate(g.edges):
        incident[a].append(k)
        if b != a:
            incident[b].append(k)
    inner = [n for n in g.nodes if n.kind not in ("in", "out")]
    for node in inner:
        edges = incident[node.id]
        loops = [k for k in edges if g.edges[k] == (node.id, node.id)]
        ins = [k for k in open_edges if k in edges]
        outs = [k for k in edges if k not in ins and k not in loops]
        # edges to other placed nodes can't be outputs; they were opened earlier
        keep = [k for k in open_edges if k not in ins]
        perm = [open_edges.index(k) for k in keep + ins]
        diagram = diagram >> permutation(diagram.cod, perm)
        n_out = len(outs) + 2 * len(loops)
        box = _node_box(node, len(ins), n_out)
        diagram = diagram >> Id(qubit ** len(keep)) @ box
        if loops:
            # close each self-loop with a cap on the last two outputs
            cap = Z(2, 0)
            for j in range(len(loops)):
                width = len(keep) + n_out - 2 * j
                diagram = diagram >> Id(qubit ** (width - 2)) @ cap
        open_edges = keep + outs
        placed.add(node.id)
    final = []
    for o in g.outputs:
        (k, ) = [k for k, e in enumerate(g.edges) if o in e]
        final.append(open_edges.index(k))
    return diagram >> permutation(diagram.cod, final)


def _node_box(node: Node, n_in: int, n_out: int) -> Diagram:
    if node.kind in ("Z", "X"):
        return Spider(node.kind, n_in, n_out, node.phase)
    # H node: degree two, wired as a 1-1 box with a cup or cap as needed
    if (n_in, n_out) == (1, 1):
        return H
    if (n_in, n_out) == (2, 0):
        return H @ Id(qubit) >> Z(2, 0)
    if (n_in, n_out) == (0, 2):
        return Z(0, 2) >> H @ Id(qubit)
    raise GraphError(f"node {node.id}: H node with {n_in} inputs and {n_out} outputs")


def graph_tensor(g: ZxGraph) -> Tensor:
    return evaluate(from_graph(g))


def fuse_spiders(g: ZxGraph) -> ZxGraph:
    """
    Merge adjacent spiders of the same colour, adding phases modulo 2,
    until no such pair remains. Returns a new graph.
    """
    for n in g.nodes:
        if n.kind in ("Z", "X") and n.phase is None:
            raise GraphError(f"node {n.id}: spider without a constant phase")
    nodes = {n.id: n for n in g.nodes}
    order = [n.id for n in g.nodes]
    edges = list(g.edges)
    while True:
        pair = next(((a, b) for a, b in edges if a != b
                     and nodes[a].kind in ("Z", "X") and nodes[a].kind == nodes[b].kind), None)
        if pair is None:
            break
        keep, gone = min(pair), max(pair)
        phase = (nodes[keep].phase + nodes[gone].phase) % 2
        nodes[keep] = Node(keep, nodes[keep].kind, phase)
        del nodes[gone]
        order.remove(gone)
        merged = []
        for a, b in edges:
            a, b = (keep if a == gone else a), (keep if b == gone else b)
            # plain self-loops on a spider contract to the spider itself
            if a == b == keep:
                continue
            merged.append((a, b))
        edges = merged
    return ZxGraph([nodes[i] for i in order], edges, list(g.inputs), list(g.outputs), g.scalar)
