"""
Quantum circuits as diagrams on qubit (and bit) wires.

Phases are measured in half-turns: ``Rz(1)`` is a rotation by ``2 pi`` up to
sign, ``Rz(theta) = diag(exp(-i pi theta), exp(i pi theta))``. The leftmost
wire is the most significant index of a basis state.

Post-selected teleportation succeeds with amplitude one half:

>>> Bell_state = Ket(0, 0) >> H @ Id(qubit) >> CX
>>> protocol = Ket(1) @ Bell_state >> Bell_state.dagger() @ Id(qubit)
>>> eval_pure(protocol).close(eval_pure(Ket(1) @ scalar(.5)), 1e-12)
True
"""

from __future__ import annotations

import cmath
import math
from typing import Mapping, Sequence

import numpy as np

from qdiagrams.core import (
    Box, Bubble, Diagram, Id, Scalar, Sum, Ty, bit, digit, qubit, qudit, scalar)
from qdiagrams.expr import Expr, as_expr
from qdiagrams.functor import TensorFunctor
from qdiagrams.tensor import Dim, Tensor

__all__ = [
    "H", "X", "Y", "Z", "S", "T", "CX", "CZ", "SWAP", "Rz", "Rx", "CRz",
    "Ket", "Bra", "Measure", "Encode", "Discard", "Controlled", "scalar",
    "Id", "qubit", "bit", "eval_pure", "iqp_ansatz", "is_mixed",
    "MixedCircuitError", "PURE_FUNCTOR",
]

_SQRT2 = math.sqrt(2)

FIXED_MATRICES = {
    "H": np.array([[1, 1], [1, -1]]) / _SQRT2,
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]]),
    "S": np.diag([1, 1j]),
    "T": np.diag([1, cmath.exp(1j * math.pi / 4)]),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "CZ": np.diag([1, 1, 1, -1]),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}
PARAMETERISED = ("Rz", "Rx", "CRz")
MIXED_KINDS = frozenset({"measure", "encode", "discard", "controlled"})


class MixedCircuitError(ValueError):
    """Pure evaluation was asked of a circuit with classical parts."""


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([cmath.exp(-1j * math.pi * theta), cmath.exp(1j * math.pi * theta)])


def rx_matrix(theta: float) -> np.ndarray:
    h = FIXED_MATRICES["H"]
    return h @ rz_matrix(theta) @ h


def crz_matrix(theta: float) -> np.ndarray:
    return np.diag([1, 1, cmath.exp(-1j * math.pi * theta), cmath.exp(1j * math.pi * theta)])


PARAMETRIC_MATRICES = {"Rz": rz_matrix, "Rx": rx_matrix, "CRz": crz_matrix}


def Gate(name: str, n_qubits: int = 1, phase: Expr | float | None = None) -> Box:
    data = None if phase is None else as_expr(phase)
    return Box(name, qubit ** n_qubits, qubit ** n_qubits, data, kind="gate")


H, X, Y, Z, S, T = (Gate(name) for name in ("H", "X", "Y", "Z", "S", "T"))
CX, CZ = Gate("CX", 2), Gate("CZ", 2)
SWAP = Gate("SWAP", 2)


def Rz(phase) -> Box:
    return Gate("Rz", 1, phase)


def Rx(phase) -> Box:
    return Gate("Rx", 1, phase)


def CRz(phase) -> Box:
    """Controlled Rz with the control on the left wire."""
    return Gate("CRz", 2, phase)


class Ket(Box):
    """Preparation of a computational basis state, e.g. ``Ket(0, 1)``."""

    def __init__(self, *bits: int, dim: int = 2):
        if any(not 0 <= b < dim for b in bits):
            raise ValueError(f"basis indices {bits} out of range for dimension {dim}")
        self.bits = tuple(int(b) for b in bits)
        super().__init__("Ket", Ty(), qudit(dim) ** len(bits), self.bits, kind="ket")
        self.qudit_dim = dim

    def dagger(self):
        return Bra(*self.bits, dim=self.qudit_dim)

    def __str__(self):
        return f"Ket({', '.join(map(str, self.bits))})"


class Bra(Box):
    """Post-selection on a computational basis state."""

    def __init__(self, *bits: int, dim: int = 2):
        if any(not 0 <= b < dim for b in bits):
            raise ValueError(f"basis indices {bits} out of range for dimension {dim}")
        self.bits = tuple(int(b) for b in bits)
        super().__init__("Bra", qudit(dim) ** len(bits), Ty(), self.bits, kind="bra")
        self.qudit_dim = dim

    def dagger(self):
        return Ket(*self.bits, dim=self.qudit_dim)

    def __str__(self):
        return f"Bra({', '.join(map(str, self.bits))})"


class Measure(Box):
    """Measurement in the computational basis, from a qudit to a digit."""

    def __init__(self, dim: int = 2):
        super().__init__("Measure", qudit(dim), digit(dim), kind="measure")


class Encode(Box):
    """Preparation of the basis state given by a classical digit."""

    def __init__(self, dim: int = 2):
        super().__init__("Encode", digit(dim), qudit(dim), kind="encode")


class Discard(Box):
    """Trace out quantum wires and marginalise classical ones."""

    def __init__(self, dom: Ty = qubit):
        super().__init__("Discard", dom, Ty(), kind="discard")


class Controlled(Box):
    """A gate applied iff the classical bit on its left wire is 1."""

    def __init__(self, gate: Box):
        if gate.kind != "gate" or gate.dom != gate.cod:
            raise ValueError(f"cannot classically control {gate}")
        super().__init__(f"C[{gate}]", bit @ gate.dom, bit @ gate.cod, gate, kind="controlled")

    @property
    def gate(self) -> Box:
        return self.data


def is_catalog_gate(box: Box) -> bool:
    return (box.name in FIXED_MATRICES and box.data is None
            or box.name in PARAMETRIC_MATRICES and isinstance(box.data, Expr))


def gate_matrix(box: Box, params: Mapping = None) -> np.ndarray:
    """Matrix of a catalog gate acting on column vectors."""
    if not is_catalog_gate(box):
        raise ValueError(f"{box} is not a catalog gate")
    if box.data is None:
        return FIXED_MATRICES[box.name]
    return PARAMETRIC_MATRICES[box.name](box.data.eval(params))


def _pure_rule(sig):
    name, dom, cod, kind = sig
    if kind == "gate" and (name in FIXED_MATRICES or name in PARAMETRIC_MATRICES):
        def rule(box, params):
            if not is_catalog_gate(box):
                return PURE_FUNCTOR.native_image(box, params)
            d = PURE_FUNCTOR.dims(box.dom)
            return Tensor.from_matrix(d, d, gate_matrix(box, params))
        return rule
    if kind in ("ket", "bra"):
        def rule(box, params):
            wires = box.cod if kind == "ket" else box.dom
            dims = PURE_FUNCTOR.dims(wires)
            vector = np.zeros(dims.size, dtype=complex)
            vector[np.ravel_multi_index(box.data, dims.dims) if box.data else 0] = 1
            return Tensor(PURE_FUNCTOR.dims(box.dom), PURE_FUNCTOR.dims(box.cod), vector)
        return rule
    if kind == "spider":
        def rule(box, params):
            from qdiagrams.zx import spider_tensor
            return spider_tensor(box, params)
        return rule
    if kind in MIXED_KINDS:
        def rule(box, params):
            raise MixedCircuitError(
                f"box {box} is not pure; evaluate the circuit as a channel")
        return rule
    return None


PURE_FUNCTOR = TensorFunctor(ar=_pure_rule)


def is_mixed(c: Diagram | Sum) -> bool:
    """True iff the circuit has classical wires or measure/encode/discard boxes."""
    if isinstance(c, Sum):
        return any(is_mixed(t) for t in c.terms) or _classical(c.dom) or _classical(c.cod)
    if _classical(c.dom) or _classical(c.cod):
        return True
    for layer in c.layers:
        box = layer.box
        if box.kind in MIXED_KINDS or _classical(layer.dom) or _classical(layer.cod):
            return True
        if isinstance(box, Bubble) and is_mixed(box.inner):
            return True
    return False


def _classical(ty: Ty) -> bool:
    return any(o.is_classical for o in ty)


def mixed_box(c: Diagram | Sum) -> Box | None:
    """The first box making ``c`` mixed, if any."""
    diagrams = c.terms if isinstance(c, Sum) else (c, )
    for d in diagrams:
        for layer in d.layers:
            if (layer.box.kind in MIXED_KINDS or _classical(layer.dom)
                    or _classical(layer.cod)):
                return layer.box
            if isinstance(layer.box, Bubble):
                inner = mixed_box(layer.box.inner)
                if inner is not None:
                    return inner
    return None


def eval_pure(c: Diagram | Sum, params: Mapping = None) -> Tensor:
    """Evaluate a pure circuit as a tensor with ``qubit`` sent to dimension 2."""
    if is_mixed(c):
        culprit = mixed_box(c)
        where = f"box {culprit}" if culprit is not None else "a classical wire"
        raise MixedCircuitError(
            f"circuit is mixed ({where}); use channel semantics instead")
    return PURE_FUNCTOR(c, params)


def iqp_ansatz(n_qubits: int, params: Sequence[Sequence]) -> Diagram:
    """
    Instantaneous quantum polynomial ansatz: each layer is a column of
    Hadamards followed by ``CRz`` on every adjacent pair, left to right.
    """
    if n_qubits < 2:
        raise ValueError("the IQP ansatz needs at least two qubits")
    circuit = Id(qubit ** n_qubits)
    for row in params:
        if len(row) != n_qubits - 1:
            raise ValueError(
                f"each layer needs {n_qubits - 1} phases, got {len(row)}")
        hadamards = Id()
        for _ in range(n_qubits):
            hadamards = hadamards @ H
        circuit = circuit >> hadamards
        for i, phase in enumerate(row):
            circuit = circuit >> (Id(qubit ** i) @ CRz(phase) @ Id(qubit ** (n_qubits - i - 2)))
    return circuit
