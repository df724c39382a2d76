"""
Classical-quantum maps through the doubling construction.

A :class:`Channel` between ``CQ(classical, quantum)`` systems stores one array
whose domain axes are ``(classical..., quantum bra..., quantum ket...)`` and
likewise for the codomain. A pure map ``f`` is doubled into
``conj(f) (x) f``, so states become (transposed) density matrices.

Mixed circuits are evaluated by a tensor functor sending each quantum wire of
dimension ``d`` to a single slot of dimension ``d * d``; the result is then
reshuffled into the channel layout.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple

import numpy as np

from qdiagrams.core import Box, Bubble, Diagram, Sum, Ty
from qdiagrams.functor import FunctorError, TensorFunctor
from qdiagrams.quantum import PURE_FUNCTOR
from qdiagrams.tensor import Dim, Tensor, as_dim


class CQ(NamedTuple):
    classical: Dim = Dim()
    quantum: Dim = Dim()

    def tensor(self, other: CQ) -> CQ:
        return CQ(self.classical @ other.classical, self.quantum @ other.quantum)

    __matmul__ = tensor

    @property
    def size(self) -> int:
        return self.classical.size * self.quantum.size ** 2

    @property
    def shape(self) -> tuple[int, ...]:
        return self.classical.dims + self.quantum.dims * 2

    def __repr__(self):
        return f"CQ(classical={self.classical!r}, quantum={self.quantum!r})"


def as_cq(x) -> CQ:
    if isinstance(x, CQ):
        return x
    classical, quantum = x
    return CQ(as_dim(classical), as_dim(quantum))


class Channel:
    """A classical-quantum map, stored in doubled form."""

    __slots__ = ("dom", "cod", "array")

    def __init__(self, dom: CQ, cod: CQ, array):
        self.dom, self.cod = as_cq(dom), as_cq(cod)
        array = np.asarray(array, dtype=complex)
        if array.size != self.dom.size * self.cod.size:
            raise ValueError(f"{array.size} entries do not fit {self.dom} -> {self.cod}")
        self.array = array.reshape(self.dom.shape + self.cod.shape)

    @property
    def matrix(self) -> np.ndarray:
        return self.array.reshape(self.dom.size, self.cod.size)

    @classmethod
    def id(cls, system: CQ = CQ()) -> Channel:
        system = as_cq(system)
        return cls(system, system, np.eye(system.size))

    @classmethod
    def pure(cls, f: Tensor) -> Channel:
        """Double a pure map: ``conj(f) (x) f`` with the conjugate copy as the bra."""
        n_dom, n_cod = len(f.dom), len(f.cod)
        outer = np.multiply.outer(f.array.conj(), f.array)
        perm = (list(range(n_dom)) + list(range(n_dom + n_cod, 2 * n_dom + n_cod))
                + list(range(n_dom, n_dom + n_cod))
                + list(range(2 * n_dom + n_cod, outer.ndim)))
        return cls(CQ(Dim(), f.dom), CQ(Dim(), f.cod), outer.transpose(perm))

    @classmethod
    def from_density(cls, rho, dims=None) -> Channel:
        """The state with density matrix ``rho`` on wires of dimensions ``dims``."""
        rho = np.asarray(rho, dtype=complex)
        dims = Dim(rho.shape[0]) if dims is None else as_dim(dims)
        if dims.size != rho.shape[0]:
            raise ValueError(f"{rho.shape} density matrix does not fit {dims}")
        return cls(CQ(), CQ(Dim(), dims), rho.T)

    def density(self) -> np.ndarray:
        """Density matrix of a purely quantum state."""
        if self.dom.size != 1 or self.cod.classical.size != 1:
            raise ValueError("not a quantum state")
        n = self.cod.quantum.size
        return self.array.reshape(n, n).T

    def distribution(self) -> np.ndarray:
        """Probability vector of a purely classical state."""
        if self.dom.size != 1 or self.cod.quantum.size != 1:
            raise ValueError("not a classical state")
        return self.array.reshape(-1)

    def then(self, *others: Channel) -> Channel:
        result = self
        for other in others:
            if result.cod != other.dom:
                raise ValueError(f"type mismatch: {result.cod} != {other.dom}")
            result = Channel(result.dom, other.cod, result.matrix @ other.matrix)
        return result

    __rshift__ = then

    def tensor(self, *others: Channel) -> Channel:
        result = self
        for other in others:
            f_groups = _groups(result.dom, result.cod)
            g_groups = _groups(other.dom, other.cod)
            offset = result.array.ndim
            outer = np.multiply.outer(result.array, other.array)
            perm = []
            for fg, gg in zip(f_groups, g_groups):
                perm += fg + [offset + k for k in gg]
            result = Channel(result.dom @ other.dom, result.cod @ other.cod,
                             outer.transpose(perm))
        return result

    __matmul__ = tensor

    def close(self, other: Channel, tol: float = 1e-10) -> bool:
        if (self.dom, self.cod) != (other.dom, other.cod):
            return False
        return bool(np.max(np.abs(self.array - other.array), initial=0.0) <= tol)

    def __repr__(self):
        return f"Channel(dom={self.dom!r}, cod={self.cod!r})"


def _groups(dom: CQ, cod: CQ) -> list[list[int]]:
    sizes = [len(dom.classical), len(dom.quantum), len(dom.quantum),
             len(cod.classical), len(cod.quantum), len(cod.quantum)]
    groups, start = [], 0
    for n in sizes:
        groups.append(list(range(start, start + n)))
        start += n
    return groups


def pure(f: Tensor) -> Channel:
    return Channel.pure(f)


def measure(n: int = 2) -> Channel:
    """Read the diagonal of a qudit into a classical distribution."""
    delta = np.zeros((n, n, n))
    for k in range(n):
        delta[k, k, k] = 1
    return Channel(CQ(Dim(), Dim(n)), CQ(Dim(n), Dim()), delta)


def encode(n: int = 2) -> Channel:
    """Prepare the basis state named by a classical digit."""
    delta = np.zeros((n, n, n))
    for k in range(n):
        delta[k, k, k] = 1
    return Channel(CQ(Dim(n), Dim()), CQ(Dim(), Dim(n)), delta)


def discard(q: Dim | int = Dim(), c: Dim | int = Dim()) -> Channel:
    """Partial trace over quantum wires ``q`` and marginal over classical wires ``c``."""
    q, c = as_dim(q), as_dim(c)
    array = np.multiply.outer(np.ones(c.size), np.eye(q.size).reshape(-1))
    return Channel(CQ(c, q), CQ(), array)


def controlled(g: Tensor | Box, params: Mapping = None) -> Channel:
    """Apply ``g`` when the classical bit is 1, and the identity when it is 0."""
    if isinstance(g, Box):
        g = PURE_FUNCTOR.box_image(g, params)
    m = g.matrix
    if g.dom != g.cod or not np.allclose(m @ m.conj().T, np.eye(len(m)), atol=1e-10):
        raise ValueError("classically controlled gates must be unitary")
    q = g.dom.size
    identity = Channel.pure(Tensor.id(g.dom)).array.reshape(q, q, q, q)
    gate = Channel.pure(g).array.reshape(q, q, q, q)
    array = np.zeros((2, q, q, 2, q, q), dtype=complex)
    array[0, :, :, 0] = identity
    array[1, :, :, 1] = gate
    system = CQ(Dim(2), g.dom)
    return Channel(system, system, array)


# Slot layout: each wire is one axis, of dimension d for classical wires and
# d * d (bra-major) for quantum ones.

def _wires(ty: Ty) -> list[tuple[bool, int]]:
    return [(o.is_classical, d) for o in ty if (d := PURE_FUNCTOR.dim(o)) != 1]


def cq_of(ty: Ty) -> CQ:
    wires = _wires(ty)
    return CQ(Dim(*(d for c, d in wires if c)), Dim(*(d for c, d in wires if not c)))


def _boundary_perm(wires, offset: int) -> tuple[list[int], list[int]]:
    """Expanded shape of a boundary and the permutation to channel order."""
    shape, classical, bra, ket = [], [], [], []
    for is_classical, d in wires:
        if is_classical:
            classical.append(offset + len(shape))
            shape.append(d)
        else:
            bra.append(offset + len(shape))
            ket.append(offset + len(shape) + 1)
            shape += [d, d]
    return shape, classical + bra + ket


def from_slots(array: np.ndarray, dom: Ty, cod: Ty) -> Channel:
    dom_shape, dom_perm = _boundary_perm(_wires(dom), 0)
    cod_shape, cod_perm = _boundary_perm(_wires(cod), len(dom_shape))
    array = np.asarray(array).reshape(dom_shape + cod_shape).transpose(dom_perm + cod_perm)
    return Channel(cq_of(dom), cq_of(cod), array)


def to_slots(channel: Channel, dom: Ty, cod: Ty) -> Tensor:
    dom_wires, cod_wires = _wires(dom), _wires(cod)
    dom_shape, dom_perm = _boundary_perm(dom_wires, 0)
    cod_shape, cod_perm = _boundary_perm(cod_wires, len(dom_shape))
    if (channel.dom, channel.cod) != (cq_of(dom), cq_of(cod)):
        raise FunctorError(f"channel {channel} does not fit {dom} -> {cod}")
    inverse = np.argsort(dom_perm + cod_perm)
    array = channel.array.transpose(inverse)
    return Tensor(_slot_dims(dom_wires), _slot_dims(cod_wires), array)


def _slot_dims(wires) -> Dim:
    return Dim(*(d if c else d * d for c, d in wires))


class ChannelFunctor(TensorFunctor):
    """Evaluate mixed circuits on doubled quantum wires."""

    def dim(self, obj):
        d = PURE_FUNCTOR.dim(obj)
        return d if obj.is_classical else d * d

    def rule(self, box):
        if box.kind in ("gate", "ket", "bra", "spider"):
            return lambda b, params: to_slots(
                Channel.pure(PURE_FUNCTOR.box_image(b, params)), b.dom, b.cod)
        if box.kind == "scalar":
            return lambda b, params: Tensor.scalar(abs(b.data.eval(params)) ** 2)
        if box.kind in ("measure", "encode"):
            def rule(b, params):
                wire = b.dom if b.kind == "measure" else b.cod
                n = PURE_FUNCTOR.dim(wire[0])
                primitive = measure(n) if b.kind == "measure" else encode(n)
                return to_slots(primitive, b.dom, b.cod)
            return rule
        if box.kind == "discard":
            def rule(b, params):
                system = cq_of(b.dom)
                return to_slots(discard(system.quantum, system.classical), b.dom, b.cod)
            return rule
        if box.kind == "controlled":
            return lambda b, params: to_slots(controlled(b.gate, params), b.dom, b.cod)
        return None

    def box_image(self, box, params=None):
        if isinstance(box, Bubble):
            raise FunctorError("bubbles have no channel semantics")
        return super().box_image(box, params)


CHANNEL_FUNCTOR = ChannelFunctor()


def eval_channel(c: Diagram, params: Mapping = None) -> Channel:
    """Evaluate a (possibly mixed) circuit as a classical-quantum map."""
    if isinstance(c, Sum):
        raise TypeError("formal sums have no channel semantics; evaluate terms separately")
    slots = CHANNEL_FUNCTOR(c, params)
    return from_slots(slots.array, c.dom, c.cod)
