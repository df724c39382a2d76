"""
Dense complex tensors: the target of diagram evaluation.

A :class:`Tensor` has a domain and codomain :class:`Dim` and a numpy array of
shape ``dom.dims + cod.dims``. Flattened, entry ``(i, j)`` sits at
``i * size(cod) + j`` with the leftmost wire most significant, which is just
numpy's C order.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

BUBBLE_FUNCTIONS = {
    "neg": np.negative,
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "square": np.square,
}


class Dim:
    """Sequence of wire dimensions; ones are dropped so ``Dim(1) == Dim()``."""

    __slots__ = ("dims", )

    def __init__(self, *dims: int):
        for d in dims:
            if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 1:
                raise ValueError(f"dimensions must be positive integers, got {d!r}")
        self.dims = tuple(int(d) for d in dims if d != 1)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def tensor(self, *others: Dim) -> Dim:
        return Dim(*self.dims, *(d for o in others for d in o.dims))

    __matmul__ = tensor

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __eq__(self, other):
        return isinstance(other, Dim) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    def __repr__(self):
        return f"Dim({', '.join(map(str, self.dims))})"


def as_dim(d: Dim | int | Iterable[int]) -> Dim:
    if isinstance(d, Dim):
        return d
    if isinstance(d, (int, np.integer)):
        return Dim(d)
    return Dim(*d)


class Tensor:
    """A linear map between tensor products of spaces with dimensions ``dom`` and ``cod``."""

    __slots__ = ("dom", "cod", "array")

    def __init__(self, dom: Dim, cod: Dim, array):
        self.dom, self.cod = as_dim(dom), as_dim(cod)
        array = np.asarray(array, dtype=complex)
        if array.size != self.dom.size * self.cod.size:
            raise ValueError(
                f"{array.size} entries do not fit {self.dom} -> {self.cod}")
        self.array = array.reshape(self.dom.dims + self.cod.dims)

    @property
    def entries(self) -> np.ndarray:
        return self.array.reshape(-1)

    @property
    def matrix(self) -> np.ndarray:
        """Array of shape ``(size(dom), size(cod))``."""
        return self.array.reshape(self.dom.size, self.cod.size)

    @classmethod
    def id(cls, dom: Dim | int = Dim()) -> Tensor:
        dom = as_dim(dom)
        return cls(dom, dom, np.eye(dom.size, dtype=complex))

    @classmethod
    def scalar(cls, value: complex) -> Tensor:
        return cls(Dim(), Dim(), value)

    @classmethod
    def zero(cls, dom: Dim, cod: Dim) -> Tensor:
        dom, cod = as_dim(dom), as_dim(cod)
        return cls(dom, cod, np.zeros(dom.size * cod.size, dtype=complex))

    @classmethod
    def from_matrix(cls, dom: Dim, cod: Dim, matrix) -> Tensor:
        """Build from a matrix acting on column vectors, i.e. indexed ``[cod, dom]``."""
        return cls(dom, cod, np.asarray(matrix, dtype=complex).T)

    def then(self, *others: Tensor) -> Tensor:
        result = self
        for other in others:
            if result.cod != other.dom:
                raise ValueError(f"dimension mismatch: {result.cod} != {other.dom}")
            result = Tensor(result.dom, other.cod, result.matrix @ other.matrix)
        return result

    __rshift__ = then

    def tensor(self, *others: Tensor) -> Tensor:
        result = self
        for other in others:
            n_dom, n_cod = len(result.dom), len(result.cod)
            m_dom = len(other.dom)
            outer = np.multiply.outer(result.array, other.array)
            # axes are (f.dom, f.cod, g.dom, g.cod); bring g.dom before f.cod
            perm = (list(range(n_dom))
                    + list(range(n_dom + n_cod, n_dom + n_cod + m_dom))
                    + list(range(n_dom, n_dom + n_cod))
                    + list(range(n_dom + n_cod + m_dom, outer.ndim)))
            result = Tensor(result.dom @ other.dom, result.cod @ other.cod,
                            outer.transpose(perm))
        return result

    __matmul__ = tensor

    def dagger(self) -> Tensor:
        return Tensor(self.cod, self.dom, self.matrix.conj().T)

    def map(self, function: str) -> Tensor:
        if function not in BUBBLE_FUNCTIONS:
            raise ValueError(f"unknown function tag {function!r}")
        return Tensor(self.dom, self.cod, BUBBLE_FUNCTIONS[function](self.array))

    def __add__(self, other: Tensor) -> Tensor:
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("cannot add tensors with different boundaries")
        return Tensor(self.dom, self.cod, self.array + other.array)

    def __mul__(self, scalar: complex) -> Tensor:
        return Tensor(self.dom, self.cod, self.array * scalar)

    __rmul__ = __mul__

    def close(self, other: Tensor, tol: float = 1e-10) -> bool:
        return t_close(self, other, tol)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return t_close(self, other, 0)

    __hash__ = None

    def __repr__(self):
        return f"Tensor(dom={self.dom!r}, cod={self.cod!r}, array={self.entries!r})"


def t_then(f: Tensor, g: Tensor) -> Tensor:
    return f.then(g)


def t_tensor(f: Tensor, g: Tensor) -> Tensor:
    return f.tensor(g)


def t_dagger(f: Tensor) -> Tensor:
    return f.dagger()


def t_map(f: Tensor, function: str) -> Tensor:
    return f.map(function)


def t_close(f: Tensor, g: Tensor, tol: float = 1e-10) -> bool:
    """True iff boundaries match and the largest entry-wise difference is at most ``tol``."""
    if (f.dom, f.cod) != (g.dom, g.cod):
        return False
    return bool(np.max(np.abs(f.entries - g.entries), initial=0.0) <= tol)
