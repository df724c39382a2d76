"""
Functors out of diagrams.

:class:`TensorFunctor` sends wires to dimensions and boxes to tensors, and
evaluates a diagram by contracting each layer's box into a running tensor.
:class:`DiagramFunctor` substitutes boxes by diagrams.
"""

from __future__ import annotations

from typing import Callable, Mapping, Union

import numpy as np

from qdiagrams.core import (
    Box, Bubble, Diagram, Entries, Ob, Sum, Ty, well_typed)
from qdiagrams.tensor import Dim, Tensor

Rule = Union[Tensor, Callable[[Box, Mapping], Tensor]]


class FunctorError(ValueError):
    """A box has no image, or its image has the wrong boundaries."""


def signature(box: Box) -> tuple:
    """Key under which box images are looked up: name, dom, cod and payload kind."""
    return (box.name, box.dom, box.cod, box.kind)


class TensorFunctor:
    """
    Evaluate diagrams as tensors.

    Parameters:
        ob : Mapping from :class:`Ob` (or its name) to a dimension. Objects
            missing from it fall back on their dimension hint.
        ar : Mapping from :func:`signature` to a rule, or a callable taking
            the signature and returning a rule (or ``None``). A rule is a
            :class:`Tensor` or a function ``(box, params) -> Tensor``.

    Swaps, scalars and boxes carrying :class:`Entries` are interpreted
    natively when ``ar`` has no rule for them.
    """

    def __init__(self, ob: Mapping = None, ar: Mapping | Callable = None):
        self.ob = dict(ob or {})
        self.ar = ar if ar is not None else {}

    def dim(self, obj: Ob) -> int:
        if obj in self.ob:
            return self.ob[obj]
        if obj.name in self.ob:
            return self.ob[obj.name]
        if obj.dim is None:
            raise FunctorError(f"no dimension for wire {obj.name!r}")
        return obj.dim

    def dims(self, ty: Ty) -> Dim:
        return Dim(*(self.dim(o) for o in ty))

    def rule(self, box: Box):
        sig = signature(box)
        if callable(self.ar):
            return self.ar(sig)
        return self.ar.get(sig)

    def box_image(self, box: Box, params: Mapping = None) -> Tensor:
        if isinstance(box, Bubble):
            return self(box.inner, params).map(box.function)
        if box.is_dagger:
            base = box.dagger()
            return self.box_image(base, params).dagger()
        rule = self.rule(box)
        if rule is None:
            image = self.native_image(box, params)
        elif isinstance(rule, Tensor):
            image = rule
        else:
            image = rule(box, params or {})
        dom, cod = self.dims(box.dom), self.dims(box.cod)
        if (image.dom, image.cod) != (dom, cod):
            raise FunctorError(
                f"image of {box} has type {image.dom} -> {image.cod}, expected {dom} -> {cod}")
        return image

    def native_image(self, box: Box, params) -> Tensor:
        dom, cod = self.dims(box.dom), self.dims(box.cod)
        if box.kind == "swap":
            x, y = self.dims(box.dom[:1]), self.dims(box.dom[1:])
            return swap_tensor(x, y)
        if box.kind == "scalar":
            return Tensor.scalar(box.data.eval(params))
        if isinstance(box.data, Entries):
            return Tensor(dom, cod, np.array(box.data.values))
        raise FunctorError(f"no rule for box {box} of kind {box.kind!r}")

    def __call__(self, d: Diagram | Sum, params: Mapping = None) -> Tensor:
        dom, cod = self.dims(d.dom), self.dims(d.cod)
        if isinstance(d, Sum):
            result = Tensor.zero(dom, cod)
            for term in d.terms:
                result = result + self(term, params)
            return result
        check = well_typed(d)
        if not check:
            raise FunctorError(f"ill-typed diagram: {check.message}")
        state = np.eye(dom.size, dtype=complex).reshape((dom.size, ) + dom.dims)
        for layer in d.layers:
            image = self.box_image(layer.box, params)
            state = contract_layer(
                state, len(self.dims(layer.left)), image)
        return Tensor(dom, cod, state)


def contract_layer(state: np.ndarray, offset: int, image: Tensor) -> np.ndarray:
    """
    Apply ``image`` to axes ``offset + 1 ...`` of ``state``, whose axis 0
    indexes the diagram's domain and the others its current wires.
    """
    n_in, n_out = len(image.dom), len(image.cod)
    axes = list(range(1 + offset, 1 + offset + n_in))
    result = np.tensordot(state, image.array, axes=(axes, list(range(n_in))))
    # tensordot puts the new axes last; move them where the box sits
    n_rest = state.ndim - n_in
    order = (list(range(1 + offset))
             + list(range(n_rest, n_rest + n_out))
             + list(range(1 + offset, n_rest)))
    return result.transpose(order)


def swap_tensor(x: Dim, y: Dim) -> Tensor:
    """The permutation tensor from ``x @ y`` to ``y @ x``."""
    n, m = len(x), len(y)
    eye = np.eye(x.size * y.size, dtype=complex).reshape(x.dims + y.dims + x.dims + y.dims)
    perm = list(range(n + m)) + [2 * n + m + k for k in range(m)] + [n + m + k for k in range(n)]
    return Tensor(x @ y, y @ x, eye.transpose(perm))


class DiagramFunctor:
    """
    Substitute boxes by diagrams.

    ``ob`` maps objects to types (identity by default) and ``ar`` is a
    callable from a box to its image, or a mapping keyed by box or
    :func:`signature`. Daggered boxes are sent to the dagger of the image of
    their undaggered base, and bubbles are mapped inside.
    """

    def __init__(self, ob: Mapping = None, ar: Mapping | Callable = None):
        self.ob = dict(ob or {})
        self.ar = ar if ar is not None else {}

    def map_ty(self, ty: Ty) -> Ty:
        result = Ty()
        for o in ty:
            image = self.ob.get(o, Ty(o))
            result = result @ image
        return result

    def box_image(self, box: Box) -> Diagram | Sum:
        if isinstance(box, Bubble):
            return Bubble(self(box.inner), box.function)
        if box.is_dagger:
            return self.box_image(box.dagger()).dagger()
        if callable(self.ar):
            image = self.ar(box)
        else:
            image = self.ar.get(box, self.ar.get(signature(box)))
        if image is None:
            raise FunctorError(f"no image for box {box}")
        if (image.dom, image.cod) != (self.map_ty(box.dom), self.map_ty(box.cod)):
            raise FunctorError(f"image of {box} has the wrong boundaries")
        return image

    def __call__(self, d: Diagram | Sum):
        if isinstance(d, Sum):
            return Sum([self(t) for t in d.terms], self.map_ty(d.dom), self.map_ty(d.cod))
        result = Diagram.id(self.map_ty(d.dom))
        for layer in d.layers:
            image = self.box_image(layer.box)
            result = result >> (Diagram.id(self.map_ty(layer.left)) @ image
                                @ Diagram.id(self.map_ty(layer.right)))
        return result
