"""
Typed string diagrams.

A :class:`Diagram` is a domain, a codomain and a sequence of :class:`Layer`
objects, each of which whiskers a single box with identity wires on its left
and right. Composition in sequence is ``>>`` (:meth:`Diagram.then`), in
parallel ``@`` (:meth:`Diagram.tensor`), and :meth:`Diagram.dagger` reflects a
diagram vertically.

>>> x, y = Ty("x"), Ty("y")
>>> f, g = Box("f", x, y), Box("g", y, x)
>>> d = f >> g
>>> len(d), d.dom, d.cod
(2, Ty('x'), Ty('x'))
>>> (f @ g).cod
Ty('y', 'x')
>>> d.dagger().dagger() == d
True
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from qdiagrams.expr import Expr


class AxiomError(ValueError):
    """Composition of diagrams whose boundaries do not match."""


# Wire names with a conventional dimension; "bit" and "digit" wires are classical.
KNOWN_DIMS = {"qubit": 2, "bit": 2}
CLASSICAL_NAMES = frozenset({"bit", "digit"})


@dataclass(frozen=True)
class Ob:
    """A wire label with an optional dimension hint."""

    name: str
    dim: int | None = None

    def __post_init__(self):
        if self.dim is not None and (isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1):
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")

    @property
    def is_classical(self) -> bool:
        return self.name in CLASSICAL_NAMES

    def __str__(self):
        if self.dim is None or KNOWN_DIMS.get(self.name) == self.dim:
            return self.name
        return f"{self.name}[{self.dim}]"


class Ty:
    """
    An ordered sequence of wire labels.

    Strings are promoted to :class:`Ob`, picking up the conventional
    dimension for ``"qubit"`` and ``"bit"``.
    """

    __slots__ = ("inside",)

    def __init__(self, *objects: Ob | str):
        self.inside = tuple(
            o if isinstance(o, Ob) else Ob(o, KNOWN_DIMS.get(o)) for o in objects)

    def tensor(self, *others: Ty) -> Ty:
        return Ty(*self.inside, *(o for t in others for o in t.inside))

    __matmul__ = tensor

    def __pow__(self, n: int) -> Ty:
        return Ty(*(self.inside * n))

    def __len__(self):
        return len(self.inside)

    def __iter__(self) -> Iterator[Ob]:
        return iter(self.inside)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Ty(*self.inside[key])
        return self.inside[key]

    def __eq__(self, other):
        return isinstance(other, Ty) and self.inside == other.inside

    def __hash__(self):
        return hash(self.inside)

    def __repr__(self):
        return "Ty(" + ", ".join(repr(str(o)) for o in self.inside) + ")"

    def __str__(self):
        return " @ ".join(map(str, self.inside)) or "Ty()"


def qudit(dim: int) -> Ty:
    return Ty(Ob("qubit", 2)) if dim == 2 else Ty(Ob("qudit", dim))


def digit(dim: int) -> Ty:
    return Ty(Ob("bit", 2)) if dim == 2 else Ty(Ob("digit", dim))


qubit, bit = qudit(2), digit(2)


class Layer(NamedTuple):
    left: Ty
    box: "Box"
    right: Ty

    @property
    def dom(self) -> Ty:
        return self.left @ self.box.dom @ self.right

    @property
    def cod(self) -> Ty:
        return self.left @ self.box.cod @ self.right

    def dagger(self) -> Layer:
        return Layer(self.left, self.box.dagger(), self.right)


class Diagram:
    """
    A diagram with boundaries ``dom`` and ``cod`` and a tuple of layers.

    The constructor does not type-check; use :func:`well_typed` for a
    diagnostic, or build diagrams from boxes with ``>>`` and ``@``.
    """

    def __init__(self, dom: Ty, cod: Ty, layers: Iterable[Layer] = ()):
        self.dom, self.cod = dom, cod
        self._layers = tuple(Layer(*layer) for layer in layers)

    @property
    def layers(self) -> tuple[Layer, ...]:
        return self._layers

    @property
    def boxes(self) -> tuple[Box, ...]:
        return tuple(layer.box for layer in self.layers)

    @classmethod
    def id(cls, dom: Ty = None) -> Diagram:
        return Diagram(Ty() if dom is None else dom, Ty() if dom is None else dom)

    def then(self, *others: Diagram) -> Diagram:
        result = self
        for other in others:
            if isinstance(other, Sum):
                result = Sum((result, ), result.dom, result.cod).then(other)
                continue
            if result.cod != other.dom:
                raise AxiomError(
                    f"cannot compose: cod {result.cod} does not match dom {other.dom}")
            result = Diagram(result.dom, other.cod, result.layers + other.layers)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def __lshift__(self, other):
        return other.then(self)

    def tensor(self, *others: Diagram | Ty) -> Diagram:
        result = self
        for other in others:
            if isinstance(other, Ty):
                other = Diagram.id(other)
            if isinstance(other, Sum):
                result = Sum((result, ), result.dom, result.cod).tensor(other)
                continue
            layers = tuple(
                Layer(layer.left, layer.box, layer.right @ other.dom)
                for layer in result.layers) + tuple(
                Layer(result.cod @ layer.left, layer.box, layer.right)
                for layer in other.layers)
            result = Diagram(
                result.dom @ other.dom, result.cod @ other.cod, layers)
        return result

    def __matmul__(self, other):
        return self.tensor(other)

    def __rmatmul__(self, other):
        if isinstance(other, Ty):
            return Diagram.id(other).tensor(self)
        return NotImplemented

    def __add__(self, other):
        return Sum((self, ), self.dom, self.cod) + other

    def dagger(self) -> Diagram:
        return Diagram(self.cod, self.dom, tuple(
            layer.dagger() for layer in reversed(self.layers)))

    def __len__(self):
        return len(self.layers)

    def __eq__(self, other):
        if isinstance(other, Diagram):
            return (self.dom, self.cod, self.layers) == (other.dom, other.cod, other.layers)
        return NotImplemented

    def __hash__(self):
        return hash((self.dom, self.cod, self.layers))

    def __repr__(self):
        if not self.layers:
            return f"Diagram.id({self.dom!r})"
        return " >> ".join(_layer_repr(layer) for layer in self.layers)

    def __str__(self):
        return repr(self)


def _layer_repr(layer: Layer) -> str:
    parts = [f"Id({layer.left})"] if layer.left else []
    parts.append(str(layer.box))
    if layer.right:
        parts.append(f"Id({layer.right})")
    return " @ ".join(parts)


Id = Diagram.id


class Box(Diagram):
    """
    A diagram with a single layer holding itself.

    ``kind`` discriminates the box families (``"gate"``, ``"ket"``,
    ``"spider"``...) and ``data`` holds an optional hashable payload.
    """

    def __init__(self, name: str, dom: Ty, cod: Ty, data=None,
                 kind: str = "gate", is_dagger: bool = False):
        self.name, self.data, self.kind, self.is_dagger = name, data, kind, is_dagger
        self.dom, self.cod = dom, cod

    @property
    def layers(self):
        return (Layer(Ty(), self, Ty()), )

    @property
    def key(self) -> tuple:
        return (self.kind, self.name, self.dom, self.cod, self.data, self.is_dagger)

    @property
    def free_vars(self) -> frozenset[str]:
        return payload_free_vars(self.data)

    def dagger(self) -> Box:
        return Box(self.name, self.cod, self.dom, self.data, self.kind, not self.is_dagger)

    def __eq__(self, other):
        if isinstance(other, Box):
            return self.key == other.key
        return super().__eq__(other)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return str(self)

    def __str__(self):
        name = self.name
        if isinstance(self.data, Expr):
            name = f"{name}({self.data})"
        return name + ("†" if self.is_dagger else "")


@dataclass(frozen=True)
class Entries:
    """Explicit row-major tensor entries as a box payload."""

    values: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))


@dataclass(frozen=True)
class ScalarValue:
    """
    The number ``coeff * factor * exp(i pi phase)``.

    ``factor`` and ``phase`` are real expressions and may be omitted.
    """

    coeff: complex = 1
    factor: Expr | None = None
    phase: Expr | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))

    def eval(self, params=None) -> complex:
        import cmath

        value = self.coeff
        if self.factor is not None:
            value *= self.factor.eval(params)
        if self.phase is not None:
            value *= cmath.exp(1j * cmath.pi * self.phase.eval(params))
        return value

    def conjugate(self) -> ScalarValue:
        return ScalarValue(self.coeff.conjugate(), self.factor,
                           None if self.phase is None else -self.phase)

    def __str__(self):
        c = self.coeff
        text = f"{c.real:g}" if c.imag == 0 else f"{c:g}".strip("()")
        parts = [] if c == 1 else [text]
        if self.factor is not None:
            parts.append(str(self.factor))
        if self.phase is not None:
            parts.append(f"exp(iπ·{self.phase})")
        return "*".join(parts) or "1"


def payload_free_vars(data) -> frozenset[str]:
    if isinstance(data, Expr):
        return data.free_vars()
    if isinstance(data, ScalarValue):
        return frozenset().union(*(
            e.free_vars() for e in (data.factor, data.phase) if e is not None))
    if isinstance(data, Diagram):
        return frozenset().union(*(b.free_vars for b in data.boxes))
    return frozenset()


class Scalar(Box):
    """A box with empty boundaries standing for a number."""

    def __init__(self, value):
        if not isinstance(value, ScalarValue):
            value = ScalarValue(factor=value) if isinstance(value, Expr) else ScalarValue(value)
        super().__init__("scalar", Ty(), Ty(), value, kind="scalar")

    @property
    def value(self) -> ScalarValue:
        return self.data

    def dagger(self):
        return Scalar(self.data.conjugate())

    def __str__(self):
        return f"scalar({self.data})"


def scalar(value) -> Scalar:
    return Scalar(value)


class Swap(Box):
    """Elementary swap of two single wires."""

    def __init__(self, left: Ty, right: Ty):
        if len(left) != 1 or len(right) != 1:
            raise ValueError("elementary swaps act on single wires")
        super().__init__("SWAP", left @ right, right @ left, kind="swap")
        self.left, self.right = left, right

    def dagger(self):
        return Swap(self.right, self.left)


def swap(x: Ty, y: Ty) -> Diagram:
    """Diagram from ``x @ y`` to ``y @ x`` made of ``len(x) * len(y)`` elementary swaps."""
    result = Diagram.id(x @ y)
    # move each wire of y across the whole of x, leftmost first
    for j in range(len(y)):
        for i in reversed(range(len(x))):
            left = y[:j] @ x[:i]
            layer = Diagram.id(left) @ Swap(x[i:i + 1], y[j:j + 1]) @ Diagram.id(x[i + 1:] @ y[j + 1:])
            result = result >> layer
    return result


def permutation(ty: Ty, perm: list[int]) -> Diagram:
    """
    Diagram sending wire ``perm[k]`` of ``ty`` to output position ``k``,
    built by bubble sort from adjacent swaps.
    """
    if sorted(perm) != list(range(len(ty))):
        raise ValueError(f"{perm} is not a permutation of {len(ty)} wires")
    order, current = list(perm), ty
    result = Diagram.id(ty)
    # order[k] is the source index sitting at position k of the target;
    # sort the current arrangement towards it one adjacent swap at a time
    position = list(range(len(ty)))
    target_rank = {src: k for k, src in enumerate(order)}
    changed = True
    while changed:
        changed = False
        for k in range(len(position) - 1):
            a, b = position[k], position[k + 1]
            if target_rank[a] > target_rank[b]:
                layer = (Diagram.id(current[:k]) @ Swap(current[k:k + 1], current[k + 1:k + 2])
                         @ Diagram.id(current[k + 2:]))
                result = result >> layer
                current = layer.cod
                position[k], position[k + 1] = b, a
                changed = True
    return result


class Bubble(Box):
    """A scalar function applied entry-wise to the evaluation of ``inner``."""

    functions = ("neg", "exp", "sin", "cos", "square")

    def __init__(self, inner: Diagram, function: str):
        if function not in self.functions:
            raise ValueError(f"unknown bubble function {function!r}")
        super().__init__(function, inner.dom, inner.cod, inner, kind="bubble")

    @property
    def inner(self) -> Diagram:
        return self.data

    @property
    def function(self) -> str:
        return self.name

    def dagger(self):
        return Bubble(self.inner.dagger(), self.function)

    def __str__(self):
        return f"{self.function}({self.inner!r})"


class Sum:
    """A formal sum of parallel diagrams; the empty sum is the zero map."""

    def __init__(self, terms: Iterable[Diagram], dom: Ty = None, cod: Ty = None):
        self.terms = tuple(terms)
        if dom is None or cod is None:
            if not self.terms:
                raise ValueError("an empty sum needs explicit dom and cod")
            dom, cod = self.terms[0].dom, self.terms[0].cod
        self.dom, self.cod = dom, cod
        for t in self.terms:
            if isinstance(t, Sum) or (t.dom, t.cod) != (dom, cod):
                raise AxiomError(f"sum term {t!r} does not have type {dom} -> {cod}")

    @staticmethod
    def of(d) -> Sum:
        return d if isinstance(d, Sum) else Sum((d, ), d.dom, d.cod)

    def __add__(self, other):
        other = Sum.of(other)
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise AxiomError(f"cannot add {self.dom} -> {self.cod} and {other.dom} -> {other.cod}")
        return Sum(self.terms + other.terms, self.dom, self.cod)

    __radd__ = __add__

    def then(self, *others) -> Sum:
        result = self
        for other in others:
            other = Sum.of(other)
            if result.cod != other.dom:
                raise AxiomError(
                    f"cannot compose: cod {result.cod} does not match dom {other.dom}")
            result = Sum([f >> g for f in result.terms for g in other.terms],
                         result.dom, other.cod)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def tensor(self, *others) -> Sum:
        result = self
        for other in others:
            other = Sum.of(Diagram.id(other) if isinstance(other, Ty) else other)
            result = Sum([f @ g for f in result.terms for g in other.terms],
                         result.dom @ other.dom, result.cod @ other.cod)
        return result

    def __matmul__(self, other):
        return self.tensor(other)

    def dagger(self) -> Sum:
        return Sum([t.dagger() for t in self.terms], self.cod, self.dom)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if isinstance(other, Sum):
            return (self.dom, self.cod, self.terms) == (other.dom, other.cod, other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.dom, self.cod, self.terms))

    def __repr__(self):
        if not self.terms:
            return f"Sum((), dom={self.dom!r}, cod={self.cod!r})"
        return " + ".join(f"({t!r})" for t in self.terms)


class TypeCheck(NamedTuple):
    """Result of :func:`well_typed`; truthy iff the diagram is well typed."""

    ok: bool
    index: int | None = None
    expected: Ty | None = None
    found: Ty | None = None

    def __bool__(self):
        return self.ok

    @property
    def message(self) -> str:
        if self.ok:
            return "well typed"
        return (f"layer {self.index}: expected {self.expected}, found {self.found}")


def well_typed(d: Diagram | Sum) -> TypeCheck:
    """
    Check that consecutive layers chain. The diagnostic names the first
    offending layer; index ``len(d)`` refers to the codomain.
    """
    if isinstance(d, Sum):
        for t in d.terms:
            if (t.dom, t.cod) != (d.dom, d.cod):
                return TypeCheck(False, 0, d.dom, t.dom)
            check = well_typed(t)
            if not check:
                return check
        return TypeCheck(True)
    current = d.dom
    for i, layer in enumerate(d.layers):
        if layer.dom != current:
            return TypeCheck(False, i, current, layer.dom)
        if isinstance(layer.box, Bubble):
            inner = well_typed(layer.box.inner)
            if not inner:
                return TypeCheck(False, i, inner.expected, inner.found)
        current = layer.cod
    if current != d.cod:
        return TypeCheck(False, len(d.layers), d.cod, current)
    return TypeCheck(True)
