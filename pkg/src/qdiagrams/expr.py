"""
Real-valued symbolic expressions used as gate and spider parameters.

Expressions are immutable trees over constants, variables, sums, products and
negation. The smart constructors fold constants and drop neutral elements, so
derivatives of constant expressions come out as ``Const(0.0)``.

>>> v = Var("v")
>>> e = v * v + 3
>>> e.eval({"v": 2.0})
7.0
>>> expr_diff(e, "v")
Add(terms=(Var(name='v'), Var(name='v')))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

Number = Union[int, float]


class UnboundVariable(KeyError):
    """Raised when an expression is evaluated without a value for a variable."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unbound parameter {self.name!r}"


class Expr:
    """Base class for expression nodes."""

    def eval(self, params: Mapping[str, float] | None = None) -> float:
        raise NotImplementedError

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    @property
    def is_constant(self) -> bool:
        return not self.free_vars()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        if isinstance(other, Expr):
            if not isinstance(other, Const):
                raise TypeError("division by a non-constant expression")
            other = other.value
        return mul(self, Const(1.0 / other))

    def __neg__(self):
        return neg(self)

    def __float__(self):
        return float(self.eval())


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def eval(self, params=None):
        return self.value

    def free_vars(self):
        return frozenset()

    def __str__(self):
        return f"{self.value:g}"


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def eval(self, params=None):
        try:
            return float((params or {})[self.name])
        except KeyError:
            raise UnboundVariable(self.name) from None

    def free_vars(self):
        return frozenset((self.name,))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]

    def eval(self, params=None):
        return sum(t.eval(params) for t in self.terms)

    def free_vars(self):
        return frozenset().union(*(t.free_vars() for t in self.terms))

    def __str__(self):
        return "(" + " + ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]

    def eval(self, params=None):
        result = 1.0
        for f in self.factors:
            result *= f.eval(params)
        return result

    def free_vars(self):
        return frozenset().union(*(f.free_vars() for f in self.factors))

    def __str__(self):
        return "*".join(map(str, self.factors))


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def eval(self, params=None):
        return -self.arg.eval(params)

    def free_vars(self):
        return self.arg.free_vars()

    def __str__(self):
        return f"-{self.arg}"


ZERO, ONE = Const(0.0), Const(1.0)


def as_expr(value: Expr | Number) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"expected a real number or Expr, got {value!r}")
    return Const(value)


def add(*terms: Expr) -> Expr:
    flat, total = [], 0.0
    for t in terms:
        for u in (t.terms if isinstance(t, Add) else (t,)):
            if isinstance(u, Const):
                total += u.value
            else:
                flat.append(u)
    if total != 0.0 or not flat:
        flat.append(Const(total))
    return flat[0] if len(flat) == 1 else Add(tuple(flat))


def mul(*factors: Expr) -> Expr:
    flat, coeff = [], 1.0
    for f in factors:
        for u in (f.factors if isinstance(f, Mul) else (f,)):
            if isinstance(u, Const):
                coeff *= u.value
            else:
                flat.append(u)
    if coeff == 0.0:
        return ZERO
    if not flat:
        return Const(coeff)
    if coeff == -1.0:
        return neg(flat[0] if len(flat) == 1 else Mul(tuple(flat)))
    if coeff != 1.0:
        flat.insert(0, Const(coeff))
    return flat[0] if len(flat) == 1 else Mul(tuple(flat))


def neg(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Neg):
        return e.arg
    return Neg(e)


def expr_diff(e: Expr, var: str) -> Expr:
    """Symbolic derivative of ``e`` with respect to the variable ``var``."""
    if var not in e.free_vars():
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return neg(expr_diff(e.arg, var))
    if isinstance(e, Add):
        return add(*(expr_diff(t, var) for t in e.terms))
    if isinstance(e, Mul):
        # product rule over the factor list
        terms = []
        for i, f in enumerate(e.factors):
            df = expr_diff(f, var)
            if df != ZERO:
                terms.append(mul(*e.factors[:i], df, *e.factors[i + 1:]))
        return add(*terms)
    raise TypeError(f"cannot differentiate {e!r}")


def to_tree(e: Expr):
    """JSON-compatible encoding: numbers for constants, one-key dicts otherwise."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return {"var": e.name}
    if isinstance(e, Add):
        return {"add": [to_tree(t) for t in e.terms]}
    if isinstance(e, Mul):
        return {"mul": [to_tree(f) for f in e.factors]}
    if isinstance(e, Neg):
        return {"neg": to_tree(e.arg)}
    raise TypeError(f"not an expression: {e!r}")


def from_tree(tree) -> Expr:
    # Rebuild nodes directly so the round trip is structural.
    if isinstance(tree, bool):
        raise ValueError("booleans are not expressions")
    if isinstance(tree, (int, float)):
        return Const(tree)
    if not isinstance(tree, dict) or len(tree) != 1:
        raise ValueError(f"malformed expression {tree!r}")
    (key, value), = tree.items()
    if key == "var" and isinstance(value, str):
        return Var(value)
    if key == "add" and isinstance(value, list):
        return Add(tuple(from_tree(t) for t in value))
    if key == "mul" and isinstance(value, list):
        return Mul(tuple(from_tree(t) for t in value))
    if key == "neg":
        return Neg(from_tree(value))
    raise ValueError(f"malformed expression {tree!r}")
