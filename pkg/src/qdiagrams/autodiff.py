"""
Diagrammatic differentiation.

The gradient of a diagram is a formal :class:`~qdiagrams.core.Sum`: one term
per layer whose box depends on the variable, with that box replaced by each
term of its own gradient (product rule). Parameterised gates differentiate by
inserting their generator::

    d/dv Rz(f) = -i pi f'(v) * Z . Rz(f)
    d/dv Rx(f) = -i pi f'(v) * X . Rx(f)
    d/dv CRz(f) = -i pi f'/2 * (1 @ Z) . CRz(f) + i pi f'/2 * (Z @ Z) . CRz(f)

Bubbles around scalar diagrams follow the chain rule.
"""

from __future__ import annotations

import math

from qdiagrams.core import (
    Box, Bubble, Diagram, Id, Layer, Scalar, ScalarValue, Sum, Ty)
from qdiagrams.expr import ONE, ZERO, Const, Expr, expr_diff, mul
from qdiagrams.quantum import X, Z, qubit

__all__ = ["GradientError", "gate_grad", "diagram_grad", "bubble_grad", "expr_diff"]


class GradientError(ValueError):
    """A box depends on the variable but has no gradient rule."""


def _scaled(coeff: complex, factor: Expr, diagram: Diagram) -> Diagram:
    return Scalar(ScalarValue(coeff, factor)) @ diagram


def gate_grad(g: Box, var: str) -> Sum:
    """Gradient of a single parameterised gate as a sum of circuits."""
    zero = Sum((), g.dom, g.cod)
    if g.kind != "gate" or g.name not in ("Rz", "Rx", "CRz") or not isinstance(g.data, Expr):
        raise GradientError(f"no gradient rule for {g}")
    if var not in g.data.free_vars():
        return zero
    if g.is_dagger:
        return gate_grad(g.dagger(), var).dagger()
    slope = expr_diff(g.data, var)
    if slope == ZERO:
        return zero
    if g.name == "Rz":
        return Sum.of(_scaled(-1j * math.pi, slope, g >> Z))
    if g.name == "Rx":
        return Sum.of(_scaled(-1j * math.pi, slope, g >> X))
    half = mul(slope, Const(0.5))
    return (_scaled(-1j * math.pi, half, g >> Id(qubit) @ Z)
            + _scaled(1j * math.pi, half, g >> Z @ Z))


def scalar_grad(s: Box, var: str) -> Sum:
    """Gradient of ``coeff * factor * exp(i pi phase)``."""
    value: ScalarValue = s.data
    zero = Sum((), Ty(), Ty())
    if var not in s.free_vars:
        return zero
    terms = []
    factor = value.factor if value.factor is not None else ONE
    d_factor = expr_diff(factor, var)
    if d_factor != ZERO:
        terms.append(Scalar(ScalarValue(value.coeff, d_factor, value.phase)))
    if value.phase is not None:
        d_phase = expr_diff(value.phase, var)
        if d_phase != ZERO:
            terms.append(Scalar(ScalarValue(
                value.coeff * 1j * math.pi, mul(factor, d_phase), value.phase)))
    return Sum(terms, Ty(), Ty())


def box_grad(box: Box, var: str) -> Sum:
    if var not in box.free_vars:
        return Sum((), box.dom, box.cod)
    if isinstance(box, Bubble):
        return bubble_grad(box, var)
    if box.kind == "scalar":
        return scalar_grad(box, var)
    if box.kind == "gate":
        return gate_grad(box, var)
    raise GradientError(f"box {box} depends on {var!r} but cannot be differentiated")


def diagram_grad(d: Diagram | Sum, var: str) -> Sum:
    """
    Product rule over layers. The result evaluates to the entry-wise
    derivative of the evaluation of ``d``.
    """
    if isinstance(d, Sum):
        terms = []
        for t in d.terms:
            terms.extend(diagram_grad(t, var).terms)
        return Sum(terms, d.dom, d.cod)
    terms = []
    layers = d.layers
    for i, layer in enumerate(layers):
        if var not in layer.box.free_vars:
            continue
        before = Diagram(d.dom, layer.dom, layers[:i])
        after = Diagram(layer.cod, d.cod, layers[i + 1:])
        for term in box_grad(layer.box, var).terms:
            middle = Id(layer.left) @ term @ Id(layer.right)
            terms.append(before >> middle >> after)
    return Sum(terms, d.dom, d.cod)


def _chain_factor(b: Bubble) -> Diagram:
    """Derivative of the bubble's function, evaluated at its inner diagram."""
    inner = b.inner
    if b.function == "exp":
        return Bubble(inner, "exp")
    if b.function == "sin":
        return Bubble(inner, "cos")
    if b.function == "cos":
        return Bubble(Bubble(inner, "sin"), "neg")
    if b.function == "square":
        return Scalar(2) @ inner
    if b.function == "neg":
        return Scalar(-1)
    raise GradientError(f"unknown bubble function {b.function!r}")


def bubble_grad(b: Bubble, var: str) -> Sum:
    """Chain rule ``g(f(v))' = g'(f(v)) * f'(v)`` for scalar inner diagrams."""
    if b.inner.dom or b.inner.cod:
        raise GradientError("only bubbles around scalar diagrams can be differentiated")
    inner_grad = diagram_grad(b.inner, var)
    if not inner_grad.terms:
        return Sum((), Ty(), Ty())
    return Sum.of(_chain_factor(b)) @ inner_grad
