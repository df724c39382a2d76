import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdiagrams import (
    CRz, CX, H, X, Bra, Bubble, Id, Ket, Measure, Rx, Rz, Sum, Ty, eval_pure,
    iqp_ansatz, qubit, scalar)
from qdiagrams.autodiff import GradientError, bubble_grad, diagram_grad, gate_grad, box_grad
from qdiagrams.core import Scalar, ScalarValue
from qdiagrams.expr import (
    ONE, ZERO, Add, Const, Mul, UnboundVariable, Var, expr_diff, from_tree, to_tree)

from helpers import (
    central_difference, five_point, max_err, random_parameterised_circuit)

v, w = Var("v"), Var("w")


def grad_entries(d, params, var="v"):
    return eval_pure(diagram_grad(d, var), params).entries


def value_entries(d):
    return lambda params: eval_pure(d, params).entries


# expressions

def test_expr_eval_and_folding():
    e = 2 * v * w - v / 4 + 1
    assert e.eval({"v": 2, "w": 3}) == pytest.approx(12 - .5 + 1)
    assert e.free_vars() == {"v", "w"}
    assert (v + 0) == v and (v * 1) == v and (v * 0) == ZERO and -(-v) == v
    assert Const(2) + 3 == Const(5)
    with pytest.raises(UnboundVariable, match="w"):
        e.eval({"v": 1})
    with pytest.raises(TypeError):
        v / w


def test_expr_diff():
    assert expr_diff(Const(3), "v") == ZERO
    assert expr_diff(v, "v") == ONE and expr_diff(w, "v") == ZERO
    d = expr_diff(v * v, "v")
    assert d.eval({"v": 1.5}) == 3.0 and d == v + v


def test_expr_diff_matches_central_difference():
    e = v * v * v * w + 2 * v - 1
    de = expr_diff(e, "v")
    for x in np.random.default_rng(2).uniform(-1, 1, size=5):
        p = {"v": float(x), "w": 0.7}
        fd = central_difference(lambda q: e.eval(q), p, "v", 1e-4)
        assert abs(de.eval(p) - fd) <= 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_expr_diff_matches_stencil(seed):
    rng = np.random.default_rng(seed)
    e = random_expr(rng, 4)
    de = expr_diff(e, "v")
    for x in rng.uniform(-1, 1, size=5):
        p = {"v": float(x), "w": 0.7}
        fd = five_point(lambda q: e.eval(q), p, "v")
        assert abs(de.eval(p) - fd) <= 1e-8 * max(1, abs(fd))


def random_expr(rng, depth):
    if depth == 0 or rng.random() < .3:
        k = int(rng.integers(3))
        return [v, w, Const(float(np.round(rng.uniform(-2, 2), 3)))][k]
    k = int(rng.integers(3))
    a, b = random_expr(rng, depth - 1), random_expr(rng, depth - 1)
    return [a + b, a * b, -a][k]


def test_expr_tree_round_trip():
    e = Add((Mul((Const(2.0), v)), Const(-1.0), w)) - v
    assert from_tree(to_tree(e)) == e
    with pytest.raises(ValueError):
        from_tree({"pow": [1, 2]})


# gate gradients

def test_constant_gate_has_zero_gradient():
    g = gate_grad(Rz(0.3), "v")
    assert isinstance(g, Sum) and g.terms == ()
    assert eval_pure(g).matrix.tolist() == [[0, 0], [0, 0]]


def test_rz_gradient_value():
    got = eval_pure(gate_grad(Rz(v), "v"), {"v": .25}).matrix
    expected = np.diag([-1j * math.pi * np.exp(-1j * math.pi / 4),
                        1j * math.pi * np.exp(1j * math.pi / 4)])
    assert max_err(got, expected) < 1e-14


@pytest.mark.parametrize("gate", [Rz, Rx, CRz])
def test_gate_gradients_match_stencil(gate):
    rng = np.random.default_rng(4)
    for x in rng.uniform(-1, 1, size=5):
        d = gate(2 * v + 0.1)
        p = {"v": float(x)}
        fine = five_point(value_entries(d), p, "v")
        assert max_err(eval_pure(gate_grad(d, "v"), p).entries, fine) <= 1e-8


def test_rx_gradient_central_difference():
    # step 1e-3, tolerance 1e-6 at a random point
    x = float(np.random.default_rng(8).uniform(-1, 1))
    p = {"v": x}
    fd = central_difference(value_entries(Rx(v)), p, "v")
    assert max_err(eval_pure(gate_grad(Rx(v), "v"), p).entries, fd) <= 1e-6


def test_daggered_gate_gradient():
    d = Rx(v).dagger()
    p = {"v": .3}
    assert max_err(eval_pure(gate_grad(d, "v"), p).entries,
                   five_point(value_entries(d), p, "v")) <= 1e-8


def test_ungradable_gate():
    with pytest.raises(GradientError):
        gate_grad(H, "v")


# diagram gradients

def test_v_free_circuit():
    assert diagram_grad(H >> Rz(.3), "v").terms == ()


def test_term_counts():
    assert len(diagram_grad(Rz(v) @ Rz(v), "v")) == 2
    assert len(diagram_grad(CRz(v) >> Rz(w) @ Rx(3 * v), "v")) == 3
    assert len(diagram_grad(Rz(v) + (Rx(v) >> Rz(v)), "v")) == 3


def test_linearity_is_structural():
    a, b = Rz(v) >> H, H >> Rx(v * v)
    assert diagram_grad(a + b, "v").terms == diagram_grad(a, "v").terms + diagram_grad(b, "v").terms


def test_iqp_gradient_central_difference():
    d = iqp_ansatz(2, [[v]])
    p = {"v": .37}
    fd = central_difference(value_entries(d), p, "v")
    assert max_err(grad_entries(d, p), fd) <= 1e-6


def test_iqp_gradient_stencil():
    d = iqp_ansatz(3, [[v, 2 * v], [-v, .5]])
    p = {"v": .37}
    assert max_err(grad_entries(d, p), five_point(value_entries(d), p, "v")) <= 1e-8


def test_scalar_gradients():
    s = Scalar(ScalarValue(1.5j, v * v, 2 * v))
    p = {"v": .4}
    got = eval_pure(box_grad(s, "v"), p).entries
    assert max_err(got, five_point(lambda q: eval_pure(s, q).entries, p, "v")) <= 1e-8


def test_ungradable_boxes():
    with pytest.raises(GradientError):
        diagram_grad(Bubble(Rz(v), "exp") >> Id(qubit), "v")
    from qdiagrams import Box
    from qdiagrams.core import Ty
    with pytest.raises(GradientError, match="cannot be differentiated"):
        diagram_grad(Box("f", qubit, qubit, v, kind="spider"), "v")


# bubbles

def expectation(phase):
    return Ket(0) >> H >> Rz(phase) >> H >> Bra(0)


def test_bubble_gradients():
    assert bubble_grad(Bubble(expectation(.3), "exp"), "v").terms == ()
    g = bubble_grad(Bubble(scalar(v), "square"), "v")
    assert eval_pure(g, {"v": 3}).entries[0] == pytest.approx(6)


@pytest.mark.parametrize("function", ["exp", "sin", "cos", "square", "neg"])
def test_bubble_chain_rule_stencil(function):
    b = Bubble(expectation(v * 1.5), function)
    p = {"v": .21}
    fine = five_point(lambda q: eval_pure(b, q).entries, p, "v")
    assert max_err(eval_pure(bubble_grad(b, "v"), p).entries, fine) <= 1e-8


def test_sin_bubble_central_difference():
    b = Bubble(expectation(v), "sin")
    p = {"v": .37}
    fd = central_difference(lambda q: eval_pure(b, q).entries, p, "v")
    assert max_err(eval_pure(bubble_grad(b, "v"), p).entries, fd) <= 1e-6


def test_nested_bubbles():
    b = Bubble(Bubble(expectation(v), "sin") @ scalar(v), "exp")
    p = {"v": -.4}
    got = eval_pure(diagram_grad(b, "v"), p).entries
    assert max_err(got, five_point(lambda q: eval_pure(b, q).entries, p, "v")) <= 1e-8


def test_non_scalar_bubble_is_rejected():
    with pytest.raises(GradientError, match="scalar"):
        bubble_grad(Bubble(Rz(v), "exp"), "v")


# random circuits, entry-wise against a fourth-order stencil

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_circuit_gradients(seed):
    rng = np.random.default_rng(seed)
    d = random_parameterised_circuit(rng, int(rng.integers(1, 4)), int(rng.integers(1, 9)), spread=2.0)
    p = {"v": float(rng.uniform(-1, 1)), "w": float(rng.uniform(-1, 1))}
    reference = five_point(value_entries(d), p, "v")
    assert np.allclose(grad_entries(d, p), reference, rtol=1e-7, atol=1e-8)
