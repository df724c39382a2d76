import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdiagrams import (
    CX, H, X, Z, Rz, Bra, Controlled, Discard, Encode, Id, Ket, Measure, Ty, bit,
    digit, eval_pure, qubit, qudit, scalar)
from qdiagrams.channel import (
    CQ, Channel, controlled, discard, encode, eval_channel, measure, pure)
from qdiagrams.tensor import Dim, Tensor, t_tensor, t_then

from helpers import max_err, random_circuit, random_density, random_tensor, random_unitary

Bell_state = Ket(0, 0) >> H @ Id(qubit) >> CX
protocol = Ket(1) @ Bell_state >> Bell_state.dagger() @ Id(qubit)
plus = Tensor(Dim(), Dim(2), [2 ** -.5, 2 ** -.5])


def point(n, k):
    p = np.zeros(n)
    p[k] = 1
    return Channel(CQ(), CQ(Dim(n), Dim()), p)


def test_cq_monoid():
    a, b = CQ(Dim(2), Dim(3)), CQ(Dim(5), Dim())
    assert a @ b == CQ(Dim(2, 5), Dim(3))
    assert a @ CQ() == a
    assert a.shape == (2, 3, 3) and a.size == 18


def test_pure():
    assert pure(Tensor.scalar(1 + 1j)).array.reshape(-1)[0] == pytest.approx(2)
    assert pure(Tensor.id(2)).close(Channel.id(CQ(Dim(), Dim(2))), 0)
    rho = pure(eval_pure(Ket(1))).density()
    assert max_err(rho, np.diag([0, 1])) == 0


def test_density_transpose_convention():
    rho = np.array([[.5, .25j], [-.25j, .5]])
    assert max_err(Channel.from_density(rho).density(), rho) == 0
    c = Ket(0) >> H >> Rz(.25)
    state = eval_pure(c).entries
    assert max_err(eval_channel(c).density(), np.outer(state, state.conj())) < 1e-15


def test_measure():
    assert max_err((pure(plus) >> measure(2)).distribution(), [.5, .5]) < 1e-15
    assert max_err((pure(eval_pure(Ket(1))) >> measure(2)).distribution(), [0, 1]) == 0
    m = measure(3)
    assert (m >> encode(3) >> m).close(m, 0)


def test_encode():
    assert max_err((point(2, 1) >> encode(2)).density(), np.diag([0, 1])) == 0
    assert (encode(2) >> measure(2)).close(Channel.id(CQ(Dim(2), Dim())), 0)
    rng = np.random.default_rng(0)
    rho = random_density(rng, 2)
    dephased = (Channel.from_density(rho) >> measure(2) >> encode(2)).density()
    assert max_err(dephased, np.diag(np.diag(rho))) < 1e-15


def test_discard():
    bell = pure(eval_pure(Bell_state))
    half = bell >> Channel.id(CQ(Dim(), Dim(2))) @ discard(2)
    assert max_err(half.density(), np.eye(2) / 2) < 1e-15
    uniform = Channel(CQ(), CQ(Dim(2), Dim()), [.5, .5])
    assert (uniform >> discard(c=2)).close(Channel.id(), 1e-15)
    assert (pure(eval_pure(Ket(0))) >> discard(2)).close(Channel.id(), 0)


def test_controlled():
    zero = Channel.from_density(np.diag([1, 0]))
    out = point(2, 0) @ zero >> controlled(X)
    assert max_err(out.array, (point(2, 0) @ zero).array) == 0
    out = point(2, 1) @ zero >> controlled(X)
    one = Channel.from_density(np.diag([0, 1]))
    assert out.close(point(2, 1) @ one, 0)
    uniform = Channel(CQ(), CQ(Dim(2), Dim()), [.5, .5])
    out = uniform @ zero >> controlled(X)
    expected = np.zeros((2, 2, 2))
    expected[0] = .5 * np.diag([1, 0]).T
    expected[1] = .5 * np.diag([0, 1]).T
    assert max_err(out.array, expected) == 0
    with pytest.raises(ValueError, match="unitary"):
        controlled(Tensor.from_matrix(Dim(2), Dim(2), np.diag([1, 2])))


def test_eval_channel_examples():
    assert eval_channel(Bell_state).close(pure(eval_pure(Bell_state)), 1e-10)
    assert eval_channel(protocol).close(pure(eval_pure(Ket(1) @ scalar(.5))), 1e-12)
    assert max_err(eval_channel(protocol).density(), np.diag([0, .25])) < 1e-12
    dist = eval_channel(Ket(0) >> H >> Measure()).distribution()
    assert max_err(dist, [.5, .5]) <= 1e-12


def test_eval_channel_mixed_boxes():
    # measure one half of a Bell pair and copy the outcome onto the other
    c = (Ket(0, 0) >> H @ Id(qubit) >> Measure() @ Id(qubit) >> Controlled(X)
         >> Discard(bit) @ Id(qubit))
    assert max_err(eval_channel(c).density(), np.eye(2) / 2) < 1e-15


def test_full_teleportation_with_corrections():
    c = (Ket(1) @ Bell_state >> CX @ Id(qubit) >> H @ Id(qubit ** 2)
         >> Measure() @ Measure() @ Id(qubit) >> Id(bit) @ Controlled(X)
         >> Id(bit) @ Discard(bit) @ Id(qubit) >> Controlled(Z) >> Discard(bit) @ Id(qubit))
    assert max_err(eval_channel(c).density(), np.diag([0, 1])) < 1e-12


def test_qudits_and_digits():
    c = Ket(2, dim=3) >> Measure(3)
    assert max_err(eval_channel(c).distribution(), [0, 0, 1]) == 0
    d = Encode(5) >> Measure(5)
    assert eval_channel(d).close(Channel.id(CQ(Dim(5), Dim())), 0)
    assert eval_channel(Id(digit(3) @ qudit(3))).dom == CQ(Dim(3), Dim(3))


def test_bubbles_and_sums_rejected():
    from qdiagrams import Bubble
    with pytest.raises(TypeError):
        eval_channel(Ket(0) + Ket(1))
    with pytest.raises(ValueError):
        eval_channel(Bubble(Ket(0) >> Bra(0), "exp"))


seeds = st.integers(0, 2 ** 32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_doubling_is_multiplicative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = ([2, 3][:int(k)] for k in rng.integers(0, 3, size=3))
    f, g = random_tensor(rng, a, b), random_tensor(rng, b, c)
    assert pure(t_then(f, g)).close((pure(f) >> pure(g)), 1e-10)
    assert pure(t_tensor(f, g)).close(pure(f) @ pure(g), 1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_unitary_channels(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    c = random_circuit(rng, n, int(rng.integers(0, 10)))
    u = eval_pure(c).matrix.T
    rho = random_density(rng, 2 ** n)
    out = (Channel.from_density(rho, [2] * n) >> eval_channel(c)).density()
    assert max_err(out, u @ rho @ u.conj().T) <= 1e-10
    assert (eval_channel(c) >> discard(Dim(*[2] * n))).close(discard(Dim(*[2] * n)), 1e-10)
    state = Channel.from_density(rho, [2] * n) >> eval_channel(c)
    probs = (state >> _measure_all(n)).distribution()
    assert np.all(np.abs(probs.imag) <= 1e-10) and np.all(probs.real >= -1e-10)
    assert abs(probs.sum() - np.trace(rho)) <= 1e-10


def _measure_all(n):
    result = Channel.id()
    for _ in range(n):
        result = result @ measure(2)
    return result


def test_random_unitary_matrix_on_density():
    rng = np.random.default_rng(5)
    u = random_unitary(rng, 4)
    g = Tensor.from_matrix(Dim(2, 2), Dim(2, 2), u)
    rho = random_density(rng, 4)
    out = (Channel.from_density(rho, [2, 2]) >> pure(g)).density()
    assert max_err(out, u @ rho @ u.conj().T) < 1e-12
