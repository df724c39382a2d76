"""Random generators and reference implementations shared by the tests."""

import numpy as np

from qdiagrams import (
    CRz, CX, CZ, H, Id, Rx, Rz, S, SWAP, T, X, Y, Z, Box, Ket, Bra, Ty, qubit, scalar)
from qdiagrams.core import Entries, Ob, swap
from qdiagrams.functor import TensorFunctor
from qdiagrams.tensor import Dim, Tensor

FIXED_1 = (H, X, Y, Z, S, T)
FIXED_2 = (CX, CZ, SWAP)
ROTATIONS = (Rz, Rx)


def place(n, gate, i):
    return Id(qubit ** i) @ gate @ Id(qubit ** (n - i - len(gate.dom)))


def random_gate(rng, n, allow_params=True, two_qubit=True):
    choices = list(FIXED_1) + (list(FIXED_2) if n > 1 and two_qubit else [])
    if allow_params:
        choices += ["Rz", "Rx"] + (["CRz"] if n > 1 and two_qubit else [])
    g = choices[int(rng.integers(len(choices)))]
    if isinstance(g, str):
        phase = float(np.round(rng.uniform(-2, 2), 6))
        g = {"Rz": Rz, "Rx": Rx, "CRz": CRz}[g](phase)
    return g


def random_circuit(rng, n, m, **kwargs):
    """A circuit on ``n`` qubits with ``m`` random gates from the catalog."""
    d = Id(qubit ** n)
    for _ in range(m):
        g = random_gate(rng, n, **kwargs)
        d = d >> place(n, g, int(rng.integers(n - len(g.dom) + 1)))
    return d


def random_state_circuit(rng, n, m, **kwargs):
    bits = [int(b) for b in rng.integers(2, size=n)]
    return Ket(*bits) >> random_circuit(rng, n, m, **kwargs)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = z @ z.conj().T
    return rho / np.trace(rho)


def random_array(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_tensor(rng, dom, cod):
    dom, cod = Dim(*dom), Dim(*cod)
    return Tensor(dom, cod, random_array(rng, (dom.size, cod.size)))


# generic diagrams over wires of dimension 2, 3 and 5

WIRES = {"a": 2, "b": 3, "c": 5}
GENERIC = TensorFunctor(ob=WIRES)


def random_ty(rng, max_len=2):
    names = list(WIRES)
    return Ty(*(Ob(names[int(k)]) for k in rng.integers(len(names), size=int(rng.integers(max_len + 1)))))


def size(ty):
    return int(np.prod([WIRES[o.name] for o in ty], dtype=int))


def random_box(rng, dom, cod, name="f"):
    values = random_array(rng, size(dom) * size(cod)) / np.sqrt(max(size(dom), size(cod)))
    return Box(name, dom, cod, Entries(tuple(values)))


def random_diagram(rng, dom, cod, n_boxes=3, max_size=64):
    """A well-typed diagram from ``dom`` to ``cod`` with generic boxes and swaps."""
    d, current = Id(dom), dom
    for k in range(n_boxes):
        last = k == n_boxes - 1
        if not last and len(current) >= 2 and rng.random() < 0.3:
            i = int(rng.integers(len(current) - 1))
            layer = Id(current[:i]) @ swap(current[i:i + 1], current[i + 1:i + 2]) @ Id(current[i + 2:])
        else:
            i = int(rng.integers(len(current) + 1))
            j = int(rng.integers(i, len(current) + 1))
            if last:
                i, j = 0, len(current)
            target = cod if last else random_ty(rng)
            while not last and size(current[:i] @ target @ current[j:]) > max_size:
                target = random_ty(rng, 1)
            box = random_box(rng, current[i:j], target, f"f{k}")
            layer = Id(current[:i]) @ box @ Id(current[j:])
        d, current = d >> layer, layer.cod
    return d


def naive_then(f, g):
    """Contraction by explicit loops, as a reference for matrix products."""
    a, b = f.matrix, g.matrix
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


def naive_kron(f, g):
    a, b = f.matrix, g.matrix
    (p, q), (r, s) = a.shape, b.shape
    out = np.zeros((p * r, q * s), dtype=complex)
    for i in range(p):
        for j in range(q):
            for k in range(r):
                for m in range(s):
                    out[i * r + k, j * s + m] = a[i, j] * b[k, m]
    return out


def max_err(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def random_parameterised_circuit(rng, n, n_params, spread=0.5):
    """
    Circuit on ``n`` qubits with ``n_params`` rotations whose phases are
    affine in the shared variable ``v`` (plus a second variable ``w``),
    interleaved with fixed gates.

    The slopes in ``v`` are scaled so that their absolute values add up to
    ``spread``; this bounds the third derivative that central differences
    neglect.
    """
    from qdiagrams.expr import Var

    v, w = Var("v"), Var("w")
    slopes = rng.uniform(-1, 1, size=n_params)
    slopes *= spread / np.abs(slopes).sum()
    d = Id(qubit ** n)
    for slope in slopes:
        for _ in range(int(rng.integers(0, 3))):
            g = random_gate(rng, n, allow_params=False)
            d = d >> place(n, g, int(rng.integers(n - len(g.dom) + 1)))
        kinds = ["Rz", "Rx"] + (["CRz"] if n > 1 else [])
        kind = kinds[int(rng.integers(len(kinds)))]
        phase = v * float(slope) + w * float(rng.uniform(-1, 1)) + float(rng.uniform(-1, 1))
        g = {"Rz": Rz, "Rx": Rx, "CRz": CRz}[kind](phase)
        d = d >> place(n, g, int(rng.integers(n - len(g.dom) + 1)))
    return d


def central_difference(f, params, var, h=1e-3):
    up, down = dict(params), dict(params)
    up[var] += h
    down[var] -= h
    return (f(up) - f(down)) / (2 * h)


def five_point(f, params, var, h=1e-3):
    def at(k):
        p = dict(params)
        p[var] += k * h
        return f(p)
    return (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * h)


TRANSLATABLE_1 = ("H", "X", "Z", "S", "T", "Rz", "Rx")
TRANSLATABLE_2 = ("CX", "CZ", "SWAP", "CRz")


def random_translatable(rng, n, m):
    """Random circuit from the ZX-translatable gate set, with kets, bras and scalars."""
    from qdiagrams import quantum
    from qdiagrams.core import Swap

    bits = [int(b) for b in rng.integers(2, size=n)]
    d = Ket(*bits) if rng.random() < .5 else Id(qubit ** n)
    for _ in range(m):
        names = TRANSLATABLE_1 + (TRANSLATABLE_2 if n > 1 else ())
        name = names[int(rng.integers(len(names)))]
        if name in ("Rz", "Rx", "CRz"):
            g = getattr(quantum, name)(float(np.round(rng.uniform(-2, 2), 4)))
        elif name == "SWAP" and rng.random() < .5:
            g = Swap(qubit, qubit)
        else:
            g = getattr(quantum, name)
        d = d >> place(n, g, int(rng.integers(n - len(g.dom) + 1)))
    if rng.random() < .3:
        d = scalar(complex(*np.round(rng.normal(size=2), 3))) @ d
    if rng.random() < .3:
        bits = [int(b) for b in rng.integers(2, size=n)]
        d = d >> Bra(*bits)
    return d


def random_document_diagram(rng, n_layers=6):
    """A random well-typed diagram exercising every box kind of the schema."""
    from qdiagrams import Bubble, Controlled, Discard, Encode, Measure, quantum
    from qdiagrams.core import ScalarValue, Scalar, Swap
    from qdiagrams.expr import Var
    from qdiagrams.zx import Spider

    v = Var("v")
    current = Ty(*(["qubit"] * int(rng.integers(0, 4))))
    d = Id(current)
    for _ in range(n_layers):
        n = len(current)
        qubits = [i for i, o in enumerate(current) if o.name == "qubit"]
        bits = [i for i, o in enumerate(current) if o.name == "bit"]
        kind = str(rng.choice([
            "gate", "rotation", "spider", "scalar", "ket", "bra", "measure",
            "encode", "discard", "swap", "bubble", "controlled", "entries"]))
        box, at = None, 0
        if kind == "gate" and qubits:
            box, at = quantum.H, qubits[0]
        elif kind == "rotation" and qubits:
            phase = v * float(np.round(rng.uniform(-1, 1), 3)) + float(np.round(rng.uniform(-1, 1), 3))
            box, at = quantum.Rz(phase) if rng.random() < .5 else quantum.Rx(-phase), qubits[-1]
        elif kind == "spider":
            k = int(rng.integers(0, min(n, 2) + 1))
            if all(o.name == "qubit" for o in current[:k]):
                box = Spider(str(rng.choice(["Z", "X"])), k, int(rng.integers(0, 3)),
                             float(np.round(rng.uniform(0, 2), 3)))
        elif kind == "scalar":
            box = Scalar(ScalarValue(complex(*np.round(rng.normal(size=2), 3)),
                                     v if rng.random() < .5 else None,
                                     2 * v if rng.random() < .5 else None))
        elif kind == "ket":
            box = Ket(*[int(b) for b in rng.integers(2, size=int(rng.integers(1, 3)))])
            at = int(rng.integers(n + 1))
        elif kind == "bra" and len(qubits) >= 1:
            box, at = Bra(int(rng.integers(2))), qubits[0]
        elif kind == "measure" and qubits:
            box, at = Measure(), qubits[0]
        elif kind == "encode" and bits:
            box, at = Encode(), bits[0]
        elif kind == "discard" and n:
            at = int(rng.integers(n))
            box = Discard(current[at:at + 1])
        elif kind == "swap" and n >= 2:
            at = int(rng.integers(n - 1))
            box = Swap(current[at:at + 1], current[at + 1:at + 2])
        elif kind == "bubble":
            inner = Ket(0) >> quantum.Rz(v) >> Bra(1) if rng.random() < .5 else Box("g", Ty("a"), Ty("a"))
            box = Bubble(inner, str(rng.choice(["neg", "exp", "sin", "cos", "square"])))
            if box.dom:
                continue
        elif kind == "controlled":
            pairs = [i for i in bits if i + 1 < n and current[i + 1].name == "qubit"]
            if pairs:
                box, at = Controlled(quantum.X if rng.random() < .5 else quantum.Rz(.25)), pairs[0]
        elif kind == "entries":
            dim = int(rng.choice([2, 3]))
            box = Box("U", Ty(), Ty(Ob("qudit", dim)), Entries(tuple(np.round(random_array(rng, dim), 3))))
        if box is None:
            continue
        if rng.random() < .2:
            box = box.dagger()
            if box.dom and current[at:at + len(box.dom)] != box.dom:
                continue
        if current[at:at + len(box.dom)] != box.dom:
            continue
        layer = Id(current[:at]) @ box @ Id(current[at + len(box.dom):])
        d, current = d >> layer, layer.cod
    return d


# acceptance report lines, printed by the terminal summary hook in conftest.py
REPORT = []


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    REPORT.append(line)
    return line
