"""
Typed string diagrams with tensor, channel and ZX semantics.

>>> from qdiagrams import Ket, H, CX, Id, qubit, scalar, eval_pure
>>> Bell_state = Ket(0, 0) >> H @ Id(qubit) >> CX
>>> protocol = Ket(1) @ Bell_state >> Bell_state.dagger() @ Id(qubit)
>>> eval_pure(protocol).close(eval_pure(Ket(1) @ scalar(.5)))
True
"""

from qdiagrams.expr import Expr, Var, UnboundVariable
from qdiagrams.core import (
    AxiomError, Ob, Ty, Layer, Diagram, Id, Box, Scalar, scalar, Swap, swap,
    permutation, Bubble, Sum, well_typed, qubit, bit, qudit, digit)
from qdiagrams.tensor import Dim, Tensor
from qdiagrams.functor import TensorFunctor, DiagramFunctor, FunctorError
from qdiagrams.quantum import (
    Gate, H, X, Y, Z, S, T, CX, CZ, SWAP, Rz, Rx, CRz, Ket, Bra,
    Measure, Encode, Discard, Controlled, MixedCircuitError, eval_pure,
    is_mixed, iqp_ansatz)
from qdiagrams.channel import CQ, Channel, ChannelFunctor, eval_channel, pure
from qdiagrams.autodiff import GradientError, diagram_grad
from qdiagrams import zx
from qdiagrams.zx import Spider, circuit2zx, ZxGraph, to_graph, from_graph, fuse_spiders
from qdiagrams.render import layout, to_svg, to_tikz
from qdiagrams.serial import DocumentError, TypingError, encode_doc, decode_doc

__version__ = "0.1.0"
