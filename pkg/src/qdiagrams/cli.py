"""
Command-line entry point.

Exit codes: 0 success, 1 missing file or failed check, 2 malformed document
or unbound parameter, 3 semantic error (mixed box under pure semantics,
untranslatable box, ...). Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from qdiagrams.autodiff import GradientError, diagram_grad
from qdiagrams.channel import eval_channel
from qdiagrams.core import AxiomError, Id, Sum, qubit
from qdiagrams.expr import UnboundVariable
from qdiagrams.functor import FunctorError
from qdiagrams.quantum import (
    CX, H, Ket, MixedCircuitError, eval_pure, is_mixed)
from qdiagrams.render import layout, to_svg, to_tikz
from qdiagrams.serial import DocumentError, TypingError, decode_doc, encode_doc
from qdiagrams.zx import GraphError, ZxGraph, circuit2zx, from_graph, fuse_spiders, evaluate, to_graph


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def teleportation():
    Bell_state = Ket(0, 0) >> H @ Id(qubit) >> CX
    return Ket(1) @ Bell_state >> Bell_state.dagger() @ Id(qubit)


EXAMPLES = {"teleportation": teleportation}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", 1) from None


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _params(pairs) -> dict[str, float]:
    params = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise CliError(f"expected name=value, got {pair!r}", 2)
        try:
            params[name.strip()] = float(value)
        except ValueError:
            raise CliError(f"parameter {name!r} is not a number: {value!r}", 2) from None
    return params


def _entries(array, tolerance: float) -> list:
    flat = np.asarray(array, dtype=complex).reshape(-1)
    re, im = flat.real.copy(), flat.imag.copy()
    re[np.abs(re) <= tolerance] = 0.0
    im[np.abs(im) <= tolerance] = 0.0
    return [[float(a) + 0.0, float(b) + 0.0] for a, b in zip(re, im)]


def _dump(obj) -> str:
    return json.dumps(obj) + "\n"


def tensor_json(t, tolerance: float) -> dict:
    return {"semantics": "pure", "dom": list(t.dom.dims), "cod": list(t.cod.dims),
            "entries": _entries(t.entries, tolerance)}


def channel_json(c, tolerance: float) -> dict:
    def system(cq):
        return {"classical": list(cq.classical.dims), "quantum": list(cq.quantum.dims)}
    return {"semantics": "channel", "dom": system(c.dom), "cod": system(c.cod),
            "entries": _entries(c.array, tolerance)}


def cmd_check(args):
    try:
        d = decode_doc(_read(args.file))
    except TypingError as err:
        raise CliError(str(err), 1) from None
    kind = f"sum of {len(d)} terms" if isinstance(d, Sum) else f"{len(d)} layers"
    print(f"ok: {d.dom} -> {d.cod}, {kind}", file=sys.stderr)


def cmd_eval(args):
    d = decode_doc(_read(args.file))
    params = _params(args.param)
    semantics = args.semantics or ("channel" if is_mixed(d) else "pure")
    if semantics == "pure":
        result = tensor_json(eval_pure(d, params), args.tolerance)
    else:
        result = channel_json(eval_channel(d, params), args.tolerance)
    _write(_dump(result), args.output)


def cmd_grad(args):
    d = decode_doc(_read(args.file))
    grad = diagram_grad(d, args.var)
    if args.at is None:
        _write(encode_doc(grad), args.output)
        return
    params = dict(_params(args.param), **{args.var: args.at})
    _write(_dump(tensor_json(eval_pure(grad, params), args.tolerance)), args.output)


def cmd_zx_convert(args):
    d = decode_doc(_read(args.file))
    if isinstance(d, Sum):
        raise CliError("formal sums cannot be converted to a single graph", 3)
    graph = to_graph(circuit2zx(d), _params(args.param))
    _write(graph.dumps() + "\n", args.output)


def _load_graph(path: str) -> ZxGraph:
    try:
        return ZxGraph.loads(_read(path))
    except json.JSONDecodeError as err:
        raise CliError(f"invalid JSON: {err}", 2) from None
    except GraphError as err:
        raise CliError(str(err), 2) from None


def cmd_zx_simplify(args):
    graph = fuse_spiders(_load_graph(args.file))
    _write(graph.dumps() + "\n", args.output)


def cmd_zx_eval(args):
    graph = _load_graph(args.file)
    _write(_dump(tensor_json(evaluate(from_graph(graph)), args.tolerance)), args.output)


def cmd_draw(args):
    d = decode_doc(_read(args.file))
    if isinstance(d, Sum):
        raise CliError("draw one term at a time", 3)
    lay = layout(d)
    if args.format == "svg":
        text = to_svg(lay, 40.0 * args.scale)
    else:
        text = to_tikz(lay, args.scale)
    _write(text, args.output)


def cmd_example(args):
    _write(encode_doc(EXAMPLES[args.name]()), args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdiagrams", description="String diagrams for quantum circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_output(p):
        p.add_argument("-o", "--output", help="output file (default: standard output)")
        return p

    def with_params(p):
        p.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="bind a parameter (repeatable)")
        p.add_argument("--tolerance", type=float, default=1e-12,
                       help="round entry parts below this magnitude to zero")
        return p

    p = sub.add_parser("check", help="type-check a diagram document")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = with_params(with_output(sub.add_parser("eval", help="evaluate a diagram")))
    p.add_argument("file")
    p.add_argument("--semantics", choices=("pure", "channel"))
    p.set_defaults(func=cmd_eval)

    p = with_params(with_output(sub.add_parser("grad", help="differentiate a diagram")))
    p.add_argument("file")
    p.add_argument("--var", required=True)
    p.add_argument("--at", type=float, help="evaluate the gradient at this value")
    p.set_defaults(func=cmd_grad)

    zx = sub.add_parser("zx", help="ZX graphs").add_subparsers(dest="zx_command", required=True)
    p = with_params(with_output(zx.add_parser("convert", help="circuit document to ZX graph")))
    p.add_argument("file")
    p.set_defaults(func=cmd_zx_convert)
    p = with_output(zx.add_parser("simplify", help="fuse spiders"))
    p.add_argument("file")
    p.set_defaults(func=cmd_zx_simplify)
    p = with_params(with_output(zx.add_parser("eval", help="evaluate a ZX graph")))
    p.add_argument("file")
    p.set_defaults(func=cmd_zx_eval)

    p = with_output(sub.add_parser("draw", help="render a diagram to TikZ or SVG"))
    p.add_argument("file")
    p.add_argument("--format", choices=("tikz", "svg"), default="svg")
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_draw)

    p = with_output(sub.add_parser("example", help="emit a built-in example document"))
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except (DocumentError, UnboundVariable) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (MixedCircuitError, FunctorError, GradientError, GraphError,
            AxiomError, TypeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
