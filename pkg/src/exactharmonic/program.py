"""Flatten expression trees into stack programs for the numeric kernels.

A bundle packs several programs into one opcode table so a kernel call can
evaluate e.g. ``(f_x, f_y, f)`` at a point without touching Python objects.
Each row of ``code`` is ``(opcode, argument)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import Constant, Cos, Exp, Expr, Ln, Neg, Power, Product, Sin, Sum, Variable, _exact_value

OP_CONST, OP_X, OP_Y, OP_ADD, OP_MUL, OP_POW, OP_NEG, OP_SIN, OP_COS, OP_EXP, OP_LN = range(11)

_UNARY = {Neg: OP_NEG, Sin: OP_SIN, Cos: OP_COS, Exp: OP_EXP, Ln: OP_LN}


@dataclass(frozen=True)
class Bundle:
    code: np.ndarray  # int64, shape (n, 2)
    consts: np.ndarray  # float64
    starts: np.ndarray  # int64, program i spans code[starts[i]:starts[i+1]]
    depth: int  # maximum stack depth over all programs

    def __len__(self) -> int:
        return len(self.starts) - 1


def _emit(e: Expr, code: list, consts: list) -> int:
    """Append ``e`` in postfix order; return the stack depth it needs."""
    exact = _exact_value(e)
    if exact is not None:
        code.append((OP_CONST, len(consts)))
        consts.append(float(exact))
        return 1
    if isinstance(e, Variable):
        code.append((OP_X if e.name == "x" else OP_Y, 0))
        return 1
    if isinstance(e, (Sum, Product)):
        items = e.terms if isinstance(e, Sum) else e.factors
        depth = 0
        for i, c in enumerate(items):
            depth = max(depth, i + _emit(c, code, consts))
        code.append((OP_ADD if isinstance(e, Sum) else OP_MUL, len(items)))
        return depth
    if isinstance(e, Power):
        depth = _emit(e.base, code, consts)
        code.append((OP_POW, e.exponent))
        return depth
    inner = e.inner if isinstance(e, Neg) else e.arg
    depth = _emit(inner, code, consts)
    code.append((_UNARY[type(e)], 0))
    return depth


def compile_bundle(exprs) -> Bundle:
    code: list = []
    consts: list = []
    starts = [0]
    depth = 1
    for e in exprs:
        depth = max(depth, _emit(e, code, consts))
        starts.append(len(code))
    return Bundle(
        np.asarray(code, dtype=np.int64).reshape(-1, 2),
        np.asarray(consts, dtype=np.float64),
        np.asarray(starts, dtype=np.int64),
        depth,
    )
