"""Numeric oracles independent of the symbolic differentiator."""

from __future__ import annotations

import random

from exactharmonic.errors import DomainError
from exactharmonic.expr import Expr, evaluate

FD_STEP = 1e-5


def central_difference(e: Expr, var: str, p: tuple, h: float = FD_STEP) -> float:
    x, y = p
    if var == "x":
        return (evaluate(e, (x + h, y)) - evaluate(e, (x - h, y))) / (2 * h)
    return (evaluate(e, (x, y + h)) - evaluate(e, (x, y - h))) / (2 * h)


def fd_laplacian(e: Expr, p: tuple, h: float = 1e-4) -> float:
    x, y = p
    c = evaluate(e, p)
    return (
        evaluate(e, (x + h, y)) + evaluate(e, (x - h, y)) + evaluate(e, (x, y + h)) + evaluate(e, (x, y - h)) - 4 * c
    ) / (h * h)


def valid_points(exprs, n: int, rng: random.Random, margin: float = 0.25) -> list:
    """``n`` points in [-2, 2]^2, at least ``margin`` from the axes, where every expression evaluates."""
    pts = []
    while len(pts) < n:
        x, y = rng.uniform(-2, 2), rng.uniform(-2, 2)
        if abs(x) < margin or abs(y) < margin:
            continue
        try:
            for e in exprs:
                for dx, dy in ((0, 0), (FD_STEP, 0), (-FD_STEP, 0), (0, FD_STEP), (0, -FD_STEP)):
                    evaluate(e, (x + dx, y + dy))
        except (DomainError, OverflowError):
            continue
        pts.append((x, y))
    return pts
