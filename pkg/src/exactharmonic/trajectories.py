"""Orthogonal trajectories: conjugate forms, slope products and numeric curve tracing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernel
from .calculus import diff
from .errors import DegeneratePoint, DegenerateSeed, DomainError
from .exact import DifferentialForm, conjugate_form
from .expr import Expr, Point, evaluate
from .program import compile_bundle

DEGENERACY_EPS = 1e-12
DEFAULT_BOX = (-10.0, 10.0, -10.0, 10.0)


def orthogonal_form(form: DifferentialForm) -> DifferentialForm:
    """``-N dx + M dy = 0``: the trajectory equation orthogonal to ``M dx + N dy = 0``."""
    return conjugate_form(form)


def slope_product(u: Expr, v: Expr, p) -> float:
    """``(dy/dx)_u * (dy/dx)_v = (-u_x/u_y)(-v_x/v_y)`` at ``p``; -1 for orthogonal families."""
    px, py = _seed_xy(p)
    ux, uy = evaluate(diff(u, "x"), p), evaluate(diff(u, "y"), p)
    vx, vy = evaluate(diff(v, "x"), p), evaluate(diff(v, "y"), p)
    for name, val in (("u_x", ux), ("u_y", uy), ("v_x", vx), ("v_y", vy)):
        if abs(val) < DEGENERACY_EPS:
            raise DegeneratePoint(f"{name} vanishes at ({px}, {py})")
    return (-ux / uy) * (-vx / vy)


@dataclass(frozen=True)
class Polyline:
    """One traced curve; ``points`` is an ``(n, 2)`` float array."""

    points: np.ndarray
    family_label: str
    level: float
    stop_reason: str = "max_points"

    def __len__(self) -> int:
        return len(self.points)

    @property
    def closed(self) -> bool:
        return self.stop_reason == "closed"


class Grid(NamedTuple):
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int


@dataclass(frozen=True)
class AuditSample:
    point: Point
    slope_product: float
    gradient_norms: tuple


@dataclass(frozen=True)
class OrthogonalityAudit:
    samples: list = field(default_factory=list)
    max_deviation: float = 0.0
    skipped: int = 0


def _seed_xy(seed) -> tuple[float, float]:
    x, y = seed
    return float(x), float(y)


def _trace(fields: Sequence[Expr], seed, step, max_points, box, mode, level, sign, backend) -> tuple:
    if step <= 0:
        raise ValueError("step must be positive")
    if max_points < 1:
        raise ValueError("max_points must be at least 1")
    k = kernel.get_backend(backend)
    b = compile_bundle(fields)
    x0, y0 = _seed_xy(seed)
    gx = k.eval_program(b.code, b.consts, b.starts, b.depth, 0, x0, y0)
    gy = k.eval_program(b.code, b.consts, b.starts, b.depth, 1, x0, y0)
    if gx[0] != kernel.OK or gy[0] != kernel.OK:
        raise DomainError(f"field cannot be evaluated at seed ({x0}, {y0})")
    if math.sqrt(gx[1] * gx[1] + gy[1] * gy[1]) < DEGENERACY_EPS:
        raise DegenerateSeed(f"gradient vanishes at seed ({x0}, {y0})")
    pts, reason = k.trace(
        b.code, b.consts, b.starts, b.depth, x0, y0, float(step), int(max_points),
        tuple(float(v) for v in box), mode, float(level), DEGENERACY_EPS, sign,
    )
    return pts, kernel.STOP_NAMES[reason]


def _join(forward: tuple, backward: tuple) -> tuple:
    pts_f, reason_f = forward
    if reason_f == "closed":
        return forward
    pts_b, _ = backward
    return np.concatenate([pts_b[:0:-1], pts_f]), reason_f


def trace_level_curve(
    potential: Expr,
    seed,
    step: float = 0.01,
    max_points: int = 10000,
    *,
    box=DEFAULT_BOX,
    both_directions: bool = False,
    backend: str | None = None,
) -> Polyline:
    """Follow ``potential = potential(seed)`` with RK4 along the unit tangent plus one Newton projection per step.

    Stops at ``max_points``, on leaving ``box`` (x0, x1, y0, y1), on a vanishing
    gradient, or on returning within ``step/2`` of the seed after 10 steps.
    With ``both_directions`` an open curve is also traced backwards from the seed.
    """
    fields = (diff(potential, "x"), diff(potential, "y"), potential)
    level = evaluate(potential, seed)
    run = _trace(fields, seed, step, max_points, box, kernel.MODE_TANGENT_PROJECT, level, 1, backend)
    if both_directions and run[1] != "closed":
        back = _trace(fields, seed, step, max_points, box, kernel.MODE_TANGENT_PROJECT, level, -1, backend)
        run = _join(run, back)
    return Polyline(run[0], "level", level, run[1])


def trace_orthogonal(
    potential: Expr,
    seed,
    step: float = 0.01,
    max_points: int = 10000,
    *,
    box=DEFAULT_BOX,
    both_directions: bool = False,
    level: float = math.nan,
    backend: str | None = None,
) -> Polyline:
    """RK4 along the unit gradient of ``potential``: a trajectory normal to every level curve.

    ``level`` labels the curve (typically the conjugate's value at the seed).
    """
    fields = (diff(potential, "x"), diff(potential, "y"))
    run = _trace(fields, seed, step, max_points, box, kernel.MODE_GRADIENT, 0.0, 1, backend)
    if both_directions and run[1] != "closed":
        run = _join(run, _trace(fields, seed, step, max_points, box, kernel.MODE_GRADIENT, 0.0, -1, backend))
    return Polyline(run[0], "orthogonal", level, run[1])


def trace_form(
    form: DifferentialForm,
    seed,
    step: float = 0.01,
    max_points: int = 10000,
    *,
    orthogonal: bool = False,
    box=DEFAULT_BOX,
    both_directions: bool = False,
    backend: str | None = None,
) -> Polyline:
    """Integral curve of ``M dx + N dy = 0`` (or of its orthogonal form) without a potential.

    This is the numeric route for forms that are not exact.
    """
    fields = (form.M, form.N)
    mode = kernel.MODE_GRADIENT if orthogonal else kernel.MODE_TANGENT
    run = _trace(fields, seed, step, max_points, box, mode, 0.0, 1, backend)
    if both_directions and run[1] != "closed":
        run = _join(run, _trace(fields, seed, step, max_points, box, mode, 0.0, -1, backend))
    return Polyline(run[0], "orthogonal" if orthogonal else "level", math.nan, run[1])


def orthogonality_audit(u: Expr, v: Expr, grid, *, backend: str | None = None) -> OrthogonalityAudit:
    """Evaluate the slope product on every node of ``grid``; degenerate nodes are counted as skipped."""
    g = Grid(*grid)
    if g.nx < 2 or g.ny < 2:
        raise ValueError("grid needs at least 2 nodes per axis")
    xs = np.linspace(g.x_min, g.x_max, g.nx)
    ys = np.linspace(g.y_min, g.y_max, g.ny)
    k = kernel.get_backend(backend)
    b = compile_bundle((diff(u, "x"), diff(u, "y"), diff(v, "x"), diff(v, "y")))
    prod, nu, nv, valid = k.slope_grid(b.code, b.consts, b.starts, b.depth, xs, ys, DEGENERACY_EPS)
    samples = []
    worst = 0.0
    idx = 0
    for y in ys:
        for x in xs:
            if valid[idx]:
                samples.append(AuditSample(Point(float(x), float(y)), float(prod[idx]), (float(nu[idx]), float(nv[idx]))))
                worst = max(worst, abs(float(prod[idx]) + 1.0))
            idx += 1
    return OrthogonalityAudit(samples, worst, len(xs) * len(ys) - len(samples))

