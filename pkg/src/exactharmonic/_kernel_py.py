"""Pure-Python kernel backend. Mirrors ``_kernel.pyx`` operation for operation so both produce identical floats."""

from __future__ import annotations

import math

import numpy as np

OK, ERR_DOMAIN, ERR_RANGE = 0, 1, 2
STOP_MAX_POINTS, STOP_LEFT_BOX, STOP_DEGENERATE, STOP_CLOSED, STOP_DOMAIN, STOP_STALLED = range(6)
MODE_TANGENT_PROJECT, MODE_TANGENT, MODE_GRADIENT = range(3)


class _Fail(Exception):
    def __init__(self, status):
        self.status = status


def _run(code, consts, start, stop, x, y):
    stack = []
    for i in range(start, stop):
        op = code[i][0]
        arg = code[i][1]
        if op == 0:
            stack.append(consts[arg])
            continue
        if op == 1:
            stack.append(x)
            continue
        if op == 2:
            stack.append(y)
            continue
        if op == 3 or op == 4:
            vals = stack[len(stack) - arg :]
            del stack[len(stack) - arg :]
            r = vals[0]
            if op == 3:
                for v in vals[1:]:
                    r = r + v
            else:
                for v in vals[1:]:
                    r = r * v
        else:
            a = stack.pop()
            if op == 5:
                if a == 0.0 and arg < 0:
                    raise _Fail(ERR_DOMAIN)
                try:
                    if a < 0.0:
                        r = math.pow(-a, arg)
                        if arg % 2:
                            r = -r
                    else:
                        r = math.pow(a, arg)
                except OverflowError:
                    raise _Fail(ERR_RANGE) from None
            elif op == 6:
                r = -a
            elif op == 7:
                r = math.sin(a)
            elif op == 8:
                r = math.cos(a)
            elif op == 9:
                try:
                    r = math.exp(a)
                except OverflowError:
                    raise _Fail(ERR_RANGE) from None
            else:
                if a <= 0.0:
                    raise _Fail(ERR_DOMAIN)
                r = math.log(a)
        if not math.isfinite(r):
            raise _Fail(ERR_RANGE)
        stack.append(r)
    return stack[-1]


def _prepare(code, consts, starts):
    return [(int(a), int(b)) for a, b in code], [float(c) for c in consts], [int(s) for s in starts]


def eval_program(code, consts, starts, depth, index, x, y):
    """Return ``(status, value)``; status is OK, ERR_DOMAIN or ERR_RANGE."""
    c, k, s = _prepare(code, consts, starts)
    try:
        return OK, _run(c, k, s[index], s[index + 1], float(x), float(y))
    except _Fail as f:
        return f.status, math.nan


def trace(code, consts, starts, depth, x0, y0, step, max_points, box, mode, level, eps, sign):
    """Fixed-step RK4 tracing. Returns ``(points[n, 2], stop_reason)``."""
    c, k, s = _prepare(code, consts, starts)
    x0 = float(x0)
    y0 = float(y0)
    h = float(step)
    xmin, xmax, ymin, ymax = (float(b) for b in box)
    out = np.empty((max_points, 2), dtype=np.float64)
    out[0, 0] = x0
    out[0, 1] = y0
    n = 1

    def direction(x, y):
        m = _run(c, k, s[0], s[1], x, y)
        nn = _run(c, k, s[1], s[2], x, y)
        norm = math.sqrt(m * m + nn * nn)
        if norm < eps:
            return None
        if mode == MODE_GRADIENT:
            dx = m / norm
            dy = nn / norm
        else:
            dx = -nn / norm
            dy = m / norm
        if sign < 0:
            dx = -dx
            dy = -dy
        return dx, dy

    x = x0
    y = y0
    reason = STOP_MAX_POINTS
    while n < max_points:
        try:
            d1 = direction(x, y)
            if d1 is None:
                reason = STOP_DEGENERATE
                break
            d2 = direction(x + 0.5 * h * d1[0], y + 0.5 * h * d1[1])
            if d2 is None:
                reason = STOP_DEGENERATE
                break
            d3 = direction(x + 0.5 * h * d2[0], y + 0.5 * h * d2[1])
            if d3 is None:
                reason = STOP_DEGENERATE
                break
            d4 = direction(x + h * d3[0], y + h * d3[1])
            if d4 is None:
                reason = STOP_DEGENERATE
                break
            nx = x + (h / 6.0) * (d1[0] + 2.0 * d2[0] + 2.0 * d3[0] + d4[0])
            ny = y + (h / 6.0) * (d1[1] + 2.0 * d2[1] + 2.0 * d3[1] + d4[1])
            if mode == MODE_TANGENT_PROJECT:
                fv = _run(c, k, s[2], s[3], nx, ny) - level
                gx = _run(c, k, s[0], s[1], nx, ny)
                gy = _run(c, k, s[1], s[2], nx, ny)
                g2 = gx * gx + gy * gy
                if g2 < eps * eps:
                    reason = STOP_DEGENERATE
                    break
                nx = nx - fv * gx / g2
                ny = ny - fv * gy / g2
        except _Fail:
            reason = STOP_DOMAIN
            break
        if not (xmin <= nx <= xmax and ymin <= ny <= ymax):
            reason = STOP_LEFT_BOX
            break
        if nx == x and ny == y:
            reason = STOP_STALLED
            break
        out[n, 0] = nx
        out[n, 1] = ny
        n += 1
        x = nx
        y = ny
        if n > 10 and math.sqrt((x - x0) * (x - x0) + (y - y0) * (y - y0)) < 0.5 * h:
            reason = STOP_CLOSED
            break
    return out[:n].copy(), reason


def slope_grid(code, consts, starts, depth, xs, ys, eps):
    """Slope products ``(-u_x/u_y)(-v_x/v_y)`` on the grid ``xs`` x ``ys``.

    Programs 0..3 are u_x, u_y, v_x, v_y.  Returns ``(products, norm_u, norm_v, valid)``
    as flat arrays in y-major order; invalid nodes carry NaN.
    """
    c, k, s = _prepare(code, consts, starts)
    total = len(xs) * len(ys)
    prod = np.full(total, np.nan)
    nu = np.full(total, np.nan)
    nv = np.full(total, np.nan)
    valid = np.zeros(total, dtype=np.uint8)
    idx = 0
    for j in range(len(ys)):
        y = float(ys[j])
        for i in range(len(xs)):
            x = float(xs[i])
            try:
                ux = _run(c, k, s[0], s[1], x, y)
                uy = _run(c, k, s[1], s[2], x, y)
                vx = _run(c, k, s[2], s[3], x, y)
                vy = _run(c, k, s[3], s[4], x, y)
            except _Fail:
                idx += 1
                continue
            nu[idx] = math.sqrt(ux * ux + uy * uy)
            nv[idx] = math.sqrt(vx * vx + vy * vy)
            if abs(ux) >= eps and abs(uy) >= eps and abs(vx) >= eps and abs(vy) >= eps:
                prod[idx] = (-ux / uy) * (-vx / vy)
                valid[idx] = 1
            idx += 1
    return prod, nu, nv, valid
