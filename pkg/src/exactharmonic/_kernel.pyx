# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend; keep in lockstep with _kernel_py.py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, exp, log, pow, sqrt, isfinite, fabs, NAN
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    OK = 0
    ERR_DOMAIN = 1
    ERR_RANGE = 2

cdef enum:
    STOP_MAX_POINTS = 0
    STOP_LEFT_BOX = 1
    STOP_DEGENERATE = 2
    STOP_CLOSED = 3
    STOP_DOMAIN = 4
    STOP_STALLED = 5

cdef enum:
    MODE_TANGENT_PROJECT = 0
    MODE_TANGENT = 1
    MODE_GRADIENT = 2


cdef struct Prog:
    const long long* code
    const double* consts
    const long long* starts
    double* stack


cdef int run(Prog* p, Py_ssize_t index, double x, double y, double* out) noexcept nogil:
    cdef long long i, op, arg, k
    cdef Py_ssize_t top = 0
    cdef double a, r
    for i in range(p.starts[index], p.starts[index + 1]):
        op = p.code[2 * i]
        arg = p.code[2 * i + 1]
        if op == 0:
            p.stack[top] = p.consts[arg]
            top += 1
            continue
        if op == 1:
            p.stack[top] = x
            top += 1
            continue
        if op == 2:
            p.stack[top] = y
            top += 1
            continue
        if op == 3 or op == 4:
            top -= arg
            r = p.stack[top]
            if op == 3:
                for k in range(1, arg):
                    r = r + p.stack[top + k]
            else:
                for k in range(1, arg):
                    r = r * p.stack[top + k]
        else:
            top -= 1
            a = p.stack[top]
            if op == 5:
                if a == 0.0 and arg < 0:
                    return ERR_DOMAIN
                if a < 0.0:
                    r = pow(-a, <double>arg)
                    if arg % 2:
                        r = -r
                else:
                    r = pow(a, <double>arg)
            elif op == 6:
                r = -a
            elif op == 7:
                r = sin(a)
            elif op == 8:
                r = cos(a)
            elif op == 9:
                r = exp(a)
            else:
                if a <= 0.0:
                    return ERR_DOMAIN
                r = log(a)
        if not isfinite(r):
            return ERR_RANGE
        p.stack[top] = r
        top += 1
    out[0] = p.stack[top - 1]
    return OK


cdef Prog make_prog(const long long[:, ::1] code, const double[::1] consts, const long long[::1] starts, int depth):
    cdef Prog p
    p.code = &code[0, 0] if code.shape[0] > 0 else NULL
    p.consts = &consts[0] if consts.shape[0] > 0 else NULL
    p.starts = &starts[0]
    p.stack = <double*> malloc(sizeof(double) * (depth + 1))
    if p.stack == NULL:
        raise MemoryError()
    return p


def eval_program(code, consts, starts, int depth, Py_ssize_t index, double x, double y):
    cdef Prog p = make_prog(code, consts, starts, depth)
    cdef double v = NAN
    cdef int status
    try:
        status = run(&p, index, x, y, &v)
    finally:
        free(p.stack)
    return status, (v if status == OK else NAN)


cdef int direction(Prog* p, int mode, int sign, double eps, double x, double y,
                   double* dx, double* dy) noexcept nogil:
    """Returns OK, ERR_* or -1 for a degenerate gradient."""
    cdef double m, n, norm
    cdef int st = run(p, 0, x, y, &m)
    if st != OK:
        return st
    st = run(p, 1, x, y, &n)
    if st != OK:
        return st
    norm = sqrt(m * m + n * n)
    if norm < eps:
        return -1
    if mode == MODE_GRADIENT:
        dx[0] = m / norm
        dy[0] = n / norm
    else:
        dx[0] = -n / norm
        dy[0] = m / norm
    if sign < 0:
        dx[0] = -dx[0]
        dy[0] = -dy[0]
    return OK


def trace(code, consts, starts, int depth, double x0, double y0, double step, Py_ssize_t max_points,
          box, int mode, double level, double eps, int sign):
    cdef Prog p = make_prog(code, consts, starts, depth)
    cdef double xmin = box[0], xmax = box[1], ymin = box[2], ymax = box[3]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((max_points, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double h = step
    cdef double x = x0, y = y0, nx, ny
    cdef double d1x, d1y, d2x, d2y, d3x, d3y, d4x, d4y
    cdef double fv, gx, gy, g2
    cdef Py_ssize_t n = 1
    cdef int st, reason = STOP_MAX_POINTS
    out[0, 0] = x0
    out[0, 1] = y0
    try:
        with nogil:
            while n < max_points:
                st = direction(&p, mode, sign, eps, x, y, &d1x, &d1y)
                if st == OK:
                    st = direction(&p, mode, sign, eps, x + 0.5 * h * d1x, y + 0.5 * h * d1y, &d2x, &d2y)
                if st == OK:
                    st = direction(&p, mode, sign, eps, x + 0.5 * h * d2x, y + 0.5 * h * d2y, &d3x, &d3y)
                if st == OK:
                    st = direction(&p, mode, sign, eps, x + h * d3x, y + h * d3y, &d4x, &d4y)
                if st == -1:
                    reason = STOP_DEGENERATE
                    break
                if st != OK:
                    reason = STOP_DOMAIN
                    break
                nx = x + (h / 6.0) * (d1x + 2.0 * d2x + 2.0 * d3x + d4x)
                ny = y + (h / 6.0) * (d1y + 2.0 * d2y + 2.0 * d3y + d4y)
                if mode == MODE_TANGENT_PROJECT:
                    st = run(&p, 2, nx, ny, &fv)
                    if st == OK:
                        st = run(&p, 0, nx, ny, &gx)
                    if st == OK:
                        st = run(&p, 1, nx, ny, &gy)
                    if st != OK:
                        reason = STOP_DOMAIN
                        break
                    fv = fv - level
                    g2 = gx * gx + gy * gy
                    if g2 < eps * eps:
                        reason = STOP_DEGENERATE
                        break
                    nx = nx - fv * gx / g2
                    ny = ny - fv * gy / g2
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
                if n > 10 and sqrt((x - x0) * (x - x0) + (y - y0) * (y - y0)) < 0.5 * h:
                    reason = STOP_CLOSED
                    break
    finally:
        free(p.stack)
    return out_arr[:n].copy(), reason


def slope_grid(code, consts, starts, int depth, xs, ys, double eps):
    cdef Prog p = make_prog(code, consts, starts, depth)
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t nxs = xv.shape[0], nys = yv.shape[0], i, j, idx = 0
    prod_arr = np.full(nxs * nys, np.nan)
    nu_arr = np.full(nxs * nys, np.nan)
    nv_arr = np.full(nxs * nys, np.nan)
    valid_arr = np.zeros(nxs * nys, dtype=np.uint8)
    cdef double[::1] prod = prod_arr, nu = nu_arr, nv = nv_arr
    cdef unsigned char[::1] valid = valid_arr
    cdef double x, y, ux, uy, vx, vy
    cdef int st
    try:
        with nogil:
            for j in range(nys):
                y = yv[j]
                for i in range(nxs):
                    x = xv[i]
                    st = run(&p, 0, x, y, &ux)
                    if st == OK:
                        st = run(&p, 1, x, y, &uy)
                    if st == OK:
                        st = run(&p, 2, x, y, &vx)
                    if st == OK:
                        st = run(&p, 3, x, y, &vy)
                    if st != OK:
                        idx += 1
                        continue
                    nu[idx] = sqrt(ux * ux + uy * uy)
                    nv[idx] = sqrt(vx * vx + vy * vy)
                    if fabs(ux) >= eps and fabs(uy) >= eps and fabs(vx) >= eps and fabs(vy) >= eps:
                        prod[idx] = (-ux / uy) * (-vx / vy)
                        valid[idx] = 1
                    idx += 1
    finally:
        free(p.stack)
    return prod_arr, nu_arr, nv_arr, valid_arr
