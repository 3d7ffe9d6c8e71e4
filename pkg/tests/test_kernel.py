import math

import numpy as np
import pytest

from exactharmonic import kernel
from exactharmonic.calculus import diff
from exactharmonic.expr import evaluate
from exactharmonic.parser import parse
from exactharmonic.program import compile_bundle
from exactharmonic.trajectories import orthogonality_audit, trace_level_curve, trace_orthogonal

BACKENDS = kernel.available_backends()
needs_compiled = pytest.mark.skipif("compiled" not in BACKENDS, reason="compiled kernel not built")

EXPRS = ["x^2 - y^2", "exp(x)*cos(y)", "ln(x^2 + y^2)", "(x^2 + 1)^-2*sin(3*x - y)", "-x^3 + 1/3*y", "x^-1"]


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("text", EXPRS)
def test_program_matches_tree_evaluation(backend, text):
    k = kernel.get_backend(backend)
    e = parse(text)
    b = compile_bundle([e])
    for p in [(0.5, 1.25), (-1.5, 0.75), (2.0, -0.3)]:
        status, val = k.eval_program(b.code, b.consts, b.starts, b.depth, 0, *p)
        assert status == kernel.OK
        assert val == pytest.approx(evaluate(e, p), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("backend", BACKENDS)
def test_program_errors(backend):
    k = kernel.get_backend(backend)
    b = compile_bundle([parse("ln(x)"), parse("x^-1"), parse("exp(x)")])
    assert k.eval_program(b.code, b.consts, b.starts, b.depth, 0, -1.0, 0.0)[0] == kernel.ERR_DOMAIN
    assert k.eval_program(b.code, b.consts, b.starts, b.depth, 1, 0.0, 0.0)[0] == kernel.ERR_DOMAIN
    assert k.eval_program(b.code, b.consts, b.starts, b.depth, 2, 1000.0, 0.0)[0] == kernel.ERR_RANGE


def test_backend_selection(monkeypatch):
    assert kernel.get_backend("python") is kernel._kernel_py
    with pytest.raises(ValueError):
        kernel.get_backend("fortran")
    monkeypatch.setenv("EXACTHARMONIC_PURE", "1")
    assert kernel.get_backend() is kernel._kernel_py


@needs_compiled
@pytest.mark.parametrize(
    "u,seed",
    [("x^2 + y^2", (1, 0)), ("x*y", (1, 1)), ("exp(x)*cos(y)", (0, 0.785)), ("x^3 - 3*x*y^2", (1, 0.5))],
)
def test_backends_bit_identical_traces(u, seed):
    e = parse(u)
    for fn in (trace_level_curve, trace_orthogonal):
        a = fn(e, seed, 0.01, 4000, box=(-3, 3, -3, 3), backend="compiled")
        b = fn(e, seed, 0.01, 4000, box=(-3, 3, -3, 3), backend="python")
        assert a.stop_reason == b.stop_reason
        assert a.points.tobytes() == b.points.tobytes()


@needs_compiled
def test_backends_identical_audit():
    u, v = parse("exp(x)*cos(y)"), parse("exp(x)*sin(y)")
    a = orthogonality_audit(u, v, (-1, 1, -1, 1, 15, 15), backend="compiled")
    b = orthogonality_audit(u, v, (-1, 1, -1, 1, 15, 15), backend="python")
    assert a == b


@pytest.mark.parametrize("backend", BACKENDS)
def test_trace_stops_on_domain_exit(backend):
    # ln(x) level curves are vertical lines; the gradient direction walks into x <= 0
    e = parse("ln(x)")
    pl = trace_orthogonal(e, (0.5, 0.0), 0.01, 10000, box=(-5, 5, -5, 5), backend=backend)
    pl_back = trace_orthogonal(e, (0.5, 0.0), 0.01, 10000, box=(-5, 5, -5, 5), backend=backend)
    assert pl.points.tobytes() == pl_back.points.tobytes()
    assert pl.stop_reason in ("left_box", "domain")


@pytest.mark.parametrize("backend", BACKENDS)
def test_stalled_or_degenerate_stop(backend):
    # gradient of x^2 + y^2 vanishes at the origin, which the gradient flow approaches backwards
    k = kernel.get_backend(backend)
    e = parse("x^2 + y^2")
    b = compile_bundle([diff(e, "x"), diff(e, "y")])
    pts, reason = k.trace(b.code, b.consts, b.starts, b.depth, 0.05, 0.0, 0.01, 1000, (-1, 1, -1, 1),
                          kernel.MODE_GRADIENT, 0.0, 1e-12, -1)
    assert kernel.STOP_NAMES[reason] in ("degenerate", "stalled", "closed", "max_points")
    assert np.all(np.isfinite(pts))
    assert math.hypot(*pts[-1]) < 0.05
