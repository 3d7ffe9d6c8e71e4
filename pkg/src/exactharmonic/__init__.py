"""Exact differential forms, harmonic functions and their conjugates.

Symbolic core: :mod:`~exactharmonic.expr` (trees, normal form), :mod:`~exactharmonic.parser`,
:mod:`~exactharmonic.calculus`, :mod:`~exactharmonic.exact`.  Numeric tracing and
orthogonality audits live in :mod:`~exactharmonic.trajectories`, backed by a compiled
kernel when available (see :mod:`~exactharmonic.kernel`).
"""

from .calculus import AntiderivativeResult, antiderivative, diff, is_harmonic, laplacian
from .errors import (
    DegeneratePoint,
    DegenerateSeed,
    DomainError,
    ExactHarmonicError,
    ExprSyntaxError,
    IntegrandDependsOnY,
    NotExact,
    NotHarmonicAdmissible,
    UnsupportedConstruct,
    UnsupportedIntegral,
)
from .exact import (
    DifferentialForm,
    FormReport,
    Potential,
    admits_harmonic,
    analyze,
    check_cr,
    conjugate_form,
    form_from_potential,
    harmonic_conjugate,
    integrand_y_independent,
    is_exact,
    solve_exact,
)
from .expr import X, Y, Expr, Point, equivalent, evaluate, normalize, to_text
from .parser import parse
from .trajectories import (
    OrthogonalityAudit,
    Polyline,
    orthogonal_form,
    orthogonality_audit,
    slope_product,
    trace_form,
    trace_level_curve,
    trace_orthogonal,
)

eval = evaluate  # noqa: A001

__version__ = "0.1.0"
