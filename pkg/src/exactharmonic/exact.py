"""Exact differential forms ``M dx + N dy = 0`` and their harmonic conjugates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .calculus import antiderivative, diff
from .errors import IntegrandDependsOnY, NotExact, NotHarmonicAdmissible
from .expr import ZERO, Expr, Neg, Sum, equivalent, normalize, to_text


@dataclass(frozen=True)
class DifferentialForm:
    """``M dx + N dy = 0``; both components are stored normalized."""

    M: Expr
    N: Expr

    def __post_init__(self):
        object.__setattr__(self, "M", normalize(self.M))
        object.__setattr__(self, "N", normalize(self.N))

    def __str__(self) -> str:
        return f"({to_text(self.M)}) dx + ({to_text(self.N)}) dy = 0"


@dataclass(frozen=True)
class Potential:
    """The level family ``body = constant_label``."""

    body: Expr
    constant_label: str = "c"

    def __post_init__(self):
        object.__setattr__(self, "body", normalize(self.body))

    def __str__(self) -> str:
        return f"{to_text(self.body)} = {self.constant_label}"


@dataclass(frozen=True)
class FormReport:
    """Diagnostics for a form. Fields not computed by the producing call are None."""

    exact: Optional[bool] = None
    exactness_witness: Optional[Expr] = None
    harmonic_admissible: Optional[bool] = None
    admissibility_witness: Optional[Expr] = None
    notes: tuple = field(default=())

    def merge(self, other: "FormReport") -> "FormReport":
        return FormReport(
            exact=self.exact if self.exact is not None else other.exact,
            exactness_witness=self.exactness_witness if self.exactness_witness is not None else other.exactness_witness,
            harmonic_admissible=(
                self.harmonic_admissible if self.harmonic_admissible is not None else other.harmonic_admissible
            ),
            admissibility_witness=(
                self.admissibility_witness if self.admissibility_witness is not None else other.admissibility_witness
            ),
            notes=self.notes + other.notes,
        )


def is_exact(form: DifferentialForm) -> FormReport:
    m_y, n_x = diff(form.M, "y"), diff(form.N, "x")
    return FormReport(exact=bool(equivalent(m_y, n_x)), exactness_witness=normalize(Sum((m_y, Neg(n_x)))))


def admits_harmonic(form: DifferentialForm) -> FormReport:
    witness = normalize(Sum((diff(form.M, "x"), diff(form.N, "y"))))
    return FormReport(harmonic_admissible=bool(equivalent(witness, ZERO)), admissibility_witness=witness)


def analyze(form: DifferentialForm) -> FormReport:
    """Both exactness and harmonic-admissibility diagnostics."""
    return is_exact(form).merge(admits_harmonic(form))


def _require_exact(form: DifferentialForm) -> None:
    rep = is_exact(form)
    if not rep.exact:
        raise NotExact(to_text(rep.exactness_witness))


def solve_exact(form: DifferentialForm, constant_label: str = "c") -> Potential:
    """Potential ``f`` with ``f_x = M`` and ``f_y = N``.

    ``f = int M dx + int [N - d/dy int M dx] dy``; the bracket is free of x
    because the form is exact.
    """
    _require_exact(form)
    along_x = antiderivative(form.M, "x").result
    remainder = normalize(Sum((form.N, Neg(diff(along_x, "y")))))
    along_y = antiderivative(remainder, "y").result
    return Potential(Sum((along_x, along_y)), constant_label)


def conjugate_integrand(form: DifferentialForm) -> Expr:
    """``N + d/dx int M dy``, the quantity integrated in x by :func:`harmonic_conjugate`."""
    a = antiderivative(form.M, "y").result
    return normalize(Sum((form.N, diff(a, "x"))))


def integrand_y_independent(form: DifferentialForm) -> bool:
    return bool(equivalent(diff(conjugate_integrand(form), "y"), ZERO))


def harmonic_conjugate(form: DifferentialForm, constant_label: str = "c") -> Potential:
    """Harmonic conjugate ``g = int M dy - int [N + d/dx int M dy] dx`` of the form's solution."""
    _require_exact(form)
    adm = admits_harmonic(form)
    if not adm.harmonic_admissible:
        raise NotHarmonicAdmissible(to_text(adm.admissibility_witness))
    a = antiderivative(form.M, "y").result
    b = normalize(Sum((form.N, diff(a, "x"))))
    if not equivalent(diff(b, "y"), ZERO):
        raise IntegrandDependsOnY(to_text(b))
    return Potential(Sum((a, Neg(antiderivative(b, "x").result))), constant_label)


def conjugate_form(form: DifferentialForm) -> DifferentialForm:
    """``-N dx + M dy = 0``; exact exactly when the input admits a harmonic solution."""
    return DifferentialForm(Neg(form.N), form.M)


def form_from_potential(u: Expr) -> DifferentialForm:
    """The total differential ``u_x dx + u_y dy = 0``."""
    return DifferentialForm(diff(u, "x"), diff(u, "y"))


def check_cr(u: Expr, v: Expr) -> bool:
    """Cauchy-Riemann: ``u_x = v_y`` and ``u_y = -v_x``."""
    return bool(equivalent(diff(u, "x"), diff(v, "y"))) and bool(
        equivalent(diff(u, "y"), Neg(diff(v, "x")))
    )
