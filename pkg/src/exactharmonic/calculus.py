"""Partial derivatives, partial antiderivatives, Laplacian and harmonicity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import UnsupportedIntegral
from .expr import (
    ONE,
    ZERO,
    Constant,
    Cos,
    Exp,
    Expr,
    Ln,
    Neg,
    Power,
    Product,
    Sin,
    Sum,
    Variable,
    const,
    equivalent,
    free_vars,
    from_terms,
    normalize,
    terms_of,
    to_text,
)


def _var(var) -> Variable:
    if isinstance(var, Variable):
        return var
    return Variable(str(var).lower())


def diff(e: Expr, var) -> Expr:
    """Normalized partial derivative of ``e`` with respect to ``var`` (``X``/``Y`` or ``"x"``/``"y"``)."""
    return _diff(normalize(e), _var(var))


@lru_cache(maxsize=65536)
def _diff(e: Expr, v: Variable) -> Expr:
    return normalize(_d(e, v))


def _d(e: Expr, v: Variable) -> Expr:
    if v.name not in free_vars(e):
        return ZERO
    if isinstance(e, Variable):
        return ONE
    if isinstance(e, Sum):
        return Sum(tuple(_d(t, v) for t in e.terms))
    if isinstance(e, Product):
        fs = e.factors
        return Sum(tuple(Product(fs[:i] + (_d(f, v),) + fs[i + 1 :]) for i, f in enumerate(fs)))
    if isinstance(e, Power):
        n = e.exponent
        return Product((const(n), Power(e.base, n - 1), _d(e.base, v)))
    if isinstance(e, Neg):
        return Neg(_d(e.inner, v))
    da = _d(e.arg, v)
    if isinstance(e, Sin):
        return Product((Cos(e.arg), da))
    if isinstance(e, Cos):
        return Neg(Product((Sin(e.arg), da)))
    if isinstance(e, Exp):
        return Product((e, da))
    if isinstance(e, Ln):
        return Product((Power(e.arg, -1), da))
    raise TypeError(f"not an expression: {e!r}")


@dataclass(frozen=True)
class AntiderivativeResult:
    result: Expr
    variable: Variable


def antiderivative(e: Expr, var) -> AntiderivativeResult:
    """Partial antiderivative treating the other variable as a constant; no constant of integration.

    Supported terms are ``c * w * v^m * T`` where ``w`` is free of ``v`` and
    ``T`` is 1, ``sin(L)``, ``cos(L)`` or ``exp(L)`` with ``L = a*v + (v-free)``.
    ``v^-1`` integrates to ``ln(v)``.
    """
    v = _var(var)
    return AntiderivativeResult(_antiderivative(normalize(e), v), v)


@lru_cache(maxsize=16384)
def _antiderivative(e: Expr, v: Variable) -> Expr:
    pieces = []
    for c, mono in terms_of(e):
        outside = tuple((a, k) for a, k in mono if v.name not in free_vars(a))
        m = sum(k for a, k in mono if a == v)
        inside = [(a, k) for a, k in mono if a != v and v.name in free_vars(a)]
        if not inside:
            body = Ln(v) if m == -1 else Product((Constant(Fraction(1, m + 1)), Power(v, m + 1)))
        elif len(inside) == 1 and inside[0][1] == 1 and isinstance(inside[0][0], (Sin, Cos, Exp)) and m >= 0:
            atom = inside[0][0]
            slope = _linear_coefficient(atom.arg, v)
            if slope is None:
                raise UnsupportedIntegral(to_text(from_terms([(c, mono)])), v.name)
            body = _poly_times_transcendental(m, atom, slope, v)
        else:
            raise UnsupportedIntegral(to_text(from_terms([(c, mono)])), v.name)
        pieces.append(Product((Constant(c), from_terms([(1, outside)]), body)))
    return normalize(Sum(tuple(pieces)))


def _linear_coefficient(arg: Expr, v: Variable) -> Fraction | None:
    """Rational ``a`` if ``arg = a*v + (v-free part)`` with ``a != 0``, else None."""
    a = None
    for c, mono in terms_of(arg):
        if not any(v.name in free_vars(atom) for atom, _ in mono):
            continue
        if mono != ((v, 1),) or a is not None:
            return None
        a = c
    return a


def _poly_times_transcendental(m: int, atom: Expr, a: Fraction, v: Variable) -> Expr:
    """Antiderivative of ``v^m * atom`` where atom is sin/cos/exp of a linear argument with slope ``a``."""
    if isinstance(atom, Exp):
        # sum_k (-1)^k m!/(m-k)! v^(m-k) / a^(k+1)
        terms = tuple(
            Product((Constant(Fraction((-1) ** k * factorial(m), factorial(m - k)) / a ** (k + 1)), Power(v, m - k)))
            for k in range(m + 1)
        )
        return Product((Sum(terms), atom))
    return _trig_by_parts(m, isinstance(atom, Sin), atom.arg, a, v)


def _trig_by_parts(m: int, is_sin: bool, arg: Expr, a: Fraction, v: Variable) -> Expr:
    # int v^m sin = -v^m cos/a + (m/a) int v^(m-1) cos
    # int v^m cos =  v^m sin/a - (m/a) int v^(m-1) sin
    lead = Product((Constant(1 / a), Power(v, m), Cos(arg) if is_sin else Sin(arg)))
    if is_sin:
        lead = Neg(lead)
    if m == 0:
        return lead
    rest = Product((Constant(Fraction(m) / a), _trig_by_parts(m - 1, not is_sin, arg, a, v)))
    return Sum((lead, rest if is_sin else Neg(rest)))


def laplacian(e: Expr) -> Expr:
    return normalize(Sum((diff(diff(e, "x"), "x"), diff(diff(e, "y"), "y"))))


def is_harmonic(e: Expr) -> bool:
    return bool(equivalent(laplacian(e), ZERO))
