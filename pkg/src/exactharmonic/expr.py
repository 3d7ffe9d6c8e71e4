"""Immutable expression trees over x and y, canonical normalization, printing and evaluation.

Normal form
-----------
A normalized expression is a sum of monomials ``c * a1^k1 * ... * an^kn`` where
``c`` is a nonzero rational and each atom ``ai`` is ``x``, ``y``, a function
node with a normalized argument, or a multi-term sum raised to a negative
power.  Positive powers of sums are always expanded, products of ``exp``
factors are merged into a single ``exp``, and ``sin``/``cos`` arguments are
sign-canonicalized.  Laurent polynomials in x and y therefore have a unique
normal form; for everything else :func:`equivalent` falls back to sampling.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from .errors import DomainError

Number = Union[int, Fraction]


class Expr:
    """Base class of all expression nodes. Nodes are frozen dataclasses."""

    __slots__ = ()

    def __add__(self, other):
        return Sum((self, _lift(other)))

    def __radd__(self, other):
        return Sum((_lift(other), self))

    def __sub__(self, other):
        return Sum((self, Neg(_lift(other))))

    def __rsub__(self, other):
        return Sum((_lift(other), Neg(self)))

    def __mul__(self, other):
        return Product((self, _lift(other)))

    def __rmul__(self, other):
        return Product((_lift(other), self))

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer exponents are supported")
        return Power(self, n)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Constant(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __repr__(self):
        return f"Constant({self.value})"


@dataclass(frozen=True, repr=False)
class Variable(Expr):
    name: str

    def __post_init__(self):
        if self.name not in ("x", "y"):
            raise ValueError(f"unknown variable {self.name!r}")

    def __repr__(self):
        return f"Variable({self.name.upper()})"


@dataclass(frozen=True, repr=False)
class Sum(Expr):
    terms: tuple

    def __repr__(self):
        return f"Sum[{', '.join(map(repr, self.terms))}]"


@dataclass(frozen=True, repr=False)
class Product(Expr):
    factors: tuple

    def __repr__(self):
        return f"Product[{', '.join(map(repr, self.factors))}]"


@dataclass(frozen=True, repr=False)
class Power(Expr):
    base: Expr
    exponent: int

    def __repr__(self):
        return f"Power({self.base!r},{self.exponent})"


@dataclass(frozen=True, repr=False)
class Neg(Expr):
    inner: Expr

    def __repr__(self):
        return f"Neg({self.inner!r})"


@dataclass(frozen=True, repr=False)
class Sin(Expr):
    arg: Expr

    def __repr__(self):
        return f"Sin({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Cos(Expr):
    arg: Expr

    def __repr__(self):
        return f"Cos({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Exp(Expr):
    arg: Expr

    def __repr__(self):
        return f"Exp({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Ln(Expr):
    arg: Expr

    def __repr__(self):
        return f"Ln({self.arg!r})"


FUNCTIONS = {"sin": Sin, "cos": Cos, "exp": Exp, "ln": Ln}
_FUNC_NAMES = {cls: name for name, cls in FUNCTIONS.items()}

X = Variable("x")
Y = Variable("y")
ZERO = Constant(Fraction(0))
ONE = Constant(Fraction(1))


def _lift(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Constant(Fraction(v))
    raise TypeError(f"cannot use {type(v).__name__} in an expression")


def const(v: Number) -> Constant:
    return Constant(Fraction(v))


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y


# ---------------------------------------------------------------------------
# ordering

_RANK = {Constant: 0, Variable: 1, Exp: 2, Sin: 3, Cos: 4, Ln: 5, Sum: 6, Product: 7, Power: 8, Neg: 9}


@lru_cache(maxsize=None)
def sort_key(e: Expr) -> tuple:
    rank = _RANK[type(e)]
    if isinstance(e, Constant):
        return (rank, e.value)
    if isinstance(e, Variable):
        return (rank, e.name)
    if isinstance(e, (Sin, Cos, Exp, Ln)):
        return (rank, sort_key(e.arg))
    if isinstance(e, Sum):
        return (rank, tuple(sort_key(t) for t in e.terms))
    if isinstance(e, Product):
        return (rank, tuple(sort_key(f) for f in e.factors))
    if isinstance(e, Power):
        return (rank, sort_key(e.base), e.exponent)
    return (rank, sort_key(e.inner))


def _mono_key(mono: tuple) -> tuple:
    ex = ey = 0
    rest = []
    for atom, k in mono:
        if atom == X:
            ex = k
        elif atom == Y:
            ey = k
        else:
            rest.append((sort_key(atom), k))
    return (-(ex + ey), -ex, -ey, tuple(rest))


# ---------------------------------------------------------------------------
# polynomial view: dict[monomial, Fraction]; monomial = sorted tuple of (atom, exponent)


def _padd(p: dict, q: dict, scale: Fraction = Fraction(1)) -> dict:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _canon_mono(powers: dict) -> dict:
    """Turn an atom->exponent map into a polynomial, merging exp atoms and expanding sums."""
    powers = {a: k for a, k in powers.items() if k}
    exp_atoms = [a for a in powers if isinstance(a, Exp)]
    if len(exp_atoms) > 1 or any(powers[a] != 1 for a in exp_atoms):
        arg = normalize(Sum(tuple(Product((const(powers[a]), a.arg)) for a in exp_atoms)))
        for a in exp_atoms:
            del powers[a]
        if arg != ZERO:
            powers[Exp(arg)] = 1
    expand = [a for a in powers if isinstance(a, Sum) and powers[a] > 0]
    result = {tuple(sorted(((a, k) for a, k in powers.items() if a not in expand), key=lambda t: sort_key(t[0]))): Fraction(1)}
    for a in expand:
        result = _pmul(result, _ppow(_poly(a), powers[a]))
    return result


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            if not m1 or not m2:
                prod = {m1 or m2: Fraction(1)}
            else:
                merged = dict(m1)
                for a, k in m2:
                    merged[a] = merged.get(a, 0) + k
                prod = _canon_mono(merged)
            out = _padd(out, prod, c1 * c2)
    return out


def _ppow(p: dict, n: int) -> dict:
    result = {(): Fraction(1)}
    base = p
    while n:
        if n & 1:
            result = _pmul(result, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return result


def _atom(a: Expr) -> dict:
    return {((a, 1),): Fraction(1)}


def _leading(p: dict) -> tuple:
    m = min(p, key=_mono_key)
    return m, p[m]


@lru_cache(maxsize=65536)
def _poly(e: Expr) -> dict:
    if isinstance(e, Constant):
        return {(): e.value} if e.value else {}
    if isinstance(e, Variable):
        return _atom(e)
    if isinstance(e, Neg):
        return {m: -c for m, c in _poly(e.inner).items()}
    if isinstance(e, Sum):
        out: dict = {}
        for t in e.terms:
            out = _padd(out, _poly(t))
        return out
    if isinstance(e, Product):
        out = {(): Fraction(1)}
        for f in e.factors:
            out = _pmul(out, _poly(f))
            if not out:
                break
        return out
    if isinstance(e, Power):
        pb = _poly(e.base)
        n = e.exponent
        if n >= 0:
            return _ppow(pb, n)
        if not pb:
            raise DomainError("zero raised to a negative power")
        if len(pb) == 1:
            (mono, c), = pb.items()
            inv = _canon_mono({a: k * n for a, k in mono})
            return {m: v * c**n for m, v in inv.items()}
        _, lc = _leading(pb)
        monic = _from_poly({m: c / lc for m, c in pb.items()})
        return {((monic, n),): lc**n}
    if isinstance(e, (Sin, Cos)):
        arg = normalize(e.arg)
        pa = _poly(arg)
        if not pa:
            return {} if isinstance(e, Sin) else {(): Fraction(1)}
        _, lc = _leading(pa)
        if lc < 0:
            arg = _from_poly({m: -c for m, c in pa.items()})
            p = _atom(type(e)(arg))
            return {m: -c for m, c in p.items()} if isinstance(e, Sin) else p
        return _atom(type(e)(arg))
    if isinstance(e, Exp):
        arg = normalize(e.arg)
        return {(): Fraction(1)} if arg == ZERO else _atom(Exp(arg))
    if isinstance(e, Ln):
        arg = normalize(e.arg)
        if arg == ONE:
            return {}
        if arg == ZERO:
            raise DomainError("ln(0)")
        return _atom(Ln(arg))
    raise TypeError(f"not an expression: {e!r}")


def _from_poly(p: dict) -> Expr:
    terms = []
    for mono in sorted(p, key=_mono_key):
        c = p[mono]
        factors = tuple(a if k == 1 else Power(a, k) for a, k in mono)
        if not factors:
            terms.append(Constant(c))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else Product(factors))
        else:
            terms.append(Product((Constant(c),) + factors))
    if not terms:
        return ZERO
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


@lru_cache(maxsize=65536)
def normalize(e: Expr) -> Expr:
    """Return the canonical form of ``e`` (idempotent)."""
    return _from_poly(_poly(e))


def terms_of(e: Expr) -> list[tuple[Fraction, tuple]]:
    """Monomials of the normal form as ``(coefficient, ((atom, exponent), ...))``."""
    p = _poly(normalize(e))
    return [(p[m], m) for m in sorted(p, key=_mono_key)]


def from_terms(terms) -> Expr:
    p: dict = {}
    for c, mono in terms:
        p = _padd(p, _canon_mono(dict(mono)), Fraction(c))
    return _from_poly(p)


@lru_cache(maxsize=None)
def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Variable):
        return frozenset((e.name,))
    if isinstance(e, Constant):
        return frozenset()
    return frozenset().union(*(free_vars(c) for c in children(e)))


def children(e: Expr) -> tuple:
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Product):
        return e.factors
    if isinstance(e, Power):
        return (e.base,)
    if isinstance(e, Neg):
        return (e.inner,)
    if isinstance(e, (Sin, Cos, Exp, Ln)):
        return (e.arg,)
    return ()


def is_laurent_polynomial(e: Expr) -> bool:
    """True when the normal form only involves x and y (integer powers, possibly negative)."""
    return all(isinstance(a, Variable) for _, mono in terms_of(e) for a, _ in mono)


# ---------------------------------------------------------------------------
# printing

_P_SUM, _P_PROD, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def _fmt_const(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _is_negative(e: Expr) -> bool:
    if isinstance(e, Neg):
        return True
    if isinstance(e, Constant):
        return e.value < 0
    if isinstance(e, Product) and e.factors:
        return _is_negative(e.factors[0])
    return False


def _negated(e: Expr) -> Expr:
    if isinstance(e, Neg):
        return e.inner
    if isinstance(e, Constant):
        return Constant(-e.value)
    lead, rest = e.factors[0], e.factors[1:]
    lead = _negated(lead)
    if lead == ONE and rest:
        return rest[0] if len(rest) == 1 else Product(rest)
    return Product((lead,) + rest)


def _text(e: Expr) -> tuple[str, int]:
    if isinstance(e, Constant):
        s = _fmt_const(e.value)
        if e.value < 0:
            return s, _P_NEG
        return s, (_P_ATOM if e.value.denominator == 1 else _P_PROD)
    if isinstance(e, Variable):
        return e.name, _P_ATOM
    if isinstance(e, (Sin, Cos, Exp, Ln)):
        return f"{_FUNC_NAMES[type(e)]}({_text(e.arg)[0]})", _P_ATOM
    if isinstance(e, Power):
        s, p = _text(e.base)
        if p < _P_ATOM:
            s = f"({s})"
        return f"{s}^{e.exponent}", _P_POW
    if isinstance(e, Neg):
        s, p = _text(e.inner)
        if p < _P_PROD:
            s = f"({s})"
        return "-" + s, min(p, _P_NEG)
    if isinstance(e, Product):
        parts = []
        for i, f in enumerate(e.factors):
            s, p = _text(f)
            if i == 0 and isinstance(f, Constant):
                if f.value == -1 and len(e.factors) > 1:
                    parts.append("-")
                    continue
            elif p < _P_POW:
                s = f"({s})"
            parts.append(s)
        s = parts[0] + "*".join(parts[1:]) if parts[0] == "-" else "*".join(parts)
        return s, _P_PROD
    if isinstance(e, Sum):
        if not e.terms:
            return "0", _P_ATOM
        out = _text(e.terms[0])[0]
        for t in e.terms[1:]:
            if _is_negative(t):
                s, p = _text(_negated(t))
                out += " - " + (f"({s})" if p < _P_PROD else s)
            else:
                s, p = _text(t)
                out += " + " + (f"({s})" if p < _P_SUM + 1 and isinstance(t, Sum) else s)
        return out, _P_SUM
    raise TypeError(f"not an expression: {e!r}")


def to_text(e: Expr) -> str:
    """Infix text with explicit ``*`` and ``^``; re-parseable by :func:`exactharmonic.parser.parse`."""
    return _text(e)[0]


# ---------------------------------------------------------------------------
# evaluation


@lru_cache(maxsize=None)
def _exact_value(e: Expr):
    """Exact rational value of a variable- and function-free subtree, else None."""
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, (Variable, Sin, Cos, Exp, Ln)):
        return None
    vals = [_exact_value(c) for c in children(e)]
    if any(v is None for v in vals):
        return None
    if isinstance(e, Sum):
        return sum(vals, Fraction(0))
    if isinstance(e, Product):
        return math.prod(vals, start=Fraction(1))
    if isinstance(e, Neg):
        return -vals[0]
    base = vals[0]
    if base == 0 and e.exponent < 0:
        raise DomainError("zero raised to a negative power")
    return base**e.exponent


def evaluate(e: Expr, p) -> float:
    """Evaluate ``e`` at point ``p`` (a :class:`Point` or an ``(x, y)`` pair)."""
    x, y = p
    return _eval(e, float(x), float(y))


def _eval(e: Expr, x: float, y: float) -> float:
    exact = _exact_value(e)
    if exact is not None:
        return float(exact)
    if isinstance(e, Variable):
        return x if e.name == "x" else y
    if isinstance(e, Sum):
        return sum(_eval(t, x, y) for t in e.terms)
    if isinstance(e, Product):
        v = 1.0
        for f in e.factors:
            v *= _eval(f, x, y)
        return v
    if isinstance(e, Neg):
        return -_eval(e.inner, x, y)
    if isinstance(e, Power):
        b = _eval(e.base, x, y)
        if b == 0.0 and e.exponent < 0:
            raise DomainError(f"division by zero in {to_text(e)} at ({x}, {y})")
        return b**e.exponent
    a = _eval(e.arg, x, y)
    if isinstance(e, Sin):
        return math.sin(a)
    if isinstance(e, Cos):
        return math.cos(a)
    if isinstance(e, Exp):
        return math.exp(a)
    if a <= 0.0:
        raise DomainError(f"ln of non-positive value {a!r} at ({x}, {y})")
    return math.log(a)


# ---------------------------------------------------------------------------
# equivalence

SAMPLE_POINTS = 32
SAMPLE_TOL = 1e-9
_SAMPLE_ATTEMPTS = 4096
_SAMPLE_SEED = 20240917


@dataclass(frozen=True)
class Verdict:
    """Outcome of an equivalence test; truthy when the expressions agree."""

    value: bool
    method: str  # "symbolic" or "numeric"

    def __bool__(self) -> bool:
        return self.value


def equivalent(a: Expr, b: Expr) -> Verdict:
    diff = normalize(Sum((a, Neg(b))))
    if diff == ZERO:
        return Verdict(True, "symbolic")
    if is_laurent_polynomial(diff):
        return Verdict(False, "symbolic")
    return Verdict(_sample_equal(a, b), "numeric")


def _sample_equal(a: Expr, b: Expr) -> bool:
    rng = random.Random(_SAMPLE_SEED)
    used = 0
    for _ in range(_SAMPLE_ATTEMPTS):
        x, y = rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)
        try:
            va, vb = _eval(a, x, y), _eval(b, x, y)
        except (DomainError, OverflowError, ZeroDivisionError):
            continue
        if not (math.isfinite(va) and math.isfinite(vb)):
            continue
        if abs(va - vb) > SAMPLE_TOL * max(1.0, abs(va), abs(vb)):
            return False
        used += 1
        if used == SAMPLE_POINTS:
            break
    if used == 0:
        raise DomainError(f"no valid sample points for {to_text(a)} and {to_text(b)}")
    return True
