import random

import pytest

from exactharmonic.calculus import diff, is_harmonic
from exactharmonic.errors import IntegrandDependsOnY, NotExact, NotHarmonicAdmissible, UnsupportedIntegral
from exactharmonic.exact import (
    DifferentialForm,
    admits_harmonic,
    analyze,
    check_cr,
    conjugate_form,
    conjugate_integrand,
    form_from_potential,
    harmonic_conjugate,
    integrand_y_independent,
    is_exact,
    solve_exact,
)
from exactharmonic.expr import ZERO, Neg, Sum, equivalent, normalize
from exactharmonic.parser import parse
from generators import random_harmonic, random_harmonic_polynomial, random_non_harmonic


def form(m, n):
    return DifferentialForm(parse(m), parse(n))


def same(a, b):
    return normalize(a) == normalize(parse(b))


def gradient_zero(e):
    return equivalent(diff(e, "x"), ZERO) and equivalent(diff(e, "y"), ZERO)


@pytest.mark.parametrize("m,n,exact,witness", [("2*x", "-2*y", True, "0"), ("y", "x", True, "0"), ("y", "-x", False, "2")])
def test_is_exact(m, n, exact, witness):
    rep = is_exact(form(m, n))
    assert rep.exact is exact
    assert same(rep.exactness_witness, witness)
    assert rep.harmonic_admissible is None


@pytest.mark.parametrize(
    "m,n,ok,witness",
    [
        ("2*x", "-2*y", True, "0"),
        ("2*x", "2*y", False, "4"),
        ("exp(x)*cos(y)", "-exp(x)*sin(y)", True, "0"),
    ],
)
def test_admits_harmonic(m, n, ok, witness):
    rep = admits_harmonic(form(m, n))
    assert rep.harmonic_admissible is ok
    assert same(rep.admissibility_witness, witness)


def test_exp_cos_admissibility_witness_by_hand():
    # M_x = e^x cos y, N_y = -e^x cos y
    f = form("exp(x)*cos(y)", "-exp(x)*sin(y)")
    assert same(diff(f.M, "x"), "exp(x)*cos(y)")
    assert same(diff(f.N, "y"), "-exp(x)*cos(y)")


def test_analyze_merges_both():
    rep = analyze(form("2*x", "2*y"))
    assert rep.exact is True and rep.harmonic_admissible is False


@pytest.mark.parametrize(
    "m,n,expected",
    [("2*x", "-2*y", "x^2 - y^2"), ("y", "x", "x*y"), ("exp(x)*cos(y)", "-exp(x)*sin(y)", "exp(x)*cos(y)")],
)
def test_solve_exact(m, n, expected):
    f = form(m, n)
    pot = solve_exact(f)
    assert same(pot.body, expected)
    assert pot.constant_label == "c"
    assert equivalent(diff(pot.body, "x"), f.M)
    assert equivalent(diff(pot.body, "y"), f.N)


def test_solve_exact_needs_y_only_remainder():
    # M has no y-part to reconstruct: f = x^2 + y^3
    pot = solve_exact(form("2*x", "3*y^2"))
    assert same(pot.body, "x^2 + y^3")


def test_solve_rejects_non_exact():
    with pytest.raises(NotExact) as info:
        solve_exact(form("y", "-x"))
    assert info.value.witness == "2"


def test_solve_unsupported_integral():
    with pytest.raises(UnsupportedIntegral):
        solve_exact(form("2*x*exp(x^2)", "0"))


@pytest.mark.parametrize(
    "m,n,expected",
    [
        ("2*x", "-2*y", "2*x*y"),
        ("exp(x)*cos(y)", "-exp(x)*sin(y)", "exp(x)*sin(y)"),
        ("y", "x", "1/2*y^2 - 1/2*x^2"),
    ],
)
def test_harmonic_conjugate(m, n, expected):
    f = form(m, n)
    g = harmonic_conjugate(f)
    assert same(g.body, expected)
    assert check_cr(solve_exact(f).body, g.body)


def test_conjugate_intermediate_quantities():
    # (y, x): A = int y dy = y^2/2, B = x + d/dx(y^2/2) = x
    f = form("y", "x")
    assert same(conjugate_integrand(f), "x")


def test_conjugate_refuses_non_admissible():
    with pytest.raises(NotHarmonicAdmissible):
        harmonic_conjugate(form("2*x", "2*y"))
    with pytest.raises(NotExact):
        harmonic_conjugate(form("y", "-x"))


def test_conjugate_guard_on_y_dependence(monkeypatch):
    # force the admissibility test to pass so the y-independence guard is reached
    import exactharmonic.exact as ex

    monkeypatch.setattr(ex, "admits_harmonic", lambda f: ex.FormReport(harmonic_admissible=True, admissibility_witness=ZERO))
    with pytest.raises(IntegrandDependsOnY):
        harmonic_conjugate(form("2*x", "2*y"))


@pytest.mark.parametrize("m,n,expected", [("2*x", "-2*y", True), ("2*x", "2*y", False), ("y", "x", True)])
def test_integrand_y_independent(m, n, expected):
    assert integrand_y_independent(form(m, n)) is expected


def test_integrand_depends_on_y_value():
    # 2y + d/dx(2xy) = 4y
    assert same(conjugate_integrand(form("2*x", "2*y")), "4*y")


def test_conjugate_form():
    out = conjugate_form(form("2*x", "-2*y"))
    assert same(out.M, "2*y") and same(out.N, "2*x")
    twice = conjugate_form(conjugate_form(form("2*x", "-2*y")))
    assert same(twice.M, "-2*x") and same(twice.N, "2*y")


def test_conjugate_form_of_xy_is_exact():
    f = form("y", "x")
    out = conjugate_form(f)
    assert same(out.M, "-x") and same(out.N, "y")
    assert is_exact(out).exact
    assert admits_harmonic(f).harmonic_admissible


@pytest.mark.parametrize("u,m,n", [("x^2 - y^2", "2*x", "-2*y"), ("x*y", "y", "x"), ("x^3 - 3*x*y^2", "3*x^2 - 3*y^2", "-6*x*y")])
def test_form_from_potential(u, m, n):
    f = form_from_potential(parse(u))
    assert same(f.M, m) and same(f.N, n)
    assert is_exact(f).exact
    assert admits_harmonic(f).harmonic_admissible


@pytest.mark.parametrize(
    "u,v,expected",
    [("x^2 - y^2", "2*x*y", True), ("exp(x)*cos(y)", "exp(x)*sin(y)", True), ("x", "x", False)],
)
def test_check_cr(u, v, expected):
    assert check_cr(parse(u), parse(v)) is expected


def _harmonic_corpus():
    rng = random.Random(5)
    return [random_harmonic(rng) for _ in range(25)]


def test_conjugate_satisfies_cauchy_riemann_on_corpus():
    for u in _harmonic_corpus():
        v = harmonic_conjugate(form_from_potential(u)).body
        assert check_cr(u, v)
        assert is_harmonic(v)


def test_conjugate_matches_imaginary_part_oracle():
    rng = random.Random(9)
    for _ in range(20):
        u, v_oracle = random_harmonic_polynomial(rng)
        v = harmonic_conjugate(form_from_potential(u)).body
        assert gradient_zero(Sum((v, Neg(v_oracle))))


def test_double_conjugation_gives_minus_u():
    for u in _harmonic_corpus():
        v = harmonic_conjugate(form_from_potential(u)).body
        w = harmonic_conjugate(form_from_potential(v)).body
        assert gradient_zero(Sum((w, u)))


def test_diagram_commutes():
    for u in _harmonic_corpus():
        f = form_from_potential(u)
        v = harmonic_conjugate(f).body
        left, right = conjugate_form(f), form_from_potential(v)
        assert equivalent(left.M, right.M) and equivalent(left.N, right.N)


def test_iff_and_y_independence_on_random_forms():
    rng = random.Random(13)
    for i in range(60):
        u = random_harmonic(rng) if i % 2 else random_non_harmonic(rng)
        f = form_from_potential(u)
        adm = admits_harmonic(f).harmonic_admissible
        assert adm is bool(i % 2)
        assert is_exact(conjugate_form(f)).exact is adm
        assert is_harmonic(solve_exact(f).body) is adm
        assert integrand_y_independent(f) is adm
        pot = solve_exact(f).body
        assert equivalent(diff(pot, "x"), f.M) and equivalent(diff(pot, "y"), f.N)
