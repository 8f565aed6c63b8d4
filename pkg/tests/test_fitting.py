import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isingser.errors import InsufficientOrder, NoPolynomialFit
from isingser.fitting import (
    Poly,
    collect_coefficients,
    fit_minimal_polynomial,
    fit_rational,
    format_poly,
    parse_poly,
    real_roots,
    stationary_analysis,
    verify_difference_identity,
    verify_integrality,
)

NS = range(1, 7)


def fit_family(family, j):
    return fit_minimal_polynomial(collect_coefficients(family, j, NS))


def test_collect_ht_row_second():
    assert collect_coefficients("ht_row", 2, NS) == [(n, n * (n + 1)) for n in NS]
    assert all(y == 1 for _, y in collect_coefficients("ht_row", 0, NS))


def test_collect_lt_conn_first():
    assert collect_coefficients("lt_conn", 1, NS) == [(1, 7), (2, 12), (3, 19), (4, 28), (5, 39), (6, 52)]


def test_collect_rejects_short_provider():
    from isingser.series import TruncatedSeries, Var

    with pytest.raises(InsufficientOrder):
        collect_coefficients("ht_row", 4, [1], provider=lambda n: TruncatedSeries.make(Var.v, [0, 1], 0, 3))
    with pytest.raises(ValueError):
        collect_coefficients("nope", 1, [1])


@pytest.mark.parametrize("family,j,text", [
    ("ht_row", 2, "n^2+n"),
    ("ht_row", 4, "(n^4+2n^3+3n^2+10n)/4"),
    ("ht_row_khat", 1, "n^2"),
    ("ht_row_khat", 2, "(n^4-2n^3-7n^2+8n)/4"),
    ("lt_conn", 1, "n^2+2n+4"),
    ("lt_conn", 2, "(n^4+4n^3+13n^2+26n+32)/2"),
    ("lt_conn_khat", 1, "n^2"),
    ("lt_conn_khat", 2, "(n^4-3n^2+8n+12)/2"),
    ("lt_ratio", 2, "(n^4+4n^3+13n^2+26n+40)/2"),
])
def test_general_n_formulas(family, j, text):
    fit = fit_family(family, j)
    assert fit.accepted
    assert fit.formula() == text
    assert fit.polynomial == parse_poly(text)


def test_factored_forms():
    r2 = fit_family("ht_row_khat", 2).polynomial
    assert r2 == parse_poly("n(n-1)(n^2-n-8)/4")
    rho2 = fit_family("lt_conn_khat", 2).polynomial
    assert rho2 == parse_poly("(n+2)(n^3-2n^2+n+6)/2")


def test_difference_identities():
    assert verify_difference_identity(fit_family("ht_row", 4), "(n+2)(n^2+n+2)")
    rho2 = fit_family("lt_conn", 2)
    assert verify_difference_identity(rho2, "(n+2)(2n^2+5n+11)")
    # the (n+1) prefactor contradicts rho_{1,2} = 38, rho_{2,2} = 92
    assert not verify_difference_identity(rho2, "(n+1)(2n^2+5n+11)")
    assert verify_difference_identity(Poly([0, 0, 1]), "2n+1")
    assert not verify_difference_identity(Poly([0, 0, 1]), "2n")


def test_integrality():
    assert verify_integrality(fit_family("ht_row", 2), 10 ** 4, require_even=True)
    assert verify_integrality(fit_family("ht_row", 4), 10 ** 4, require_even=True)
    assert verify_integrality(fit_family("lt_conn", 2), 10 ** 3)
    assert not verify_integrality(Poly([0, Fraction(1, 2)]), 3)


def test_stationary_report():
    rep = stationary_analysis(fit_family("ht_row_khat", 2))
    assert [round(r, 5) for r in rep.roots] == [1.0, round((1 + math.sqrt(33)) / 2, 5)]
    (n, value, kind), = rep.extrema
    assert kind == "minimum" and round(n, 5) == round((1 + math.sqrt(17)) / 2, 5) and round(value, 5) == -4
    p = fit_family("ht_row_khat", 2).polynomial
    assert p(2) == p(3) == -3
    assert stationary_analysis(Poly([1, 2])).extrema == []


def test_constant_and_random_data():
    fit = fit_minimal_polynomial([(1, 5), (2, 5), (3, 5)])
    assert fit.degree == 0 and fit.polynomial == Poly([5]) and fit.surplus_residuals == [0, 0]
    assert fit_minimal_polynomial([(1, 1), (2, 4), (3, 9), (4, 16)]).warnings
    rng = random.Random(7)
    cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)]
    p = Poly(cs)
    fit = fit_minimal_polynomial([(n, p(n)) for n in range(7)])
    assert fit.polynomial == p and fit.degree == 3 and fit.surplus_residuals == [0, 0, 0]


def test_no_fit_reports_residuals():
    with pytest.raises(NoPolynomialFit) as info:
        fit_minimal_polynomial([(n, 2 ** n) for n in range(1, 6)])
    assert info.value.residuals and all(r != 0 for r in info.value.residuals)


def test_rational_fit_for_diagonal_ratios():
    data = [(n, Fraction(n * (2 * n * n + 3 * n + 5), n + 1)) for n in range(1, 7)]
    with pytest.raises(NoPolynomialFit):
        fit_minimal_polynomial(data)
    fit = fit_rational(data, "n+1")
    assert fit.accepted and fit(2) == Fraction(38, 3)


def test_real_roots_exact_brackets():
    p = parse_poly("(n-1)(n-2)(n-3)")
    roots = real_roots(p, Fraction(0))
    assert [a for a, b in roots] == [1, 2, 3] or all(b - a < Fraction(1, 10 ** 9) for a, b in roots)


def test_poly_text():
    assert format_poly(parse_poly("n^2 + n")) == "n^2+n"
    assert parse_poly("2n(n+1)") == Poly([0, 2, 2])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5), st.permutations(range(8)))
def test_fit_is_permutation_invariant(cs, order):
    p = Poly(cs)
    pts = [(n, p(n)) for n in range(8)]
    shuffled = [pts[i] for i in order]
    assert fit_minimal_polynomial(shuffled).polynomial == fit_minimal_polynomial(pts).polynomial == p


def test_khat_formulas_follow_from_v_and_u_formulas():
    # v(w) = w - w^3 + 2w^5 + ... and u(khat) = khat - 2 khat^2 + 5 khat^3 + ...
    n = Poly.n()
    r2, r4 = fit_family("ht_row", 2).polynomial, fit_family("ht_row", 4).polynomial
    tilde2 = r4 - (n + 2) * r2 + 2 * n + n * (n - 1) / 2
    assert r2 - n == fit_family("ht_row_khat", 1).polynomial
    assert tilde2 == fit_family("ht_row_khat", 2).polynomial

    rho1, rho2 = fit_family("lt_conn", 1).polynomial, fit_family("lt_conn", 2).polynomial
    m = n + 2
    assert rho1 - 2 * m == fit_family("lt_conn_khat", 1).polynomial
    tilde_rho2 = rho2 - 2 * (m + 1) * rho1 + 5 * m + 2 * m * (m - 1)
    assert tilde_rho2 == fit_family("lt_conn_khat", 2).polynomial
