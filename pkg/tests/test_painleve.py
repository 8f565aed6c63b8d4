from fractions import Fraction

import pytest

from isingser.errors import OrderTooSmall
from isingser.painleve import (
    build_sigma,
    central_binomial,
    check_ratio_formulas,
    dn_ht_series,
    dn_lt_series,
    p6_residual,
    sigma_from_d,
    t_series,
    verify_p6,
)
from isingser.series import TruncatedSeries, Var


@pytest.fixture(scope="module")
def diag():
    return {n: dn_ht_series(n, n + 5) for n in range(1, 5)}


def test_leading_coefficients(diag):
    for n, d in diag.items():
        assert d.valuation() == n and d.leading() == central_binomial(n)
    assert diag[1].leading() == 2 and diag[3].leading() == 20


def test_ratio_formulas(diag):
    rows = check_ratio_formulas(range(1, 5), 5, series=diag)
    assert len(rows) == 4 * 6 and all(r.ok for r in rows)
    pick = {(r.n, r.ell): r.measured for r in rows}
    assert pick[2, 2] == Fraction(38, 3)
    assert pick[1, 4] == 59
    with pytest.raises(ValueError):
        check_ratio_formulas([1], 6)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sigma_leading_terms(n):
    s = build_sigma(n, order=n + 4).series
    assert s.min_exp == -2
    assert s[-2] == Fraction(-(2 * n + 1), 64)


def test_sigma_ignores_normalization(diag):
    d = diag[2]
    assert sigma_from_d(d.scale(7), 2).series == sigma_from_d(d, 2).series


def test_t_series():
    t = t_series(Var.x, 3)
    assert [t[e] for e in range(-2, 3)] == [Fraction(1, 16), Fraction(-1, 4), Fraction(3, 8),
                                            Fraction(-1, 4), Fraction(1, 16)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_residual_vanishes(n):
    check = verify_p6(n, order=n + 8)
    assert check.ok and check.through >= 8


def test_long_residual_n1_n3():
    assert verify_p6(1, order=14).ok
    assert verify_p6(3, order=14).through >= 10


def test_plain_truncated_residual_is_zero():
    r = p6_residual(build_sigma(2, order=12))
    assert r.is_zero() and r.order >= 8


def test_reported_range():
    check = verify_p6(2, order=12)
    assert check.summary() == "residual: 0 (through x^10)"


def test_mutation_is_detected():
    d = dn_ht_series(2, 12)
    bad = d + TruncatedSeries.monomial(Var.x, 7, 1, d.order)
    check = verify_p6(2, d=bad)
    assert not check.ok
    assert check.summary().startswith("residual: nonzero at x^5")


def test_minus_branch():
    assert verify_p6(1, branch="minus", order=11).ok
    d = dn_lt_series(2, 9)
    assert d[0] == 1 and verify_p6(2, branch="minus", d=d).ok


def test_order_too_small():
    with pytest.raises(OrderTooSmall):
        verify_p6(3, order=6)
    with pytest.raises(OrderTooSmall):
        build_sigma(2, order=5)
    with pytest.raises(ValueError):
        sigma_from_d(dn_ht_series(1, 5), 1, branch="sideways")
