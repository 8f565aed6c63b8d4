import math
from fractions import Fraction

import pytest

from isingser.errors import NotAPolynomial, VariableMismatch
from isingser.ht import CorrelationId, ht_series
from isingser.lt import lt_series_connected, lt_series_full
from isingser.series import TruncatedSeries, Var, compose, derivative, revert
from isingser.transforms import (
    bracket,
    dual_point,
    from_khat_gt,
    from_khat_lt,
    half_powers,
    k_gt_of_v,
    k_lt_of_z,
    khat_of_u,
    t_of_x,
    to_kgt_hat,
    to_khat_gt,
    to_khat_lt,
    u_of_khat,
    v_of_k_gt,
    v_of_w,
    v_z_dual,
    w_of_v,
)

ROW = CorrelationId.row


def khat_bracket(n, through=8):
    w = to_khat_gt(ht_series(ROW(n), n + 2 * through))
    return [w[n + 2 * e] for e in range(through + 1)]


def test_r1_bracket_with_zero():
    assert khat_bracket(1) == [1, 1, 0, 5, -4, 44, -60, 469, -820]


def test_r4_bracket_with_zero():
    assert khat_bracket(4)[:6] == [1, 16, 12, 0, 201, -240]


def test_odd_powers_of_w_vanish_in_bracket():
    w = to_khat_gt(ht_series(ROW(3), 13))
    assert all((e - 3) % 2 == 0 for e, _ in w.terms())
    assert half_powers(w)[0] == (Fraction(3, 2), 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_bracket_general_terms(n):
    b = khat_bracket(n, 2)
    assert b[1] == n * n
    assert b[2] == Fraction(n * (n - 1) * (n * n - n - 8), 4)


def test_constant_series_unchanged():
    one = TruncatedSeries.one(Var.v, 6)
    assert to_khat_gt(one) == TruncatedSeries.one(Var.wgt, 6)
    assert to_khat_lt(TruncatedSeries.zero(Var.u, 5)).is_zero()


def test_lt_conn_r1():
    s = to_khat_lt(lt_series_connected(ROW(1), 10))
    assert [s[e] for e in range(3, 11)] == [4, 4, 36, 52, 384, 668, 4500, 8820]


def test_lt_full_r6():
    s = to_khat_lt(lt_series_full(ROW(6), 10))
    want = {0: 1, 2: -4, 4: -24, 6: -224, 8: -2460, 9: 144, 10: -27072}
    assert s == TruncatedSeries.from_dict(Var.klt_hat, want, 10)


@pytest.mark.parametrize("n", range(1, 7))
def test_klt_full_has_no_cubic_term(n):
    assert to_khat_lt(lt_series_full(ROW(n), 4))[3] == (4 if n == 1 else 0)


@pytest.mark.parametrize("n", range(1, 7))
def test_klt_connected_general_terms(n):
    b = bracket(to_khat_lt(lt_series_connected(ROW(n), n + 4)))
    assert b[1] == n * n
    assert b[2] == Fraction((n + 2) * (n ** 3 - 2 * n ** 2 + n + 6), 2)


def test_round_trips():
    s = ht_series(ROW(3), 15)
    assert from_khat_gt(to_khat_gt(s)) == s
    t = lt_series_full(ROW(2), 9)
    assert from_khat_lt(to_khat_lt(t)) == t


def test_substitution_series_invert():
    assert compose(w_of_v(9), v_of_w(9).with_var(Var.v)) == TruncatedSeries.identity(Var.v, 9)
    assert compose(khat_of_u(9), u_of_khat(9).with_var(Var.u)) == TruncatedSeries.identity(Var.u, 9)
    # u(khat) agrees with k_< = 4u/(1-u)^2 numerically
    kh = 0.05
    u = float(u_of_khat(20).evaluate(Fraction(kh)))
    assert math.isclose(4 * u / (1 - u) ** 2, 4 * kh, rel_tol=1e-12)


def test_variable_checks():
    with pytest.raises(VariableMismatch):
        to_khat_gt(TruncatedSeries.one(Var.u, 3))
    with pytest.raises(ValueError):
        to_kgt_hat(to_khat_gt(ht_series(ROW(1), 5)))


def test_t_of_x():
    t = t_of_x(4)
    assert t.min_exp == -2 and t[-2] == Fraction(1, 16)
    assert derivative(t)[-3] == Fraction(-1, 8)
    assert t.shift(2)[0] == Fraction(1, 16)


def test_duality_points():
    vc = math.sqrt(2) - 1
    assert math.isclose(dual_point(vc), vc)
    assert dual_point(Fraction(0)) == 1
    assert dual_point(dual_point(Fraction(1, 3))) == Fraction(1, 3)
    assert math.isclose(k_gt_of_v(vc), 1) and math.isclose(k_lt_of_z(vc), 1)


def test_v_z_dual_evaluates_polynomials():
    p = TruncatedSeries.make(Var.v, [1, 2, 3])
    assert v_z_dual(p, Fraction(1, 3)) == 1 + 2 * Fraction(1, 2) + 3 * Fraction(1, 4)
    with pytest.raises(NotAPolynomial):
        v_z_dual(TruncatedSeries.make(Var.v, [1], -1, 2), Fraction(1, 2))


def test_table_grid_v_and_z_columns():
    # printed v (and z) column of both tables: k(v) = (2v/(1-v^2))^2
    for k, v in [(0.1, 0.1543), (0.5, 0.3178), (0.9, 0.3989), (1.0, 0.4142)]:
        assert abs(v_of_k_gt(k) - v) < 1e-4


def test_reversion_cached_once():
    assert v_of_w(12) is v_of_w(12)
    assert revert(w_of_v(6).with_var(Var.wgt)) == v_of_w(6)
