"""Exact changes of expansion variable.

Relations used::

    z = exp(-2K),  u = z**2,  v = tanh K = (1 - z) / (1 + z)
    k_> = (2v / (1 - v**2))**2,   khat_> = k_> / 4,   w = sqrt(khat_>) = v / (1 - v**2)
    k_< = 4u / (1 - u)**2,        khat_< = k_< / 4 = u / (1 - u)**2
    x = v**2,                     t = k_>**-2 = (1 - x)**4 / (16 x**2)

Odd-n high-temperature series carry half-integer powers of ``khat_>``; they
are kept as integer powers of ``w`` (tag ``wgt``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidValuation, NotAPolynomial, VariableMismatch
from .series import TruncatedSeries, Var, compose, revert

KHAT_GT_OF_V = "w = v/(1-v^2)"
KHAT_LT_OF_U = "khat = u/(1-u)^2"


def _geometric_in_square(var, order):
    # var / (1 - var**2)
    return TruncatedSeries.from_dict(var, {e: 1 for e in range(1, order + 1, 2)}, order)


def _u_over_one_minus_u_squared(var, order):
    # var / (1 - var)**2 = sum k var**k
    return TruncatedSeries.from_dict(var, {e: e for e in range(1, order + 1)}, order)


@lru_cache(maxsize=None)
def w_of_v(order: int) -> TruncatedSeries:
    """``w(v) = v / (1 - v^2)`` tagged ``v``."""
    return _geometric_in_square(Var.v, order)


@lru_cache(maxsize=None)
def v_of_w(order: int) -> TruncatedSeries:
    """Inverse of ``w(v)``, tagged ``wgt``; built once per order by reversion."""
    return revert(_geometric_in_square(Var.wgt, order))


@lru_cache(maxsize=None)
def khat_of_u(order: int) -> TruncatedSeries:
    return _u_over_one_minus_u_squared(Var.u, order)


@lru_cache(maxsize=None)
def u_of_khat(order: int) -> TruncatedSeries:
    return revert(_u_over_one_minus_u_squared(Var.klt_hat, order))


def _require(s: TruncatedSeries, var: Var):
    if s.var != var:
        raise VariableMismatch(f"expected a series in {var.value}, got {s.var.value}")
    if not s.is_zero() and s.min_exp < 0:
        raise InvalidValuation("substitution needs a power series (min_exp >= 0)")


def _substitute(s: TruncatedSeries, inner_for_order, target: Var) -> TruncatedSeries:
    if s.is_zero():
        return TruncatedSeries.zero(target, s.order)
    return compose(s, inner_for_order(max(s.order, 1)))


def to_khat_gt(s: TruncatedSeries) -> TruncatedSeries:
    """Re-expand a ``v``-series in ``w = sqrt(khat_>)``."""
    _require(s, Var.v)
    return _substitute(s, v_of_w, Var.wgt)


def from_khat_gt(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse of ``to_khat_gt``."""
    _require(s, Var.wgt)
    return _substitute(s, w_of_v, Var.v)


def to_khat_lt(s: TruncatedSeries) -> TruncatedSeries:
    """Re-expand a ``u``-series in ``khat_<``."""
    _require(s, Var.u)
    return _substitute(s, u_of_khat, Var.klt_hat)


def from_khat_lt(s: TruncatedSeries) -> TruncatedSeries:
    _require(s, Var.klt_hat)
    return _substitute(s, khat_of_u, Var.u)


def half_powers(s: TruncatedSeries):
    """``[(Fraction(p, 2), c), ...]`` for a ``wgt`` series, i.e. powers of ``khat_>``."""
    if s.var not in (Var.wgt, Var.wlt):
        raise VariableMismatch("half powers are defined for square-root tags only")
    return [(Fraction(e, 2), c) for e, c in s.terms()]


def bracket(s: TruncatedSeries, step: int = 1) -> list:
    """Coefficients of ``s / (c var**val)`` at ``var**0, var**step, ...``."""
    lead = s.leading()
    val = s.min_exp
    return [s[e] / lead for e in range(val, s.order + 1, step)]


def to_kgt_hat(s: TruncatedSeries) -> TruncatedSeries:
    """``wgt`` series with only even powers as a series in ``khat_>``."""
    if s.var != Var.wgt:
        raise VariableMismatch("expected a wgt series")
    if any(e % 2 for e, _ in s.terms()):
        raise ValueError("odd powers of w present; keep the series in w")
    return TruncatedSeries.from_dict(Var.kgt_hat, {e // 2: c for e, c in s.terms()}, s.order // 2)


def t_of_x(order: int) -> TruncatedSeries:
    """``t = (1 - x)^4 / (16 x^2)`` as a Laurent series in ``x`` through ``x**order``."""
    if order < -2:
        raise ValueError("order must be at least -2")
    terms = {k - 2: Fraction(math.comb(4, k) * (-1) ** k, 16) for k in range(5) if k - 2 <= order}
    return TruncatedSeries.from_dict(Var.x, terms, order)


def x_series_from_v(s: TruncatedSeries) -> TruncatedSeries:
    """Re-index an even ``v``-series by ``x = v^2``."""
    if s.var != Var.v:
        raise VariableMismatch("expected a v series")
    if any(e % 2 for e, _ in s.terms()):
        raise ValueError("odd powers of v present")
    return TruncatedSeries.from_dict(Var.x, {e // 2: c for e, c in s.terms()}, s.order // 2)


# evaluation-level duality


def dual_point(value):
    """``(1 - value) / (1 + value)``: maps ``v`` to ``z`` and back (an involution)."""
    return (1 - value) / (1 + value)


def v_z_dual(s: TruncatedSeries, point):
    """Evaluate the polynomial part of ``s`` at the dual of ``point``.

    The duality moves the expansion point (``v = 0`` goes to ``z = 1``), so
    it is only meaningful for finite polynomials evaluated at numbers.
    """
    if s.var not in (Var.v, Var.z):
        raise VariableMismatch("duality relates v and z")
    if not s.is_zero() and s.min_exp < 0:
        raise NotAPolynomial("negative powers have no value at the dual point v=0 or z=0")
    return s.evaluate(dual_point(point))


def k_gt_of_v(v):
    return (2 * v / (1 - v * v)) ** 2


def k_lt_of_z(z):
    return (2 * z / (1 - z * z)) ** 2


def k_lt_of_u(u):
    return 4 * u / (1 - u) ** 2


def v_of_k_gt(k: float) -> float:
    """Positive root of ``(2v/(1-v^2))^2 = k``."""
    s = math.sqrt(k)
    return (math.sqrt(1 + s * s) - 1) / s if s else 0.0


z_of_k_lt = v_of_k_gt
