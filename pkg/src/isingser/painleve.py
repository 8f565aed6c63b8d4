"""Diagonal correlations and the sigma-form Painleve VI check.

With ``t = k^-2``, ``sigma_+ = t(t-1) dlog D/dt - t/4`` above the critical
temperature and ``sigma_- = t(t-1) dlog D/dt - 1/4`` below it.  Both should
satisfy

    [t(t-1) s'']^2 - n^2 [(t-1) s' - s]^2 + 4 s' [(t-1) s' - s - 1/4] (t s' - s) = 0.

Since ``t = (1 - y)^4 / (16 y^2)`` in both charts (``y = x = v^2`` above,
``y = u`` below), every ``t``-derivative is taken through ``y`` with the
chain rule and no series in ``t`` is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import ht, lt
from .errors import OrderTooSmall
from .series import TruncatedSeries, Var, derivative, log_derivative, reciprocal
from .transforms import x_series_from_v

BRANCHES = ("plus", "minus")


def _ratio_formula(ell: int, n: int) -> Fraction:
    n = Fraction(n)
    if ell == 0:
        return Fraction(1)
    if ell == 1:
        return 2 * n
    if ell == 2:
        return n * (2 * n ** 2 + 3 * n + 5) / (n + 1)
    if ell == 3:
        return 2 * n * (2 * n ** 3 + 5 * n ** 2 + 16 * n + 25) / (3 * (n + 1))
    if ell == 4:
        return (4 * n ** 6 + 24 * n ** 5 + 103 * n ** 4 + 372 * n ** 3 + 943 * n ** 2
                + 726 * n - 48) / (6 * (n + 1) * (n + 2))
    if ell == 5:
        return (4 * n ** 7 + 32 * n ** 6 + 183 * n ** 5 + 930 * n ** 4 + 4031 * n ** 3
                + 10228 * n ** 2 + 6972 * n - 960) / (15 * (n + 1) * (n + 2))
    raise ValueError("closed forms are available for ell <= 5")


def central_binomial(n: int) -> int:
    return math.comb(2 * n, n)


def dn_ht_series(n: int, order: int) -> TruncatedSeries:
    """High-temperature ``D_n`` as a series in ``x = v^2`` through ``x**order``."""
    if order < n:
        raise OrderTooSmall(f"order {order} is below the valuation {n}")
    return x_series_from_v(ht.ht_series(ht.CorrelationId.diagonal(n), 2 * order))


def dn_lt_series(n: int, order: int) -> TruncatedSeries:
    """Low-temperature ``D_n`` in ``u`` through ``u**order``."""
    return lt.lt_series_full(ht.CorrelationId.diagonal(n), order)


@dataclass
class RatioCheck:
    n: int
    ell: int
    measured: Fraction
    formula: Fraction

    @property
    def ok(self) -> bool:
        return self.measured == self.formula


def check_ratio_formulas(n_range, ell_max: int = 5, series=None) -> list:
    """Compare measured ``c_{n,n+l} / c_{n,n}`` with the closed forms."""
    if ell_max > 5:
        raise ValueError("ell_max must be at most 5")
    rows = []
    for n in n_range:
        d = series[n] if series else dn_ht_series(n, n + ell_max)
        lead = d[n]
        for ell in range(0, ell_max + 1):
            rows.append(RatioCheck(n, ell, d[n + ell] / lead, _ratio_formula(ell, n)))
    return rows


def t_series(var, order: int) -> TruncatedSeries:
    """``(1 - y)^4 / (16 y^2)`` in the variable ``var``."""
    terms = {k - 2: Fraction(math.comb(4, k) * (-1) ** k, 16) for k in range(5) if k - 2 <= order}
    return TruncatedSeries.from_dict(var, terms, order)


@dataclass
class SigmaSeries:
    n: int
    branch: str
    series: TruncatedSeries


def sigma_from_d(d: TruncatedSeries, n: int, branch: str = "plus") -> SigmaSeries:
    """Build sigma from a ``D_n`` series in ``x`` (plus) or ``u`` (minus)."""
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    t = t_series(d.var, d.order + 8)
    dt = derivative(t)
    body = t * (t - 1) * log_derivative(d) * reciprocal(dt)
    shift = t.scale(Fraction(1, 4)) if branch == "plus" else Fraction(1, 4)
    return SigmaSeries(n, branch, body - shift)


def build_sigma(n: int, branch: str = "plus", order: int | None = None) -> SigmaSeries:
    """Sigma from the oracle ``D_n`` known through ``order`` (default ``n + 10``)."""
    order = n + 10 if order is None else order
    if order < n + 4:
        raise OrderTooSmall("need D_n to order n + 4 at least for a nontrivial check")
    d = dn_ht_series(n, order) if branch == "plus" else dn_lt_series(n, order)
    return sigma_from_d(d, n, branch)


def p6_residual(sigma: SigmaSeries) -> TruncatedSeries:
    """Left side of the sigma-form equation; identically zero when it holds."""
    s = sigma.series
    t = t_series(s.var, s.order + 8)
    inv_dt = reciprocal(derivative(t))
    sp = derivative(s) * inv_dt
    spp = derivative(sp) * inv_dt
    a = t * (t - 1) * spp
    b = (t - 1) * sp - s
    c = t * sp - s
    n2 = sigma.n ** 2
    return a * a - (b * b).scale(n2) + (sp * (b - Fraction(1, 4)) * c).scale(4)


def _padded(d: TruncatedSeries, extra: int) -> TruncatedSeries:
    return TruncatedSeries.from_dict(d.var, dict(d.terms()), d.order + extra)


def residual_precision(d: TruncatedSeries, n: int, branch: str = "plus", probes: int = 4) -> int:
    """Highest residual power fixed by ``d`` (known through ``d.order``).

    Truncated arithmetic loses two powers to the degenerate leading
    structure of the equation.  Here every unknown coefficient of ``D_n``
    just past ``d.order`` is perturbed in turn and the lowest residual
    power that moves is recorded; everything below it is determined.  The
    answer is capped at ``d.order``.
    """
    pad = _padded(d, probes + 8)
    base = p6_residual(sigma_from_d(pad, n, branch))
    lowest = base.order + 1
    for m in range(d.order + 1, d.order + probes + 1):
        bumped = pad + TruncatedSeries.monomial(pad.var, m, 1, pad.order)
        delta = p6_residual(sigma_from_d(bumped, n, branch)) - base
        if not delta.is_zero():
            lowest = min(lowest, delta.valuation())
    return min(lowest - 1, d.order)


@dataclass
class P6Check:
    n: int
    branch: str
    order: int
    through: int
    residual: TruncatedSeries

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def summary(self) -> str:
        var = self.residual.var.value
        state = "0" if self.ok else f"nonzero at {var}^{self.residual.valuation()}"
        return f"residual: {state} (through {var}^{self.through})"


def verify_p6(n: int, branch: str = "plus", order: int | None = None,
              d: TruncatedSeries | None = None) -> P6Check:
    """Residual of the sigma-form equation over every power ``D_n`` determines."""
    order = n + 10 if order is None else order
    if order < n + 4:
        raise OrderTooSmall("need D_n to order n + 4 at least for a nontrivial check")
    if d is None:
        d = dn_ht_series(n, order) if branch == "plus" else dn_lt_series(n, order)
    through = residual_precision(d, n, branch)
    full = p6_residual(sigma_from_d(_padded(d, 12), n, branch))
    return P6Check(n, branch, d.order, through, full.truncate(through))
