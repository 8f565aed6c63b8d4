"""Exact high- and low-temperature series for two-spin correlations of the square-lattice Ising model."""

from .errors import (
    InsufficientOrder,
    InvalidValuation,
    IrrationalLeadingScale,
    IsingSeriesError,
    NoPolynomialFit,
    NonIntegerExponent,
    NotAPolynomial,
    OrderTooSmall,
    OutOfRange,
    ResourceBudgetExceeded,
    UnknownLabel,
    VariableMismatch,
    WindowTooLarge,
    ZeroLeadingCoefficient,
)
from .series import TruncatedSeries, Var, compose, format_series, pow_rational, reciprocal, revert
from .ht import CorrelationId, HtWindow, ht_compute, ht_series, ht_series_bruteforce
from .lt import (
    CutPath,
    lt_compute,
    lt_series_bruteforce,
    lt_series_connected,
    lt_series_full,
    magnetization_squared,
    ratio_series,
)
from .transforms import from_khat_gt, from_khat_lt, to_khat_gt, to_khat_lt, v_z_dual
from .fitting import (
    fit_minimal_polynomial,
    fit_rational,
    stationary_analysis,
    verify_difference_identity,
    verify_integrality,
)
from .painleve import build_sigma, check_ratio_formulas, p6_residual, verify_p6
from .refdata import bn, critical_value, golden, numeric_from_series, pn, table_value

__version__ = "0.1.0"
