"""Truncated Laurent series over the rationals in a single tagged variable."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    InvalidValuation,
    IrrationalLeadingScale,
    NonIntegerExponent,
    VariableMismatch,
    ZeroLeadingCoefficient,
)


class Var(str, enum.Enum):
    """Expansion variable of a series."""

    v = "v"
    z = "z"
    x = "x"
    u = "u"
    kgt_hat = "kgt_hat"
    klt_hat = "klt_hat"
    wgt = "wgt"
    wlt = "wlt"
    t = "t"
    generic = "generic"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not accepted")
    return Fraction(c)


@dataclass(frozen=True)
class TruncatedSeries:
    """``sum(coeffs[i] * var**(min_exp + i)) + O(var**(order + 1))``.

    Instances are normalized: the coefficient at ``min_exp`` is nonzero,
    or the series is zero to its order, in which case ``coeffs`` is empty
    and ``min_exp == order + 1``.
    """

    var: Var
    min_exp: int
    order: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.order - self.min_exp + 1:
            raise ValueError("coefficient count does not match min_exp..order")

    # construction

    @classmethod
    def make(cls, var, coeffs: Iterable, min_exp: int = 0, order: int | None = None):
        """Build a series from coefficients starting at ``min_exp``.

        Without ``order`` the last supplied coefficient fixes the order.
        Missing coefficients up to ``order`` are zero; surplus ones are dropped.
        """
        cs = [_as_fraction(c) for c in coeffs]
        if order is None:
            order = min_exp + len(cs) - 1
        want = order - min_exp + 1
        if want < 0:
            return cls._normalized(Var(var), order + 1, order, [])
        cs = cs[:want] + [Fraction(0)] * (want - len(cs))
        return cls._normalized(Var(var), min_exp, order, cs)

    @classmethod
    def _normalized(cls, var, min_exp, order, cs):
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        return cls(var, min_exp + i, order, tuple(cs[i:]))

    @classmethod
    def zero(cls, var, order):
        return cls(Var(var), order + 1, order, ())

    @classmethod
    def one(cls, var, order):
        return cls.monomial(var, 0, 1, order)

    @classmethod
    def monomial(cls, var, exp, coeff, order):
        if exp > order:
            return cls.zero(var, order)
        return cls.make(var, [coeff], exp, order)

    @classmethod
    def identity(cls, var, order):
        return cls.monomial(var, 1, 1, order)

    @classmethod
    def from_dict(cls, var, terms: dict, order: int):
        """Series from ``{exponent: coefficient}``."""
        if not terms:
            return cls.zero(var, order)
        lo = min(min(terms), order + 1)
        cs = [terms.get(e, 0) for e in range(lo, order + 1)]
        return cls.make(var, cs, lo, order)

    # access

    def __getitem__(self, exp: int) -> Fraction:
        if exp > self.order:
            raise IndexError(f"coefficient of {self.var.value}^{exp} beyond order {self.order}")
        if exp < self.min_exp:
            return Fraction(0)
        return self.coeffs[exp - self.min_exp]

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        return self.min_exp

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroLeadingCoefficient("series is zero to its order")
        return self.coeffs[0]

    def terms(self):
        """Nonzero ``(exponent, coefficient)`` pairs."""
        return [(self.min_exp + i, c) for i, c in enumerate(self.coeffs) if c != 0]

    def dense(self, start: int) -> list:
        """Coefficients from ``start`` through ``order``."""
        return [self[e] for e in range(start, self.order + 1)]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("truncate cannot raise the order")
        return TruncatedSeries.from_dict(self.var, dict(self.terms()), order)

    def with_var(self, var) -> "TruncatedSeries":
        return TruncatedSeries(Var(var), self.min_exp, self.order, self.coeffs)

    def evaluate(self, point):
        """Value of the known part at ``point`` (exact for Fraction input)."""
        acc = 0
        for e, c in reversed(self.terms()):
            acc = acc + c * point ** e if e >= 0 else acc + c / point ** (-e)
        return acc

    # arithmetic

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.var != self.var:
            raise VariableMismatch(f"{self.var.value} vs {other.var.value}")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries.monomial(self.var, 0, other, self.order)
        self._check(other)
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp, order + 1)
        cs = [self[e] + other[e] for e in range(lo, order + 1)]
        return TruncatedSeries._normalized(self.var, lo, order, cs)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.var, self.min_exp, self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = _as_fraction(c)
        if c == 0:
            return TruncatedSeries.zero(self.var, self.order)
        return TruncatedSeries(self.var, self.min_exp, self.order, tuple(c * a for a in self.coeffs))

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``var**k`` (exact, order moves with it)."""
        return TruncatedSeries(self.var, self.min_exp + k, self.order + k, self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return TruncatedSeries.zero(self.var, _zero_product_order(self, other))
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        lo = self.min_exp + other.min_exp
        n = order - lo + 1
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(min(len(a), n)):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(min(len(b), n - i)):
                out[i + j] += ai * b[j]
        return TruncatedSeries._normalized(self.var, lo, order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * reciprocal(other)
        return self.scale(1 / _as_fraction(other))

    def __pow__(self, k):
        return pow_rational(self, k)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.var, self.min_exp, self.order, self.coeffs) == (
            other.var, other.min_exp, other.order, other.coeffs)

    def __hash__(self):
        return hash((self.var, self.min_exp, self.order, self.coeffs))

    def agrees_with(self, other, through: int | None = None) -> bool:
        """Coefficientwise equality through the common (or given) order."""
        self._check(other)
        top = min(self.order, other.order) if through is None else through
        lo = min(self.min_exp, other.min_exp)
        return all(self[e] == other[e] for e in range(lo, top + 1))

    # text and JSON

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"TruncatedSeries({format_series(self)})"

    def to_json_obj(self) -> dict:
        return {
            "var": self.var.value,
            "min_exp": self.min_exp,
            "order": self.order,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TruncatedSeries":
        cs = [Fraction(int(p), int(q)) for p, q in obj["coeffs"]]
        return cls.make(obj["var"], cs, int(obj["min_exp"]), int(obj["order"]))

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        return cls.from_json_obj(json.loads(text))


def _zero_product_order(a, b):
    # a zero factor is O(var**(order+1)); treat it as having that valuation
    va = a.min_exp if not a.is_zero() else a.order + 1
    vb = b.min_exp if not b.is_zero() else b.order + 1
    return min(a.order + vb, b.order + va)


def format_series(s: TruncatedSeries, name: str | None = None) -> str:
    name = name or s.var.value
    parts = []
    for e, c in s.terms():
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = name if e == 1 else f"{name}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    text = ""
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            text = body if sign == "+" else f"-{body}"
        else:
            text += f" {sign} {body}"
    tail = f"O({name}^{s.order + 1})"
    return f"{text} + {tail}" if text else tail


# ring operations as functions


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; valuation and order flip as for ``c x^e (1+h)``."""
    if a.is_zero():
        raise ZeroLeadingCoefficient("cannot invert a series that is zero to its order")
    e = a.min_exp
    rel = a.order - e
    c = a.coeffs
    inv0 = 1 / c[0]
    out = [inv0]
    for k in range(1, rel + 1):
        acc = Fraction(0)
        for j in range(1, min(k, len(c) - 1) + 1):
            acc += c[j] * out[k - j]
        out.append(-acc * inv0)
    return TruncatedSeries._normalized(a.var, -e, -e + rel, out)


def _rational_root(c: Fraction, r: Fraction) -> Fraction:
    """Exact ``c**r`` or raise IrrationalLeadingScale."""
    if r.denominator == 1:
        return c ** r.numerator
    q = r.denominator
    if c < 0 and q % 2 == 0:
        raise IrrationalLeadingScale(f"({c})^({r}) is not real")
    sign = -1 if c < 0 else 1

    def iroot(n):
        lo, hi = 0, 1
        while hi ** q <= n:
            hi <<= 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** q <= n:
                lo = mid
            else:
                hi = mid - 1
        if lo ** q != n:
            raise IrrationalLeadingScale(f"({c})^({r}) is irrational")
        return lo

    base = Fraction(sign * iroot(abs(c.numerator)), iroot(c.denominator))
    return base ** r.numerator


def pow_rational(a: TruncatedSeries, r) -> TruncatedSeries:
    """``a**r`` for rational ``r`` via the J. C. P. Miller recurrence."""
    r = _as_fraction(r)
    if a.is_zero():
        raise ZeroLeadingCoefficient("cannot raise a zero series to a power")
    e = a.min_exp
    er = e * r
    if er.denominator != 1:
        raise NonIntegerExponent(f"valuation {e} times {r} is not an integer")
    c = a.coeffs
    lead = _rational_root(c[0], r)
    rel = a.order - e
    # (1 + h)^r with h = c[1:]/c[0]
    h = [ci / c[0] for ci in c]
    p = [Fraction(1)] + [Fraction(0)] * rel
    for k in range(1, rel + 1):
        acc = Fraction(0)
        for j in range(1, min(k, len(h) - 1) + 1):
            acc += (r * j - (k - j)) * h[j] * p[k - j]
        p[k] = acc / k
    out = [lead * x for x in p]
    return TruncatedSeries._normalized(a.var, int(er), int(er) + rel, out)


def derivative(a: TruncatedSeries) -> TruncatedSeries:
    if a.is_zero():
        return TruncatedSeries.zero(a.var, a.order - 1)
    cs = [(a.min_exp + i) * c for i, c in enumerate(a.coeffs)]
    return TruncatedSeries._normalized(a.var, a.min_exp - 1, a.order - 1, cs)


def log_derivative(a: TruncatedSeries) -> TruncatedSeries:
    """``a'/a``; unchanged when ``a`` is rescaled by a constant."""
    return derivative(a) * reciprocal(a)


def log1p_series(a: TruncatedSeries) -> TruncatedSeries:
    """``log(a)`` for ``a`` with constant term 1."""
    if a.min_exp != 0 or a.coeffs[0] != 1:
        raise InvalidValuation("log needs a series with constant term 1")
    d = log_derivative(a)
    terms = {e + 1: c / (e + 1) for e, c in d.terms()}
    return TruncatedSeries.from_dict(a.var, terms, d.order + 1)


def exp_series(a: TruncatedSeries) -> TruncatedSeries:
    """``exp(a)`` for ``a`` of positive valuation."""
    if not a.is_zero() and a.min_exp < 1:
        raise InvalidValuation("exp needs positive valuation")
    n = a.order
    f = [a[k] if k >= a.min_exp else Fraction(0) for k in range(n + 1)]
    e = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        e[k] = sum((j * f[j] * e[k - j] for j in range(1, k + 1) if f[j]), Fraction(0)) / k
    return TruncatedSeries.make(a.var, e, 0, n)


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g)``, tagged with ``g.var``; Horner evaluation in the series ring."""
    if g.is_zero() or g.min_exp < 1:
        raise InvalidValuation("inner series must have valuation >= 1")
    if not f.is_zero() and f.min_exp < 0:
        raise InvalidValuation("outer series must not have negative powers")
    vg = g.min_exp
    bound = vg * (f.order + 1) - 1
    if f.is_zero():
        return TruncatedSeries.zero(g.var, bound)
    # f = s**m * rest, rest has a nonzero constant term
    m = f.min_exp
    rest = f.shift(-m)
    acc = TruncatedSeries.monomial(g.var, 0, rest[rest.order], g.order)
    for k in range(rest.order - 1, -1, -1):
        acc = acc * g + rest[k]
    if m:
        acc = acc * pow_rational(g, m)
    order = min(acc.order, bound)
    return acc.truncate(order) if order < acc.order else acc


def revert(g: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse ``h`` with ``g(h(s)) = s`` by Newton iteration."""
    if g.is_zero() or g.min_exp != 1:
        raise InvalidValuation("reversion needs valuation exactly 1")
    N = g.order
    a1 = g.coeffs[0]
    gp = derivative(g)
    h = TruncatedSeries.monomial(g.var, 1, 1 / a1, 1)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        hp = TruncatedSeries.from_dict(g.var, dict(h.terms()), prec)
        gt = g.truncate(prec)
        resid = compose(gt, hp) - TruncatedSeries.identity(g.var, prec)
        slope = compose(gp.truncate(prec - 1), hp)
        h = hp - (resid * reciprocal(slope)).truncate(prec)
    return TruncatedSeries.from_dict(g.var, dict(h.terms()), N)


def binomial_series(var, r, sign: int, order: int) -> TruncatedSeries:
    """``(1 + sign*s)**r`` term by term, used as an independent check."""
    r = _as_fraction(r)
    c = Fraction(1)
    out = []
    for k in range(order + 1):
        out.append(c * sign ** k)
        c = c * (r - k) / (k + 1)
    return TruncatedSeries.make(var, out, 0, order)


def poly(var, coeffs: Sequence, order: int) -> TruncatedSeries:
    """Polynomial with ascending ``coeffs`` known exactly through ``order``."""
    return TruncatedSeries.make(var, coeffs, 0, order)
