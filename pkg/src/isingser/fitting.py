"""Exact polynomial fits in ``n`` with surplus-point certification."""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InsufficientOrder, NoPolynomialFit

FAMILIES = ("ht_row", "ht_row_khat", "lt_conn", "lt_conn_khat", "lt_ratio", "ht_diag")


class Poly:
    """Dense univariate polynomial with Fraction coefficients (ascending)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in (coeffs.c if isinstance(coeffs, Poly) else coeffs)]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def n(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        other = self._lift(other)
        k = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (k - len(self.c))
        b = other.c + (Fraction(0),) * (k - len(other.c))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.degree != 0:
                raise ValueError("only division by constants is supported")
            other = other.c[0]
        return Poly(x / Fraction(other) for x in self.c)

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def shift(self, h) -> "Poly":
        """``p(n + h)``."""
        out = Poly()
        for a in reversed(self.c):
            out = out * Poly([h, 1]) + a
        return out

    def derivative(self) -> "Poly":
        return Poly(k * a for k, a in enumerate(self.c) if k)

    def divmod(self, other: "Poly"):
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q = [Fraction(0)] * max(len(rem) - len(other.c) + 1, 1)
        lead = other.c[-1]
        while len(rem) >= len(other.c) and any(rem):
            k = len(rem) - len(other.c)
            f = rem[-1] / lead
            q[k] = f
            for i, b in enumerate(other.c):
                rem[i + k] -= f * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def parse_poly(text: str) -> Poly:
    """Parse expressions like ``(n+1)*(n+2)`` or ``n^2 + 2n + 4`` in ``n``."""
    src = text.replace("^", "**")
    # implicit products: 2n, )(, n(
    out = []
    for i, ch in enumerate(src):
        if i and ((ch == "n" or ch == "(") and (src[i - 1].isdigit() or src[i - 1] in ")n")):
            out.append("*")
        out.append(ch)
    tree = ast.parse("".join(out), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly([node.value])
        if isinstance(node, ast.Name) and node.id == "n":
            return Poly.n()
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            if isinstance(node.op, ast.Pow) and b.degree <= 0 and (not b.c or b.c[0].denominator == 1):
                return a ** int(b.c[0] if b.c else 0)
        raise ValueError(f"unsupported polynomial syntax in {text!r}")

    return ev(tree)


def _format_int_poly(ints: Sequence[int]) -> str:
    parts = []
    for k in range(len(ints) - 1, -1, -1):
        a = ints[k]
        if a == 0:
            continue
        mono = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
        mag = abs(a)
        body = str(mag) if (mag != 1 or k == 0) else ""
        body += mono
        sign = "-" if a < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f"{sign}{body}"
    return text


def format_poly(p: Poly, denominator: Poly | None = None) -> str:
    """Human form with a common integer denominator, e.g. ``(n^4+2n^3)/4``."""
    den = 1
    for a in p.c:
        den = den * a.denominator // math.gcd(den, a.denominator)
    ints = [int(a * den) for a in p.c]
    body = _format_int_poly(ints)
    needs_paren = den != 1 or denominator is not None
    if needs_paren and len([a for a in ints if a]) > 1:
        body = f"({body})"
    if den != 1:
        body = f"{body}/{den}"
    if denominator is not None:
        body = f"{body}/({_format_int_poly([int(a) for a in denominator.c])})"
    return body


@dataclass
class FitResult:
    """Outcome of an exact fit; ``denominator`` is set for rational fits."""

    poly: list
    degree: int
    surplus_residuals: list
    points_used: int
    denominator: list | None = None
    warnings: list = field(default_factory=list)

    @property
    def polynomial(self) -> Poly:
        return Poly(self.poly)

    def __call__(self, n):
        value = self.polynomial(Fraction(n))
        if self.denominator is not None:
            value = value / Poly(self.denominator)(Fraction(n))
        return value

    @property
    def accepted(self) -> bool:
        return bool(self.surplus_residuals) and all(r == 0 for r in self.surplus_residuals)

    def formula(self) -> str:
        den = Poly(self.denominator) if self.denominator is not None else None
        return format_poly(self.polynomial, den)

    def to_json_obj(self) -> dict:
        obj = {
            "poly": [_q(c) for c in self.poly],
            "degree": self.degree,
            "surplus": [_q(r) for r in self.surplus_residuals],
            "points_used": self.points_used,
            "formula": self.formula(),
        }
        if self.denominator is not None:
            obj["denominator"] = [_q(c) for c in self.denominator]
        if self.warnings:
            obj["warnings"] = list(self.warnings)
        return obj


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _newton_to_monomial(xs, dd) -> Poly:
    p = Poly([dd[-1]])
    for k in range(len(dd) - 2, -1, -1):
        p = p * Poly([-xs[k], 1]) + dd[k]
    return p


def _divided_differences(xs, ys):
    """Rows ``table[k][i] = f[x_i, ..., x_{i+k}]``."""
    table = [list(ys)]
    for k in range(1, len(xs)):
        prev = table[-1]
        table.append([(prev[i + 1] - prev[i]) / (xs[i + k] - xs[i]) for i in range(len(prev) - 1)])
    return table


def fit_minimal_polynomial(points) -> FitResult:
    """Lowest-degree polynomial through the points, certified by surplus points.

    The degree is the first order at which all divided differences coincide
    (finite differences for consecutive ``n``); the polynomial is the
    Newton form through the first ``degree + 1`` points and the residuals on
    the remaining points must vanish exactly.
    """
    pts = sorted((Fraction(n), Fraction(y)) for n, y in points)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    if len(pts) < 3:
        raise ValueError("at least three points are required")
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissae")
    table = _divided_differences(xs, ys)
    degree = None
    for k in range(len(xs) - 1):
        if len(set(table[k])) == 1:
            degree = k
            break
    if degree is None:
        # report what the best admissible interpolant leaves over
        k = len(xs) - 2
        p = _newton_to_monomial(xs, [table[j][0] for j in range(k + 1)])
        res = [p(x) - y for x, y in zip(xs[k + 1:], ys[k + 1:])]
        raise NoPolynomialFit(f"no polynomial of degree <= {k} fits {len(xs)} points", res)
    p = _newton_to_monomial(xs, [table[j][0] for j in range(degree + 1)])
    residuals = [p(x) - y for x, y in zip(xs[degree + 1:], ys[degree + 1:])]
    warnings = []
    if len(residuals) < 2:
        warnings.append(f"only {len(residuals)} surplus point(s)")
    return FitResult(list(p.c) or [Fraction(0)], degree, residuals, len(xs), None, warnings)


def fit_rational(points, denominator) -> FitResult:
    """Fit ``y = p(n)/q(n)`` with prescribed ``q`` by fitting ``y*q(n)``."""
    q = denominator if isinstance(denominator, Poly) else (
        parse_poly(denominator) if isinstance(denominator, str) else Poly(denominator))
    scaled = [(n, Fraction(y) * q(Fraction(n))) for n, y in points]
    res = fit_minimal_polynomial(scaled)
    res.denominator = list(q.c)
    return res


def verify_difference_identity(fit, claimed) -> bool:
    """``p(n+1) - p(n)`` equals ``claimed`` as polynomials."""
    p = fit.polynomial if isinstance(fit, FitResult) else Poly(fit)
    if isinstance(claimed, str):
        claimed = parse_poly(claimed)
    elif not isinstance(claimed, Poly):
        claimed = Poly(claimed)
    return p.shift(1) - p == claimed


def verify_integrality(fit, n_max: int, require_even: bool = False) -> bool:
    """``p(n)`` is an integer (even if requested) for ``1 <= n <= n_max``."""
    for n in range(1, n_max + 1):
        v = fit(n) if isinstance(fit, FitResult) else Poly(fit)(Fraction(n))
        if v.denominator != 1:
            return False
        if require_even and v.numerator % 2:
            return False
    return True


# real roots on [lo, inf)


def _squarefree(p: Poly) -> Poly:
    a, b = p, p.derivative()
    while b.c:
        a, b = b, a.divmod(b)[1]
    g = a
    return p.divmod(g)[0] if g.degree > 0 else p


def _sturm(p: Poly):
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = seq[-2].divmod(seq[-1])[1]
        if not r.c:
            break
        seq.append(-r)
    return seq


def _sign_changes(seq, x) -> int:
    signs = [s(x) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def real_roots(p: Poly, lo: Fraction, tol: Fraction = Fraction(1, 10 ** 12)):
    """Isolated real roots ``> lo`` (and ``lo`` itself) as rational brackets."""
    if p.degree < 1:
        return []
    q = _squarefree(p)
    bound = 1 + max(abs(a / q.c[-1]) for a in q.c[:-1]) if q.degree else Fraction(1)
    hi = max(Fraction(bound), lo + 1)
    seq = _sturm(q)
    out = []
    if q(lo) == 0:
        out.append((lo, lo))

    def count(a, b):
        return _sign_changes(seq, a) - _sign_changes(seq, b)

    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = count(a, b)
        if k == 0:
            continue
        if k == 1:
            while b - a > tol:
                mid = (a + b) / 2
                if q(mid) == 0:
                    a = b = mid
                    break
                if count(a, mid) == 1:
                    b = mid
                else:
                    a = mid
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out)


@dataclass
class StationaryReport:
    roots: list
    extrema: list

    def to_json_obj(self) -> dict:
        return {"roots": [f"{r:.6f}" for r in self.roots],
                "extrema": [{"n": f"{n:.6f}", "value": f"{v:.6f}", "kind": k} for n, v, k in self.extrema]}


def stationary_analysis(fit, lo: int = 1) -> StationaryReport:
    """Real roots and local extrema of the fitted polynomial for ``n >= lo``."""
    p = fit.polynomial if isinstance(fit, FitResult) else Poly(fit)
    if p.degree < 1:
        raise ValueError("stationary analysis needs degree >= 1")
    lo = Fraction(lo)
    roots = [float((a + b) / 2) for a, b in real_roots(p, lo)]
    dp = p.derivative()
    ddp = dp.derivative()
    extrema = []
    for a, b in real_roots(dp, lo):
        x = (a + b) / 2
        curv = ddp(x)
        if curv == 0:
            # inflection unless the sign of p' changes across the bracket
            left, right = dp(a - Fraction(1, 10 ** 6)), dp(b + Fraction(1, 10 ** 6))
            if (left > 0) == (right > 0):
                continue
            kind = "minimum" if left < 0 else "maximum"
        else:
            kind = "minimum" if curv > 0 else "maximum"
        if x == lo:
            continue
        extrema.append((float(x), float(p(x)), kind))
    return StationaryReport(roots, extrema)


# data collection


def collect_coefficients(family: str, offset: int, n_range, provider=None) -> list:
    """Normalized coefficient at ``valuation + offset`` for each ``n``.

    ``offset`` counts powers of the family's variable: ``v`` for ``ht_row``,
    ``khat_>`` for ``ht_row_khat``, ``u`` for ``lt_conn`` and ``lt_ratio``,
    ``khat_<`` for ``lt_conn_khat`` and ``x`` for ``ht_diag``.  Connected
    families are normalized by their leading coefficient 4.  ``provider``
    may map ``n`` to a precomputed series; otherwise the oracles are called.
    """
    from . import ht, lt, transforms

    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    out = []
    for n in n_range:
        cid = ht.CorrelationId.diagonal(n) if family == "ht_diag" else ht.CorrelationId.row(n)
        if family == "ht_row":
            need, val = n + offset, n
            s = provider(n) if provider else ht.ht_series(cid, need)
        elif family == "ht_row_khat":
            need, val = n + 2 * offset, n
            s = provider(n) if provider else transforms.to_khat_gt(ht.ht_series(cid, need))
        elif family == "ht_diag":
            need, val = n + offset, n
            s = provider(n) if provider else transforms.x_series_from_v(ht.ht_series(cid, 2 * need))
        elif family == "lt_conn":
            need, val = n + 2 + offset, n + 2
            s = provider(n) if provider else lt.lt_series_connected(cid, need)
        elif family == "lt_conn_khat":
            need, val = n + 2 + offset, n + 2
            s = provider(n) if provider else transforms.to_khat_lt(lt.lt_series_connected(cid, need))
        else:  # lt_ratio: A - 1 = 4 u^(n+2) [1 + ...]
            need, val = n + 2 + offset, n + 2
            s = provider(n) if provider else lt.ratio_series(cid, need) - 1
        if s.order < need:
            raise InsufficientOrder(f"n={n}: series known to order {s.order}, need {need}")
        lead = s[val]
        if lead == 0:
            raise InsufficientOrder(f"n={n}: leading coefficient at {val} vanishes")
        out.append((n, s[need] / lead))
    return out
