"""Reference values for the row correlations: printed series, tables and closed forms.

Fixtures live in ``data/golden.json`` and are guarded by a SHA-256 digest
of their canonical JSON encoding.  Every comparison against derived series
is restricted to the powers a fixture actually pins down.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import mpmath

from .errors import IsingSeriesError, OutOfRange, UnknownLabel
from .ht import CorrelationId
from .series import TruncatedSeries, Var

_DATA = "golden.json"


def _digest(payload) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(text.encode()).hexdigest()


@lru_cache(maxsize=1)
def _load() -> dict:
    raw = resources.files("isingser").joinpath("data", _DATA).read_text()
    doc = json.loads(raw)
    body = {k: doc[k] for k in ("series", "tables")}
    if _digest(body) != doc["sha256"]:
        raise IsingSeriesError("golden fixtures fail their checksum")
    return doc


def checksum() -> str:
    return _load()["sha256"]


# ---------------------------------------------------------------- series


@dataclass(frozen=True)
class GoldenSeries:
    """A printed expansion.

    ``terms`` maps exponents to exact coefficients; powers up to
    ``known_through`` that are absent are zero.  For ``kind == "bracket"``
    the coefficients belong to the bracket after the prefactor
    ``var**prefactor`` has been pulled out.
    """

    label: str
    cid: CorrelationId | None
    var: Var
    kind: str
    terms: dict
    printed_order: int
    known_through: int
    prefactor: Fraction | None = None
    ambiguous: dict = field(default_factory=dict)
    note: str = ""

    def coefficient(self, exp: int) -> Fraction:
        if exp in self.ambiguous:
            raise IsingSeriesError(f"{self.label}: the printed coefficient at power {exp} is ambiguous")
        if exp > self.known_through:
            raise IndexError(f"{self.label} is known through power {self.known_through}")
        return self.terms.get(exp, Fraction(0))

    def pinned(self):
        """Exponents whose printed value is unambiguous, in order."""
        return [e for e in range(self.known_through + 1) if e not in self.ambiguous]

    def series(self) -> TruncatedSeries:
        """The printed terms as a series (ambiguous powers left out)."""
        return TruncatedSeries.from_dict(self.var, self.terms, self.known_through)


def _golden_from_json(label, rec) -> GoldenSeries:
    cid = CorrelationId.parse(rec["id"]) if rec["id"] != "magnetization" else None
    return GoldenSeries(
        label=label,
        cid=cid,
        var=Var(rec["var"]),
        kind=rec["kind"],
        terms={int(e): Fraction(c) for e, c in rec["terms"]},
        printed_order=rec["printed_order"],
        known_through=rec["known_through"],
        prefactor=Fraction(rec["prefactor"]) if "prefactor" in rec else None,
        ambiguous={int(e): tuple(Fraction(c) for c in cs) for e, cs in rec.get("ambiguous", {}).items()},
        note=rec.get("note", ""),
    )


def labels() -> list:
    return list(_load()["series"])


def golden(label: str) -> GoldenSeries:
    try:
        rec = _load()["series"][label]
    except KeyError:
        raise UnknownLabel(label) from None
    return _golden_from_json(label, rec)


def derive(label: str) -> dict:
    """Recompute a fixture's coefficients from the oracles: ``{exp: Fraction}``."""
    from . import ht, lt, transforms

    g = golden(label)
    top = g.known_through
    if g.cid is None:
        s = lt.magnetization_squared(top)
        return {e: s[e] for e in range(top + 1)}
    if g.var is Var.v:
        s = ht.ht_series(g.cid, top)
        return {e: s[e] for e in range(top + 1)}
    if g.var is Var.kgt_hat:
        n = g.cid.distance
        w = transforms.to_khat_gt(ht.ht_series(g.cid, n + 2 * top))
        return {e: w[n + 2 * e] for e in range(top + 1)}
    if g.kind == "connected":
        s = lt.lt_series_connected(g.cid, top)
    else:
        s = lt.lt_series_full(g.cid, top)
    if g.var is Var.klt_hat:
        s = transforms.to_khat_lt(s)
    return {e: s[e] for e in range(top + 1)}


@dataclass
class GoldenCheck:
    label: str
    mismatches: list
    resolved: dict

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check(label: str) -> GoldenCheck:
    """Compare a fixture with its re-derivation.

    Ambiguous printed powers are not compared; the derived value is reported
    in ``resolved`` together with the printed candidates.
    """
    g = golden(label)
    got = derive(label)
    bad = [(e, got[e], g.coefficient(e)) for e in g.pinned() if got[e] != g.coefficient(e)]
    resolved = {e: (got[e], cands) for e, cands in g.ambiguous.items()}
    return GoldenCheck(label, bad, resolved)


def check_all(selection=None) -> list:
    return [check(lab) for lab in (selection or labels())]


# ------------------------------------------------------ critical values


@dataclass(frozen=True)
class CriticalForm:
    """``2**two_power * sum(c * pi**(-2*k) for c, k in terms)``."""

    two_power: Fraction
    terms: tuple

    def evaluate(self, dps: int = 50):
        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for c, k in self.terms:
                total += mpmath.mpf(c.numerator) / c.denominator / mpmath.pi ** (2 * k)
            p = self.two_power
            return mpmath.power(2, mpmath.mpf(p.numerator) / p.denominator) * total

    def __str__(self):
        parts = []
        for c, k in self.terms:
            mag = abs(c)
            body = str(mag) if k == 0 else f"{mag}/pi^{2 * k}"
            parts.append(("- " if c < 0 else "+ ") + body)
        inner = " ".join(parts).lstrip("+ ")
        return f"2^({self.two_power}) * ({inner})"


def _F(*args):
    return Fraction(*args)


CRITICAL_FORMS = {
    1: CriticalForm(_F(-1, 2), ((_F(1), 0),)),
    2: CriticalForm(_F(0), ((_F(1), 0), (_F(-4), 1))),
    3: CriticalForm(_F(3, 2), ((_F(1), 0), (_F(-8), 1))),
    4: CriticalForm(_F(4), ((_F(1), 0), (_F(-112, 9), 1), (_F(256, 9), 2))),
    5: CriticalForm(_F(15, 2), ((_F(1), 0), (_F(-152, 9), 1), (_F(5632, 81), 2))),
    6: CriticalForm(_F(12), ((_F(1), 0), (_F(-1612, 75), 1), (_F(93184, 675), 2),
                             (_F(-4194304, 18225), 3))),
}


def critical_value(n: int, digits: int = 6, dps: int = 50) -> str:
    """``R_n`` at the critical point rounded to ``digits`` decimals."""
    if n not in CRITICAL_FORMS:
        raise OutOfRange(f"critical values are tabulated for 1 <= n <= 6, got {n}")
    if digits < 0 or digits > dps - 5:
        raise OutOfRange(f"digits must lie in 0..{dps - 5}")
    x = CRITICAL_FORMS[n].evaluate(dps)
    d = Decimal(mpmath.nstr(x, dps, min_fixed=-math.inf, max_fixed=math.inf))
    return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


# ------------------------------------------------- structure constants

_BN = {1: _F(1), 2: _F(1), 3: _F(1), 4: _F(1, 9), 5: _F(1, 81), 6: _F(1, 3 ** 6 * 5 ** 2)}


def pn(n: int) -> int:
    if n < 1:
        raise OutOfRange("p_n is defined for n >= 1")
    return n * n // 4


def bn(n: int) -> Fraction:
    if n not in _BN:
        raise OutOfRange(f"B_n is tabulated for 1 <= n <= 6, got {n}")
    return _BN[n]


# ---------------------------------------------------------------- tables

TABLES = ("high", "low")


@dataclass(frozen=True)
class TableEntry:
    raw: str
    canonical: float
    note: str = ""


def _grid_key(k) -> str:
    d = Decimal(str(k))
    if d < 0 or d > 1 or d != d.quantize(Decimal("0.1")):
        raise OutOfRange(f"k = {k} is not on the printed grid 0, 0.1, ..., 1")
    return "1" if d == 1 else ("0" if d == 0 else str(d.quantize(Decimal("0.1"))))


def table_entry(which: str, k, column) -> TableEntry:
    """Entry of the high- or low-temperature table.

    ``column`` is ``1..6`` for ``R_n`` or one of the header names
    (``"v"``, ``"z"``, ``"T/Tc"``).
    """
    if which not in TABLES:
        raise OutOfRange(f"table must be one of {TABLES}")
    tab = _load()["tables"][which]
    cols = tab["columns"]
    name = f"R{column}" if isinstance(column, int) else column
    if name not in cols[1:]:
        raise OutOfRange(f"no column {column!r} in the {which} table")
    key = _grid_key(k)
    for row in tab["rows"]:
        if row[0] == key:
            raw = row[cols.index(name)]
            break
    for fix in tab.get("corrections", []):
        if fix["k"] == key and fix["column"] == name:
            return TableEntry(raw, float(fix["canonical"]), fix["note"])
    value = math.inf if raw == "$\\infty$" else float(raw)
    return TableEntry(raw, value)


def table_value(which: str, k, n: int) -> float:
    if not 1 <= n <= 6:
        raise OutOfRange("tables cover 1 <= n <= 6")
    return table_entry(which, k, n).canonical


# -------------------------------------------------- numeric evaluation


@dataclass(frozen=True)
class NumericEstimate:
    value: float
    last_term: float
    order: int

    def __iter__(self):
        return iter((self.value, self.last_term))


def default_numeric_order(cid: CorrelationId, branch: str) -> int:
    """Sixteen powers past the leading one of the evaluated series."""
    return cid.distance + 16 if branch == "high" else 16


def numeric_from_series(cid: CorrelationId, branch: str, k, order: int | None = None) -> NumericEstimate:
    """Partial sum of ``R`` in ``khat = k/4``.

    Above the critical point the series runs in ``sqrt(khat_>)`` (converted
    from ``v`` through ``v**order``); below it the full correlation runs in
    ``khat_<`` (converted from ``u`` through ``u**order``).  The magnitude
    of the last nonzero term is returned as a truncation proxy.
    """
    from . import ht, lt, transforms

    if branch not in TABLES:
        raise OutOfRange(f"branch must be one of {TABLES}")
    k = float(k)
    if not abs(k) < 1:
        raise OutOfRange("numeric evaluation needs |k| < 1")
    order = default_numeric_order(cid, branch) if order is None else order
    if branch == "high":
        s = transforms.to_khat_gt(ht.ht_series(cid, order))
        arg = math.sqrt(abs(k) / 4)
    else:
        s = transforms.to_khat_lt(lt.lt_series_full(cid, order))
        arg = k / 4
    value = 0.0
    last = 0.0
    for e, c in s.terms():
        term = float(c) * arg ** e
        value += term
        last = abs(term)
    return NumericEstimate(value, last, order)
