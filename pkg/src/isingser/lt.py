"""Low-temperature expansion of two-spin correlations in ``u = z**2``.

With fixed boundary spins, a spin configuration is a set of closed domain
walls on the dual lattice, weighted by ``z = exp(-2K)`` per wall edge.  The
product of two spins is ``-1`` exactly when an odd number of wall edges
cross a dual path (the cut) joining them, so the correlation is the signed
contour sum over the unsigned one.

The infinite-lattice limit uses the finite-lattice method on the logarithm
of that ratio, which is additive over clusters.  Logarithms are handled
through integer log-derivatives ``z Z'/Z`` so every step stays in exact
integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import _frontier
from ._clusters import (
    evaluate_family,
    exp_from_log_derivative,
    log_derivative_int,
    mobius_total,
    series_quotient,
)
from .errors import OrderTooSmall, WindowTooLarge
from .ht import CorrelationId
from .series import TruncatedSeries, Var, pow_rational, reciprocal

# dual vertex (i, j) sits at the centre (i + 1/2, j + 1/2) of a plaquette


@dataclass(frozen=True)
class CutPath:
    """Dual edges crossed by a lattice path between the two spins.

    ``up`` holds dual vertices whose upward edge is crossed, ``right`` those
    whose rightward edge is crossed.
    """

    up: tuple
    right: tuple

    @classmethod
    def straight(cls, cid: CorrelationId) -> "CutPath":
        """Along the row from ``(0,0)`` to ``(m,0)``, then up to ``(m,n)``."""
        m, n = cid.offset
        up = tuple((i, -1) for i in range(m))
        right = tuple((m - 1, j) for j in range(n))
        return cls(up, right)

    @classmethod
    def detour(cls, cid: CorrelationId, depth: int = 1) -> "CutPath":
        """A homologous path that first steps ``depth`` units down.

        Goes from ``(0,0)`` down to ``(0,-depth)``, across to ``(m,-depth)``
        and up to ``(m,n)``.
        """
        m, n = cid.offset
        right = [(-1, j) for j in range(-depth, 0)]
        up = [(i, -depth - 1) for i in range(m)]
        right += [(m - 1, j) for j in range(-depth, n)]
        return cls(tuple(up), tuple(right))

    def __len__(self):
        return len(self.up) + len(self.right)



def _encloses(rect, site) -> bool:
    x1, x2, y1, y2 = rect
    sx, sy = site
    return x1 <= sx - 1 and x2 >= sx and y1 <= sy - 1 and y2 >= sy


def lt_rectangles(m: int, n: int, order: int, padding: int = 0):
    """Dual rectangles enclosing one of the spins with ``w + h <= order + padding``."""
    lim = order + padding
    out = []
    for x1 in range(-lim, m):
        for x2 in range(max(x1 + 1, 0), x1 + lim):
            rest = lim - (x2 - x1)
            for y1 in range(-rest, n):
                for y2 in range(max(y1 + 1, 0), y1 + rest + 1):
                    r = (x1, x2, y1, y2)
                    if _encloses(r, (0, 0)) or _encloses(r, (m, n)):
                        out.append(r)
    return out


def lt_flm_zcoefficients(cid: CorrelationId, order: int, padding: int = 0,
                         cut: CutPath | None = None,
                         state_cap: int = _frontier.DEFAULT_STATE_CAP):
    """Integer z-coefficients ``[r_0..r_{2N}]`` of the correlation and diagnostics.

    Clusters of domain walls whose bounding rectangle has half-perimeter
    ``w + h`` (in dual-lattice units) carry at least ``2(w + h)`` edges, so
    rectangles with ``w + h <= N + padding`` suffice for order ``u**N``.
    """
    m, n = cid.offset
    B = 2 * order
    cut = cut or CutPath.straight(cid)
    rects = lt_rectangles(m, n, order, padding)
    # Which loops separate the spins is a geometric fact, independent of
    # the cut, so the half-turn about the midpoint, mapping dual (i, j) to
    # (m-1-i, n-1-j), is a symmetry of the rectangle values.
    syms = [lambda r: (m - 1 - r[1], m - 1 - r[0], n - 1 - r[3], n - 1 - r[2])]
    if m == n:
        syms.append(lambda r: (r[2], r[3], r[0], r[1]))

    def log_ratio(rect, even, odd):
        z_all = [p + q for p, q in zip(even, odd)]
        z_cut = [p - q for p, q in zip(even, odd)]
        return [s - t for s, t in zip(log_derivative_int(z_cut, B + 1),
                                      log_derivative_int(z_all, B + 1))]

    values, stats = evaluate_family(rects, syms, log_ratio, cut_up=cut.up, cut_right=cut.right,
                                    budget=B, state_cap=state_cap)
    total = mobius_total(values, B + 1)
    r = exp_from_log_derivative(total, B + 1)
    if any(r[1::2]):
        raise ArithmeticError("odd powers of z survived; contour enumeration is inconsistent")
    kind = "straight" if cut == CutPath.straight(cid) else "custom"
    return r, {"method": "flm", "padding": padding, "cut": kind, **stats}


def dual_window(cid: CorrelationId, padding: int):
    """Dual rectangle whose contours stay within ``padding`` of the spins."""
    m, n = cid.offset
    return (-padding, m + padding - 1, -padding, n + padding - 1)


def lt_window_zcoefficients(cid: CorrelationId, order: int, rect,
                            cut: CutPath | None = None,
                            state_cap: int = _frontier.DEFAULT_STATE_CAP):
    """Signed over unsigned contour sum on one dual rectangle, through ``z**(2*order)``."""
    B = 2 * order
    cut = cut or CutPath.straight(cid)
    x1, x2, y1, y2 = rect
    transposed = (y2 - y1) > (x2 - x1)
    lo, start = (x1, y1) if transposed else (y1, x1)
    cu, cr = (cut.right, cut.up) if transposed else (cut.up, cut.right)
    height = (x2 - x1 if transposed else y2 - y1) + 1
    width = (y2 - y1 if transposed else x2 - x1) + 1
    res = _frontier.sweep(height, width, (), B,
                          cut_up=_to_frame(cu, transposed, start, lo),
                          cut_right=_to_frame(cr, transposed, start, lo),
                          state_cap=state_cap)
    even, odd = res.even[-1], res.odd[-1]
    z_all = [p + q for p, q in zip(even, odd)]
    z_cut = [p - q for p, q in zip(even, odd)]
    return series_quotient(z_cut, z_all, B + 1), {"method": "window", "states_peak": res.peak_states}


def _to_frame(points, transposed, start, lo):
    from ._clusters import to_sweep_frame
    return to_sweep_frame(points, transposed, start, lo)


def _u_series(zc, order) -> TruncatedSeries:
    if any(zc[1::2]):
        raise ArithmeticError("odd powers of z survived; contour enumeration is inconsistent")
    return TruncatedSeries.make(Var.u, zc[0::2], 0, order)


_MEMO: dict = {}


def lt_compute(cid: CorrelationId, order: int, *, method: str = "flm",
               padding: int | None = None, cut: CutPath | None = None,
               state_cap: int = _frontier.DEFAULT_STATE_CAP):
    """``(series in u, provenance)`` for the full correlation through ``u**order``."""
    if order < 2:
        raise OrderTooSmall("the low-temperature series needs order >= 2")
    if cid.offset == (0, 0):
        return TruncatedSeries.one(Var.u, order), {
            "oracle": "lt", "cut": "none", "id": cid.to_json_obj(), "order": order,
            "padding": 0, "states_peak": 0, "method": "trivial"}
    if method == "flm":
        pad = 0 if padding is None else padding
        key = (cid.offset, pad, cut)
        hit = _MEMO.get(key)
        if hit and hit[0] >= order:
            zc, info = hit[1][: 2 * order + 1], hit[2]
        else:
            zc, info = lt_flm_zcoefficients(cid, order, pad, cut, state_cap)
            _MEMO[key] = (order, zc, info)
    elif method == "window":
        # a single loop around one spin with 2*order edges reaches order - 1 away
        pad = max(order - 1, 1) if padding is None else padding
        zc, info = lt_window_zcoefficients(cid, order, dual_window(cid, pad), cut, state_cap)
        info["padding"] = pad
    else:
        raise ValueError(f"unknown method {method!r}")
    prov = {"oracle": "lt", "cut": info.get("cut", "straight" if cut is None else "custom"),
            "id": cid.to_json_obj(), "order": order, **info}
    return _u_series(zc, order), prov


def lt_series_full(cid: CorrelationId, order: int, **kwargs) -> TruncatedSeries:
    """Exact low-temperature series of ``<sigma(0,0) sigma(m,n)>`` in ``u``."""
    return lt_compute(cid, order, **kwargs)[0]


def magnetization_squared(order: int) -> TruncatedSeries:
    """``(1+u)^(1/2) (1-6u+u^2)^(1/4) / (1-u)`` expanded in ``u``."""
    order = max(order, 0)

    def p(cs):
        return TruncatedSeries.make(Var.u, cs, 0, order)

    return (pow_rational(p([1, 1]), Fraction(1, 2))
            * pow_rational(p([1, -6, 1]), Fraction(1, 4))
            * reciprocal(p([1, -1])))


def lt_series_connected(cid: CorrelationId, order: int, **kwargs) -> TruncatedSeries:
    """Full series minus the closed-form squared magnetization."""
    if order < cid.distance + 2:
        raise OrderTooSmall(f"order {order} is below the connected valuation {cid.distance + 2}")
    return lt_series_full(cid, order, **kwargs) - magnetization_squared(order)


def ratio_series(cid: CorrelationId, order: int, **kwargs) -> TruncatedSeries:
    """``C / M^2`` in ``u``."""
    if order < cid.distance + 2:
        raise OrderTooSmall(f"order {order} is below {cid.distance + 2}")
    return lt_series_full(cid, order, **kwargs) * reciprocal(magnetization_squared(order))


MAX_BRUTE_SPINS = 20


def lt_series_bruteforce(cid: CorrelationId, order: int, x_range, y_range) -> TruncatedSeries:
    """Enumerate spins on a block with every outside spin fixed up.

    A configuration with ``k`` unsatisfied bonds has weight ``z**k``; the
    result is the ratio of the spin-product-weighted sum to the plain sum,
    which must equal the contour computation on the surrounding dual block.
    """
    sites = [(x, y) for x in range(x_range[0], x_range[1] + 1)
             for y in range(y_range[0], y_range[1] + 1)]
    if len(sites) > MAX_BRUTE_SPINS:
        raise WindowTooLarge(f"{len(sites)} spins exceed the limit of {MAX_BRUTE_SPINS}")
    index = {p: i for i, p in enumerate(sites)}
    a, b = (0, 0), cid.offset
    if a not in index or b not in index:
        raise ValueError("block must contain both spins")
    import numpy as np

    cfg = np.arange(1 << len(sites), dtype=np.int64)
    bits = [(cfg >> i) & 1 for i in range(len(sites))]
    unsat = np.zeros_like(cfg)
    for (x, y), i in index.items():
        for nb in ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)):
            j = index.get(nb)
            if j is None:
                unsat += bits[i]
            elif j > i:
                unsat += bits[i] ^ bits[j]
    sign = 1 - 2 * (bits[index[a]] ^ bits[index[b]])
    B = 2 * order
    keep = unsat <= B
    den = np.bincount(unsat[keep], minlength=B + 1)[: B + 1]
    num = np.bincount(unsat[keep], weights=sign[keep], minlength=B + 1)[: B + 1]
    zc = series_quotient([int(round(c)) for c in num], [int(c) for c in den], B + 1)
    return _u_series(zc, order)
