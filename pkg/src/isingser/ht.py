"""High-temperature expansion of two-spin correlations in ``v = tanh K``.

The correlation on a finite graph is the ratio of two edge-subset sums:
subsets whose odd-degree vertices are exactly the two spins, over subsets
with no odd vertex, each subset weighted by ``v**|E|``.

``ht_series`` evaluates the infinite-lattice limit with the finite-lattice
method: the ratio is computed on every rectangle that can host a cluster
of at most ``N`` edges and the rectangles are combined by inclusion and
exclusion (see ``_clusters``).  A single padded window (``method="window"``)
and exhaustive subset enumeration (``ht_series_bruteforce``) are kept as
independent routes.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import _frontier
from ._clusters import evaluate_family, mobius_total, series_quotient
from .errors import OrderTooSmall, WindowTooLarge
from .series import TruncatedSeries, Var

KINDS = ("row", "diagonal", "general")


@dataclass(frozen=True)
class CorrelationId:
    """``<sigma(0,0) sigma(m,n)>``; rows use ``(n, 0)``, diagonals ``(n, n)``."""

    kind: str
    m: int
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown correlation kind {self.kind!r}")
        if self.m < 0 or self.n < 0:
            raise ValueError("offsets must be nonnegative")

    @classmethod
    def row(cls, n: int) -> "CorrelationId":
        return cls("row", n, 0)

    @classmethod
    def diagonal(cls, n: int) -> "CorrelationId":
        return cls("diagonal", n, n)

    @classmethod
    def general(cls, m: int, n: int) -> "CorrelationId":
        return cls("general", m, n)

    @classmethod
    def parse(cls, text: str) -> "CorrelationId":
        """Accepts ``row:3``, ``diagonal:2`` or ``general:2,1``."""
        m = re.fullmatch(r"\s*(row|diagonal|diag|general)\s*:\s*(\d+)\s*(?:,\s*(\d+))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse correlation id {text!r}")
        kind, a, b = m.groups()
        if kind in ("diag", "diagonal"):
            return cls.diagonal(int(a))
        if kind == "row":
            return cls.row(int(a))
        if b is None:
            raise ValueError("general ids need two offsets, e.g. general:2,1")
        return cls.general(int(a), int(b))

    @property
    def offset(self) -> tuple:
        return (self.m, self.n)

    @property
    def distance(self) -> int:
        return self.m + self.n

    @property
    def label(self) -> str:
        if self.kind == "row":
            return f"row:{self.m}"
        if self.kind == "diagonal":
            return f"diagonal:{self.m}"
        return f"general:{self.m},{self.n}"

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "m": self.m, "n": self.n}

    def canonical(self) -> tuple:
        """Offset reduced by lattice symmetry (swap and reflection)."""
        a, b = sorted((self.m, self.n), reverse=True)
        return (a, b)


@dataclass(frozen=True)
class HtWindow:
    """Rectangle of vertices ``x_range x y_range`` (inclusive bounds)."""

    x_range: tuple
    y_range: tuple
    padding: int = 0

    @classmethod
    def around(cls, cid: CorrelationId, padding: int) -> "HtWindow":
        m, n = cid.offset
        return cls((-padding, m + padding), (-padding, n + padding), padding)

    @property
    def width(self) -> int:
        return self.x_range[1] - self.x_range[0] + 1

    @property
    def height(self) -> int:
        return self.y_range[1] - self.y_range[0] + 1

    def contains(self, p) -> bool:
        return self.x_range[0] <= p[0] <= self.x_range[1] and self.y_range[0] <= p[1] <= self.y_range[1]

    def edges(self):
        x0, x1 = self.x_range
        y0, y1 = self.y_range
        out = []
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                if x < x1:
                    out.append(((x, y), (x + 1, y)))
                if y < y1:
                    out.append(((x, y), (x, y + 1)))
        return out


def _as_series(coeffs, order, var=Var.v):
    return TruncatedSeries.make(var, coeffs, 0, order)


def _check_order(cid, order):
    if order < cid.distance:
        raise OrderTooSmall(f"order {order} is below the graph distance {cid.distance}")


def ht_rectangles(dx: int, dy: int, order: int, padding: int = 0):
    """Rectangles holding both spins with ``2(w + h) - d <= order + 2*padding``.

    A cluster with bounding box ``w x h`` has at least ``2w - dx`` horizontal
    and ``2h - dy`` vertical edges, so larger boxes cannot reach ``v**order``.
    """
    lim = (order + dx + dy) // 2 + padding
    out = []
    for x1 in range(dx - lim, 1):
        for x2 in range(dx, x1 + lim + 1):
            rest = lim - (x2 - x1)
            for y1 in range(dy - rest, 1):
                for y2 in range(dy, y1 + rest + 1):
                    out.append((x1, x2, y1, y2))
    return out


def ht_flm_coefficients(cid: CorrelationId, order: int, padding: int = 0,
                        state_cap: int = _frontier.DEFAULT_STATE_CAP):
    """Integer coefficients ``[c_0..c_N]`` and diagnostics for the lattice limit."""
    dx, dy = cid.offset
    d = dx + dy
    N = order
    rects = ht_rectangles(dx, dy, N, padding)
    syms = [lambda r: (dx - r[1], dx - r[0], dy - r[3], dy - r[2])]
    if dx == dy:
        syms.append(lambda r: (r[2], r[3], r[0], r[1]))

    # vacuum sums depend only on the box shape; sweep along the longer side
    need = {}
    for x1, x2, y1, y2 in rects:
        short, long_ = sorted((x2 - x1, y2 - y1))
        need[short] = max(need.get(short, 0), long_)
    vacuum = {}
    peak = 0
    for short, long_ in need.items():
        res = _frontier.sweep(short + 1, long_ + 1, (), N - d, state_cap=state_cap)
        peak = max(peak, res.peak_states)
        vacuum[short] = res.even

    def ratio(rect, even, odd):
        x1, x2, y1, y2 = rect
        short, long_ = sorted((x2 - x1, y2 - y1))
        # the vacuum sum is known to N - d only; enough since even has valuation d
        return series_quotient(even, vacuum[short][long_], N + 1)

    values, stats = evaluate_family(rects, syms, ratio, targets=[(0, 0), (dx, dy)],
                                    budget=N, state_cap=state_cap)
    total = mobius_total(values, N + 1)
    stats["states_peak"] = max(stats["states_peak"], peak)
    stats["sweeps"] += len(need)
    return total, {"method": "flm", "padding": padding, **stats}


def ht_window_coefficients(cid: CorrelationId, order: int, window: HtWindow,
                           state_cap: int = _frontier.DEFAULT_STATE_CAP):
    """Numerator over denominator on a single window, expanded to ``order``."""
    a, b = (0, 0), cid.offset
    if not (window.contains(a) and window.contains(b)):
        raise ValueError("window must contain both spins")
    d = cid.distance
    x0, y0 = window.x_range[0], window.y_range[0]
    pts = [(a[0] - x0, a[1] - y0), (b[0] - x0, b[1] - y0)]
    W, H = window.width, window.height
    if H > W:
        pts = [(y, x) for x, y in pts]
        W, H = H, W
    num = _frontier.sweep(H, W, pts, order, state_cap=state_cap)
    den = _frontier.sweep(H, W, (), order - d, state_cap=state_cap)
    coeffs = series_quotient(num.even[-1], den.even[-1], order + 1)
    peak = max(num.peak_states, den.peak_states)
    return coeffs, {"method": "window", "padding": window.padding, "states_peak": peak}


_MEMO: dict = {}


def ht_compute(cid: CorrelationId, order: int, *, method: str = "flm",
               padding: int | None = None, state_cap: int = _frontier.DEFAULT_STATE_CAP):
    """``(series, provenance)`` for the correlation through ``v**order``.

    ``method="flm"`` (default) combines rectangles; ``padding`` enlarges the
    rectangle family beyond what the edge-count bound requires.
    ``method="window"`` uses one window padded by ``padding`` on every side,
    by default ``e + 1`` with ``e = order - distance``.
    """
    _check_order(cid, order)
    if cid.offset == (0, 0):
        s = TruncatedSeries.one(Var.v, order)
        return s, {"oracle": "ht", "id": cid.to_json_obj(), "order": order,
                   "padding": 0, "states_peak": 0, "method": "trivial"}
    m, n = cid.offset
    if method == "flm":
        pad = 0 if padding is None else padding
        key = ("flm", m, n, pad)
        hit = _MEMO.get(key)
        if hit and hit[0] >= order:
            coeffs, info = hit[1][: order + 1], hit[2]
        else:
            coeffs, info = ht_flm_coefficients(cid, order, pad, state_cap)
            _MEMO[key] = (order, coeffs, info)
    elif method == "window":
        pad = order - cid.distance + 1 if padding is None else padding
        coeffs, info = ht_window_coefficients(cid, order, HtWindow.around(cid, pad), state_cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    prov = {"oracle": "ht", "id": cid.to_json_obj(), "order": order, **info}
    return _as_series(coeffs, order), prov


def ht_series(cid: CorrelationId, order: int, **kwargs) -> TruncatedSeries:
    """Exact high-temperature series of ``<sigma(0,0) sigma(m,n)>`` in ``v``."""
    return ht_compute(cid, order, **kwargs)[0]


MAX_BRUTE_EDGES = 24


def _subset_weights(n_edges, incidence, want, order):
    """Histogram by size of edge subsets whose odd-vertex mask equals ``want``."""
    counts = np.zeros(order + 1, dtype=np.int64)
    chunk = 1 << min(n_edges, 20)
    for start in range(0, 1 << n_edges, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        odd = np.zeros_like(masks)
        for v, inc in enumerate(incidence):
            par = np.bitwise_count(masks & inc) & 1
            odd |= par.astype(np.int64) << v
        sizes = np.bitwise_count(masks)[odd == want]
        sizes = sizes[sizes <= order]
        counts += np.bincount(sizes, minlength=order + 1)[: order + 1]
    return [int(c) for c in counts]


def ht_series_bruteforce(cid: CorrelationId, order: int, window: HtWindow) -> TruncatedSeries:
    """Ratio of subset sums on ``window`` by exhaustive enumeration."""
    _check_order(cid, order)
    edges = window.edges()
    if len(edges) > MAX_BRUTE_EDGES:
        raise WindowTooLarge(f"{len(edges)} edges exceed the limit of {MAX_BRUTE_EDGES}")
    a, b = (0, 0), cid.offset
    if not (window.contains(a) and window.contains(b)):
        raise ValueError("window must contain both spins")
    verts = sorted({p for e in edges for p in e} | {a, b})
    index = {p: i for i, p in enumerate(verts)}
    incidence = [0] * len(verts)
    for k, (p, q) in enumerate(edges):
        incidence[index[p]] |= 1 << k
        incidence[index[q]] |= 1 << k
    want = 0 if a == b else (1 << index[a]) | (1 << index[b])
    num = _subset_weights(len(edges), incidence, want, order)
    den = _subset_weights(len(edges), incidence, 0, order)
    return _as_series(series_quotient(num, den, order + 1), order)
