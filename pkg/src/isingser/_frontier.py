"""Column-sweep transfer kernel for counting parity-constrained edge subsets.

The lattice is a rectangle of ``width`` columns and ``height`` rows of
vertices.  Vertices are visited column by column, bottom to top.  When a
vertex is visited the edges to its right and upper neighbour are decided.
The state is a bit vector holding, per row, whether a horizontal edge
crosses the current frontier, a carry bit for the vertical edge entering
the next vertex of the column, and a flag bit recording the parity of the
number of chosen edges that are marked as "cut" edges.

Each state carries a truncated generating polynomial in the edge count.
Coefficients are kept modulo several primes close to 2**62 so that the hot
loop runs on machine words; exact integers are recovered by the Chinese
remainder theorem with enough primes to exceed a rigorous coefficient
bound.  A lower bound on the number of edges every completion still needs
lets the kernel discard coefficients that can never reach the final budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ResourceBudgetExceeded

PRIMES = (
    4611686018427387847, 4611686018427387817, 4611686018427387787,
    4611686018427387761, 4611686018427387751, 4611686018427387737,
    4611686018427387733, 4611686018427387709, 4611686018427387701,
    4611686018427387631, 4611686018427387617, 4611686018427387587,
)

DEFAULT_STATE_CAP = 1 << 22
_INF = 1 << 40
_MAX_HEIGHT = 60


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


@njit(cache=True, inline="always")
def _prefix_parity(x):
    x ^= x << 1
    x ^= x << 2
    x ^= x << 4
    x ^= x << 8
    x ^= x << 16
    x ^= x << 32
    return x


@njit(cache=True, inline="always")
def _hash(key, mask):
    return ((key * -7046029254386353131) >> 17) & mask


@njit(cache=True)
def _sweep(height, width, tx, ty, cut_up, cut_right, budget, primes, state_cap):
    """Run the sweep; returns (out, peak, ok).

    ``out[c, f, d, i]`` is the residue modulo ``primes[i]`` of the number of
    admissible edge sets that lie in columns ``0..c`` with exactly ``d``
    edges and cut parity ``f``.  Targets (``tx``, ``ty``) are the vertices
    that must have odd degree; all others have even degree.
    """
    L = primes.shape[0]
    B1 = budget + 1
    carry = np.int64(1) << height
    flag = np.int64(1) << (height + 1)
    low_mask = carry - 1
    nt = tx.shape[0]

    out = np.zeros((width, 2, B1, L), dtype=np.uint64)
    keys = np.zeros(1, dtype=np.int64)
    vals = np.zeros((1, B1, L), dtype=np.uint64)
    for i in range(L):
        vals[0, 0, i] = 1
    n = 1
    peak = 1

    for x in range(width):
        for y in range(height):
            is_target = 0
            near = np.int64(0)
            far_mask = np.int64(0)
            nfar = 0
            fx0 = -1
            fx1 = -1
            for k in range(nt):
                px = tx[k]
                py = ty[k]
                if px == x and py == y:
                    is_target = 1
                elif px > x or (px == x and py > y):
                    if px == x or (px == x + 1 and py <= y):
                        near ^= np.int64(1) << py
                    else:
                        far_mask ^= np.int64(1) << py
                        if nfar == 0:
                            fx0 = px
                        else:
                            fx1 = px
                        nfar += 1
            xb = 0
            if nfar == 1:
                xb = fx0 - x - 1
            elif nfar == 2:
                d1 = abs(fx0 - fx1)
                d2 = fx0 + fx1 - 2 * x - 2
                xb = d1 if d1 < d2 else d2

            has_r = x < width - 1
            has_u = y < height - 1
            cu = cut_up[x, y]
            cr = cut_right[x, y]
            bit = np.int64(1) << y
            upbit = bit << 1
            keep = ~(bit | carry)

            cap = 4
            while cap < 4 * n:
                cap <<= 1
            hmask = cap - 1
            table = np.full(cap, -1, dtype=np.int64)
            nkeys = np.empty(2 * n, dtype=np.int64)
            nvals = np.zeros((2 * n, B1, L), dtype=np.uint64)
            m_new = 0

            for s_i in range(n):
                s = keys[s_i]
                par = is_target
                if s & bit:
                    par ^= 1
                if s & carry:
                    par ^= 1
                base = s & keep
                nr = 2 if has_r else 1
                for r in range(nr):
                    u = par ^ r
                    if u == 1 and not has_u:
                        continue
                    ns = base
                    if r == 1:
                        ns |= bit
                        if cr:
                            ns ^= flag
                    if u == 1:
                        ns |= carry
                        if cu:
                            ns ^= flag
                        R = (ns & low_mask) ^ upbit ^ near
                    else:
                        R = (ns & low_mask) ^ near
                    cnt = _popcount(R) + nfar
                    if cnt & 1:
                        continue
                    lb = cnt >> 1
                    M = R ^ far_mask
                    yp = _popcount(_prefix_parity(M) & low_mask)
                    if yp > lb:
                        lb = yp
                    if xb > lb:
                        lb = xb
                    step = r + u
                    top = budget - lb
                    if top < step:
                        continue
                    # any surviving coefficient?
                    nonzero = False
                    for d in range(top - step + 1):
                        for i in range(L):
                            if vals[s_i, d, i] != 0:
                                nonzero = True
                                break
                        if nonzero:
                            break
                    if not nonzero:
                        continue
                    h = _hash(ns, hmask)
                    while table[h] != -1 and nkeys[table[h]] != ns:
                        h = (h + 1) & hmask
                    j = table[h]
                    if j == -1:
                        j = m_new
                        table[h] = j
                        nkeys[j] = ns
                        m_new += 1
                    for d in range(top - step + 1):
                        for i in range(L):
                            a = nvals[j, d + step, i] + vals[s_i, d, i]
                            if a >= primes[i]:
                                a -= primes[i]
                            nvals[j, d + step, i] = a
            keys = nkeys[:m_new].copy()
            vals = nvals[:m_new].copy()
            n = m_new
            if n > peak:
                peak = n
            if n > state_cap:
                return out, peak, False
        for s_i in range(n):
            s = keys[s_i]
            if s == 0:
                out[x, 0] = vals[s_i]
            elif s == flag:
                out[x, 1] = vals[s_i]
    return out, peak, True


def coefficient_bound_bits(edges: int, budget: int) -> int:
    """Bits needed for any count of ``d <= budget`` edges out of ``edges``."""
    if edges <= 0:
        return 2
    best = 0.0
    for d in range(min(budget, edges) + 1):
        best = max(best, math.lgamma(edges + 1) - math.lgamma(d + 1) - math.lgamma(edges - d + 1))
    return int(best / math.log(2)) + 4


def _crt_setup(nbits: int):
    primes = []
    total = 1
    for p in PRIMES:
        primes.append(p)
        total *= p
        if total.bit_length() > nbits + 2:
            break
    else:
        raise ResourceBudgetExceeded("coefficient bound exceeds the available moduli")
    weights = []
    for p in primes:
        m = total // p
        weights.append(m * pow(m, -1, p))
    return primes, total, weights


@dataclass
class SweepResult:
    """Exact per-column polynomials: ``even[c]``/``odd[c]`` by cut parity."""

    even: list
    odd: list
    peak_states: int


def sweep(height, width, targets=(), budget=0, cut_up=(), cut_right=(),
          state_cap=DEFAULT_STATE_CAP) -> SweepResult:
    """Count edge sets on a ``width`` x ``height`` vertex grid.

    Coordinates are relative to the lower-left vertex.  ``targets`` is a
    collection of at most two vertices that must have odd degree.
    ``cut_up`` / ``cut_right`` list the vertices whose upward / rightward
    edge toggles the cut parity.
    """
    if height < 1 or width < 1:
        raise ValueError("empty grid")
    if height > _MAX_HEIGHT:
        raise ResourceBudgetExceeded(f"strip height {height} exceeds {_MAX_HEIGHT}")
    targets = sorted(set(targets))
    if len(targets) > 2:
        raise ValueError("at most two odd-degree vertices are supported")
    tx = np.array([p[0] for p in targets], dtype=np.int64)
    ty = np.array([p[1] for p in targets], dtype=np.int64)
    cu = np.zeros((width, height), dtype=np.bool_)
    cr = np.zeros((width, height), dtype=np.bool_)
    for (px, py) in cut_up:
        if 0 <= px < width and 0 <= py < height:
            cu[px, py] = True
    for (px, py) in cut_right:
        if 0 <= px < width and 0 <= py < height:
            cr[px, py] = True
    edges = 2 * width * height
    primes, total, weights = _crt_setup(coefficient_bound_bits(edges, budget))
    parr = np.array(primes, dtype=np.uint64)
    raw, peak, ok = _sweep(height, width, tx, ty, cu, cr, budget, parr, state_cap)
    if not ok:
        raise ResourceBudgetExceeded(f"frontier state count {peak} exceeds cap {state_cap}")

    def lift(block):
        res = []
        for d in range(budget + 1):
            acc = 0
            for i, w in enumerate(weights):
                acc += int(block[d, i]) * w
            res.append(acc % total)
        return res

    even = [lift(raw[c, 0]) for c in range(width)]
    odd = [lift(raw[c, 1]) for c in range(width)]
    return SweepResult(even, odd, int(peak))
