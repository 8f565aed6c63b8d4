"""Finite-lattice assembly: combine rectangle quantities into a lattice limit.

For a quantity ``F`` that is additive over connected clusters, the
contribution ``g`` of clusters whose bounding box is exactly the rectangle
``L`` follows from inclusion-exclusion over the four ways of shrinking
``L`` by one unit.  Summing ``g`` over every rectangle that can host a
cluster below the truncation order gives the infinite-lattice value.
Rectangles are keys ``(x1, x2, y1, y2)``; absent keys contribute zero.
"""

from __future__ import annotations

from itertools import product


def mobius_total(values: dict, length: int) -> list:
    """``sum(g(L))`` where ``F(L) = sum(g(L') for L' inside L)``."""
    keys = values.keys()
    total = [0] * length
    for (x1, x2, y1, y2), f in values.items():
        weight = 0
        for i, j, k, m in product((0, 1), repeat=4):
            if (x1 - i, x2 + j, y1 - k, y2 + m) in keys:
                weight += -1 if (i + j + k + m) & 1 else 1
        if weight:
            for d in range(length):
                total[d] += weight * f[d]
    return total


def series_quotient(num: list, den: list, length: int) -> list:
    """Integer power-series division; ``den[0]`` must be 1."""
    den = den + [0] * (length - len(den))
    num = num + [0] * (length - len(num))
    q = []
    for k in range(length):
        acc = num[k]
        for j in range(1, k + 1):
            if den[j]:
                acc -= den[j] * q[k - j]
        q.append(acc)
    return q


def log_derivative_int(p: list, length: int) -> list:
    """Coefficients of ``s p'(s) / p(s)`` for integer ``p`` with ``p[0] == 1``."""
    sp = [k * c for k, c in enumerate(p[:length])]
    return series_quotient(sp, p, length)


def exp_from_log_derivative(d: list, length: int) -> list:
    """The series ``r`` with ``r[0] = 1`` and ``s r'/r = d``."""
    r = [1] + [0] * (length - 1)
    for k in range(1, length):
        acc = 0
        for j in range(1, k + 1):
            if d[j]:
                acc += d[j] * r[k - j]
        q, rem = divmod(acc, k)
        if rem:
            raise ArithmeticError("non-integral coefficient in exponential")
        r[k] = q
    return r


def orbit_representatives(rects, symmetries):
    """One rectangle per orbit; returns ``{representative: [members]}``."""
    seen = {}
    for r in rects:
        if r in seen:
            continue
        orbit = {r}
        frontier = [r]
        while frontier:
            cur = frontier.pop()
            for g in symmetries:
                im = g(cur)
                if im not in orbit:
                    orbit.add(im)
                    frontier.append(im)
        members = [o for o in orbit if o in rects]
        rep = min(members, key=_sweep_key)
        for o in orbit:
            seen[o] = rep
    groups = {}
    for r, rep in seen.items():
        if r in rects:
            groups.setdefault(rep, []).append(r)
    return groups


def _sweep_key(rect):
    x1, x2, y1, y2 = rect
    if y2 - y1 <= x2 - x1:
        return (0, y1, y2, x1, x2)
    return (1, x1, x2, y1, y2)


def plan_sweeps(rects):
    """Group rectangles into strip sweeps along their longer side.

    Returns ``{(transposed, lo, hi, start): {end: rect}}`` where the strip
    spans rows ``lo..hi`` of the (possibly transposed) lattice and the sweep
    starts at column ``start``.
    """
    plan = {}
    for rect in rects:
        t, lo, hi, start, end = _sweep_key(rect)
        plan.setdefault((bool(t), lo, hi, start), {})[end] = rect
    return plan


def to_sweep_frame(points, transposed, start, lo):
    """Map lattice points into coordinates local to a strip sweep."""
    out = []
    for x, y in points:
        if transposed:
            x, y = y, x
        out.append((x - start, y - lo))
    return out


def evaluate_family(rects, symmetries, value, *, targets=(), cut_up=(), cut_right=(),
                    budget, state_cap):
    """Compute ``value(rect, even, odd)`` on every rectangle of a family.

    Only one rectangle per symmetry orbit is swept; the others inherit its
    value.  Returns ``(values, stats)``.
    """
    from . import _frontier

    rects = set(rects)
    groups = orbit_representatives(rects, symmetries)
    plan = plan_sweeps(groups)
    values = {}
    peak = 0
    for (transposed, lo, hi, start), ends in plan.items():
        width = max(ends) - start + 1
        tg = to_sweep_frame(targets, transposed, start, lo)
        if transposed:
            cu, cr = cut_right, cut_up
        else:
            cu, cr = cut_up, cut_right
        res = _frontier.sweep(hi - lo + 1, width, tg, budget,
                              cut_up=to_sweep_frame(cu, transposed, start, lo),
                              cut_right=to_sweep_frame(cr, transposed, start, lo),
                              state_cap=state_cap)
        peak = max(peak, res.peak_states)
        for end, rep in ends.items():
            col = end - start
            f = value(rep, res.even[col], res.odd[col])
            for member in groups[rep]:
                values[member] = f
    return values, {"states_peak": peak, "sweeps": len(plan), "rectangles": len(values)}
