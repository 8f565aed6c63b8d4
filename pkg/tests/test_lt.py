import pytest

from isingser import _frontier
from isingser.errors import OrderTooSmall, WindowTooLarge
from isingser.ht import CorrelationId
from isingser.lt import (
    CutPath,
    _u_series,
    lt_compute,
    lt_flm_zcoefficients,
    lt_series_bruteforce,
    lt_series_connected,
    lt_series_full,
    lt_window_zcoefficients,
    magnetization_squared,
    ratio_series,
)
from isingser.series import TruncatedSeries, Var
from isingser.transforms import bracket

ROW = CorrelationId.row


def test_row1_printed_terms():
    s = lt_series_full(ROW(1), 10)
    assert [s[e] for e in range(11)] == [1, 0, -4, -12, -36, -120, -448, -1820, -7844, -35256, -163484]


def test_magnetization_squared():
    m = magnetization_squared(11)
    want = [1, 0, -4, -16, -64, -272, -1228, -5792, -28192, -140448, -712276, -3663664]
    assert [m[e] for e in range(12)] == want
    assert magnetization_squared(1) == TruncatedSeries.one(Var.u, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_full_matches_msq_through_n_plus_1(n):
    conn = lt_series_connected(ROW(n), n + 4)
    assert conn.valuation() == n + 2 and conn.leading() == 4


def test_connected_row2():
    conn = lt_series_connected(ROW(2), 11)
    assert [conn[e] for e in range(4, 8)] == [4, 48, 368, 2320]
    with pytest.raises(OrderTooSmall):
        lt_series_connected(ROW(2), 3)


def test_ratio_brackets():
    assert bracket(ratio_series(ROW(1), 6) - 1)[:3] == [1, 7, 42]
    assert bracket(ratio_series(ROW(2), 7) - 1)[:3] == [1, 12, 96]
    assert ratio_series(ROW(3), 6)[0] == 1


def test_trivial_and_small_orders():
    assert lt_series_full(CorrelationId.general(0, 0), 4) == TruncatedSeries.one(Var.u, 4)
    with pytest.raises(OrderTooSmall):
        lt_series_full(ROW(1), 1)


def test_odd_z_powers_vanish():
    zc, _ = lt_flm_zcoefficients(ROW(2), 7)
    assert not any(zc[1::2])
    with pytest.raises(ArithmeticError):
        _u_series([1, 1, 0], 1)


def test_cut_length_equals_separation():
    for n in range(1, 5):
        assert len(CutPath.straight(ROW(n))) == n


@pytest.mark.parametrize("cid,depth", [(ROW(2), 1), (ROW(3), 2), (CorrelationId.general(2, 1), 1),
                                       (CorrelationId.diagonal(1), 2)])
def test_cut_homology(cid, depth):
    order = 8
    straight, _ = lt_flm_zcoefficients(cid, order)
    detour, _ = lt_flm_zcoefficients(cid, order, cut=CutPath.detour(cid, depth))
    assert straight == detour


@pytest.mark.parametrize("cid,order", [(ROW(1), 8), (ROW(2), 8), (CorrelationId.general(2, 1), 7)])
def test_flm_padding_invariance(cid, order):
    base, _ = lt_flm_zcoefficients(cid, order, padding=0)
    assert lt_flm_zcoefficients(cid, order, padding=1)[0] == base
    assert lt_flm_zcoefficients(cid, order, padding=2)[0] == base


@pytest.mark.parametrize("cid,order", [(ROW(1), 5), (ROW(2), 5), (CorrelationId.general(2, 1), 5)])
def test_window_doubling(cid, order):
    pad = order - 1
    small = lt_compute(cid, order, method="window", padding=pad)[0]
    big = lt_compute(cid, order, method="window", padding=2 * pad)[0]
    assert small == big == lt_series_full(cid, order)


@pytest.mark.parametrize("cid,xr,yr,order", [
    (ROW(1), (-1, 2), (-1, 1), 8),
    (ROW(2), (-1, 3), (-1, 1), 8),
    (CorrelationId.general(2, 1), (-1, 2), (-2, 2), 9),
    (CorrelationId.diagonal(1), (0, 1), (0, 1), 6),
])
def test_spin_bruteforce_matches_contours(cid, xr, yr, order):
    spins = lt_series_bruteforce(cid, order, xr, yr)
    rect = (xr[0] - 1, xr[1], yr[0] - 1, yr[1])
    zc, _ = lt_window_zcoefficients(cid, order, rect)
    assert spins == _u_series(zc, order)


def test_spin_partition_function_is_even_subgraph_count():
    # fixed-boundary spin configurations <-> closed subgraphs of the dual block
    import numpy as np

    xr, yr, budget = (0, 2), (0, 2), 16
    sites = [(x, y) for x in range(xr[0], xr[1] + 1) for y in range(yr[0], yr[1] + 1)]
    index = {p: i for i, p in enumerate(sites)}
    cfg = np.arange(1 << len(sites))
    unsat = np.zeros_like(cfg)
    for (x, y), i in index.items():
        bi = (cfg >> i) & 1
        for nb in ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)):
            j = index.get(nb)
            if j is None:
                unsat += bi
            elif j > i:
                unsat += bi ^ ((cfg >> j) & 1)
    hist = np.bincount(unsat, minlength=budget + 1)[: budget + 1]
    res = _frontier.sweep(yr[1] - yr[0] + 2, xr[1] - xr[0] + 2, (), budget)
    assert [int(c) for c in hist] == [int(c) for c in res.even[-1]]


def test_spin_bruteforce_limits():
    with pytest.raises(WindowTooLarge):
        lt_series_bruteforce(ROW(1), 4, (-2, 2), (-2, 2))


def test_monotone_in_separation():
    u = 0.1
    vals = [lt_series_full(ROW(n), 12).evaluate(u) for n in range(1, 5)]
    msq = magnetization_squared(12).evaluate(u)
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= msq


def test_general_offset_symmetry():
    a = lt_series_full(CorrelationId.general(2, 1), 8)
    b = lt_series_full(CorrelationId.general(1, 2), 8)
    assert a == b
    assert [a[e] for e in range(9)] == [1, 0, -4, -16, -64, -248, -968, -3920, -16632]


def test_provenance_fields():
    _, prov = lt_compute(ROW(2), 6)
    assert prov["oracle"] == "lt" and prov["cut"] == "straight" and prov["order"] == 6
