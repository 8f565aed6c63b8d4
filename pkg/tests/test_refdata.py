import hashlib
import json
import math
from fractions import Fraction

import pytest

from isingser.errors import IsingSeriesError, OutOfRange, UnknownLabel
from isingser.ht import CorrelationId
from isingser.refdata import (
    _load,
    bn,
    check,
    checksum,
    critical_value,
    golden,
    labels,
    numeric_from_series,
    pn,
    table_entry,
    table_value,
)

ROW = CorrelationId.row


def test_fixture_catalogue():
    names = labels()
    assert len(names) == 37 and "Msq_taylor" in names
    assert all(f"r{n}{kind}_taylor" in names for n in range(1, 7) for kind in ("v", "kkg", "u", "kl"))


def test_checksum_matches_content():
    doc = _load()
    body = json.dumps({"series": doc["series"], "tables": doc["tables"]}, sort_keys=True, separators=(",", ":"))
    assert hashlib.sha256(body.encode()).hexdigest() == checksum()


def test_golden_lookup():
    g = golden("r1v_taylor")
    assert g.cid == ROW(1) and [g.coefficient(e) for e in (1, 3, 5)] == [1, 2, 4]
    assert g.coefficient(2) == 0
    with pytest.raises(IndexError):
        g.coefficient(g.known_through + 1)
    with pytest.raises(UnknownLabel) as info:
        golden("r9v_taylor")
    assert str(info.value) == "unknown label 'r9v_taylor'"


def test_ambiguous_coefficient_resolved_by_oracle():
    g = golden("r2kl_taylor")
    assert set(g.ambiguous[10]) == {-16864, -27392}
    with pytest.raises(IsingSeriesError):
        g.coefficient(10)
    res = check("r2kl_taylor")
    assert res.ok and res.resolved[10][0] == -16864


@pytest.mark.parametrize("label", ["r1v_taylor", "r3kkg_taylor", "r2u_conn_taylor", "r1kl_conn_taylor",
                                   "r4u_taylor", "Msq_taylor"])
def test_fixtures_rederive(label):
    assert check(label).ok


@pytest.mark.parametrize("n,value", [(1, "0.707107"), (2, "0.594715"), (3, "0.535790"),
                                     (4, "0.497989"), (5, "0.470724"), (6, "0.449637")])
def test_critical_values(n, value):
    assert critical_value(n) == value


def test_critical_value_closed_forms():
    assert float(critical_value(2, 15)) == pytest.approx(1 - 4 / math.pi ** 2, abs=1e-15)
    assert critical_value(1, 20) == "0.70710678118654752440"
    with pytest.raises(OutOfRange):
        critical_value(7)


def test_amplitude_constants():
    assert [pn(n) for n in range(1, 7)] == [0, 1, 2, 4, 6, 9]
    assert [bn(n) for n in range(1, 7)] == [1, 1, 1, Fraction(1, 9), Fraction(1, 81), Fraction(1, 18225)]
    with pytest.raises(OutOfRange):
        bn(0)


def test_table_lookup():
    assert table_value("high", 1, 6) == 0.4496
    assert table_value("high", 0.1, 1) == 0.1621
    assert table_value("low", 0.3, 2) == 0.9769
    assert table_entry("high", 0.2, "v").canonical == 0.2134
    with pytest.raises(OutOfRange):
        table_value("high", 0.25, 1)
    with pytest.raises(OutOfRange):
        table_value("middle", 0.1, 1)


def test_table_corrections_keep_raw_text():
    e = table_entry("low", 0.3, 4)
    assert e.raw == "09767." and e.canonical == 0.9767 and e.note
    assert table_entry("low", 0, 3).canonical == 1
    assert table_entry("low", 0.2, 2).canonical == 0.9899


def test_critical_row_matches_closed_forms():
    for which in ("high", "low"):
        for n in range(1, 7):
            assert table_value(which, 1, n) == float(critical_value(n, 4))


def test_numeric_from_series():
    assert numeric_from_series(ROW(2), "high", 0).value == 0
    assert numeric_from_series(ROW(2), "low", 0).value == 1
    est = numeric_from_series(ROW(2), "low", 0.3, order=18)
    assert est.value == pytest.approx(0.9769, abs=5e-5) and est.last_term < 1e-9
    value, tail = numeric_from_series(ROW(2), "high", 0.1)
    assert value == pytest.approx(0.02746, abs=5e-6) and tail < 1e-10
    with pytest.raises(OutOfRange):
        numeric_from_series(ROW(1), "high", 1.0)
