import time
from contextlib import contextmanager

import pytest

_LINES = {}
_START = time.monotonic()

# property suites summarized as acceptance criterion 10: (file, test name prefix)
PROPERTY_SUITES = {
    "series ring axioms": [("test_series.py", "test_ring_axioms")],
    "reversion round-trips": [("test_series.py", "test_reversion_round_trip")],
    "window doubling (ht)": [("test_ht.py", "test_window_doubling"), ("test_ht.py", "test_flm_padding_invariance")],
    "window doubling (lt)": [("test_lt.py", "test_window_doubling"), ("test_lt.py", "test_flm_padding_invariance")],
    "parity and evenness": [("test_ht.py", "test_parity_and_even_coefficients"), ("test_ht.py", "test_sign_reversal"),
                            ("test_lt.py", "test_odd_z_powers_vanish")],
    "brute-force equivalence": [("test_ht.py", "test_bruteforce_matches_window"),
                                ("test_lt.py", "test_spin_bruteforce_matches_contours")],
    "mutation sensitivity": [("test_painleve.py", "test_mutation_is_detected")],
}
_PROPERTY_OUTCOMES = {}


def _suite_of(nodeid):
    path, _, name = nodeid.partition("::")
    fname = path.rsplit("/", 1)[-1]
    name = name.split("[", 1)[0]
    for suite, members in PROPERTY_SUITES.items():
        if (fname, name) in members:
            return suite
    return None


def pytest_runtest_logreport(report):
    suite = _suite_of(report.nodeid)
    if suite is None:
        return
    if report.when == "call" or report.outcome == "failed":
        _PROPERTY_OUTCOMES.setdefault(suite, []).append(report.outcome)


class _Record:
    def __init__(self, number, title):
        self.number, self.title, self.detail = number, title, ""


@contextmanager
def _criterion(number, title):
    rec = _Record(number, title)
    t0 = time.monotonic()
    try:
        yield rec
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        _LINES[number] = f"FAIL  {number:>2}. {title}: {msg}"
        raise
    took = time.monotonic() - t0
    detail = f" ({rec.detail})" if rec.detail else ""
    _LINES[number] = f"PASS  {number:>2}. {title}{detail} [{took:.1f} s]"


@pytest.fixture(scope="session")
def criterion():
    return _criterion


def _property_line(elapsed):
    if not _PROPERTY_OUTCOMES:
        return None
    missing = [s for s in PROPERTY_SUITES if s not in _PROPERTY_OUTCOMES]
    failed = [s for s, outs in _PROPERTY_OUTCOMES.items() if any(o != "passed" for o in outs)]
    runs = sum(len(v) for v in _PROPERTY_OUTCOMES.values())
    title = "Property suites"
    if missing or failed or elapsed >= 600:
        why = "; ".join(filter(None, [
            f"failed: {', '.join(failed)}" if failed else "",
            f"not run: {', '.join(missing)}" if missing else "",
            f"session took {elapsed:.0f} s" if elapsed >= 600 else "",
        ]))
        return f"FAIL  10. {title}: {why}"
    return f"PASS  10. {title} ({len(PROPERTY_SUITES)} groups, {runs} test runs green; session {elapsed:.0f} s < 600 s)"


def pytest_terminal_summary(terminalreporter):
    lines = dict(_LINES)
    prop = _property_line(time.monotonic() - _START)
    if prop:
        lines[10] = prop
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
