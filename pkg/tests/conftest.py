import random

import pytest

from tropbbs.bbs import BBSState


def random_state(rng, nmax=4, mmax=4, vmax=4, a_min=0):
    """Random integer state: every row of W sums to the same B, A uniform in [a_min, B]."""
    N, M = rng.randint(1, nmax), rng.randint(1, mmax)
    first = [rng.randint(0, vmax) for _ in range(M)]
    B = sum(first)
    rows = [first]
    for _ in range(N - 1):
        while True:
            row = [rng.randint(0, vmax) for _ in range(M - 1)]
            last = B - sum(row)
            if 0 <= last <= vmax:
                rows.append(row + [last])
                break
    return BBSState(N, M, rows, rng.randint(min(a_min, B), B))


def random_states(seed, count, **kw):
    rng = random.Random(seed)
    return [random_state(rng, **kw) for _ in range(count)]


@pytest.fixture
def rng():
    return random.Random(20240607)


# --- acceptance report -------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    mark = _criterion_marks.get(report.nodeid)
    if mark is not None:
        _criteria[mark] = "PASS" if report.outcome == "passed" else "FAIL"


_criterion_marks = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_marks[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), verdict in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {num} {verdict}: {title}")
