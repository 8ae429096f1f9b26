from functools import lru_cache

import pytest

from gonplex.gf import tower_for_order
from gonplex.plane import build_pg2
from gonplex.pointline import search_bijection, trace_bijection
from gonplex.triples import enumerate_triples


@lru_cache(maxsize=None)
def pg2(q):
    return build_pg2(tower_for_order(q))


@lru_cache(maxsize=None)
def basic_bijection(q):
    """Trace bijection where it certifies, searched bijection otherwise."""
    if q == 3:
        return search_bijection(pg2(q))
    return trace_bijection(tower_for_order(q), pg2(q))


@lru_cache(maxsize=None)
def triple_set(q):
    return enumerate_triples(pg2(q), basic_bijection(q))


FANO_TEXT = """\
# the Fano plane, hand-listed
plane fano order 2
L0: p0 p1 p2
L1: p0 p3 p4
L2: p0 p5 p6
L3: p1 p3 p5
L4: p1 p4 p6
L5: p2 p3 p6
L6: p2 p4 p5
"""


@pytest.fixture
def fano_text():
    return FANO_TEXT


# -- acceptance summary -------------------------------------------------------

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    n, title = marker.args
    entry = _criteria.setdefault(n, [title, []])
    entry[1].append((item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, results = _criteria[n]
        ok = all(passed for _, passed in results)
        line = f"criterion {n:>2} {title}: {'PASS' if ok else 'FAIL'}"
        failed = [name for name, passed in results if not passed]
        if failed:
            line += "  (failed: " + ", ".join(failed) + ")"
        terminalreporter.write_line(line)
