import os
import random

import pytest

from slowsync.core import Dfa
from slowsync.power import sync_length

FULL = os.environ.get("SLOWSYNC_BUDGET", "quick") == "full"


def pytest_collection_modifyitems(config, items):
    if FULL:
        return
    skip = pytest.mark.skip(reason="needs SLOWSYNC_BUDGET=full")
    for item in items:
        if "full" in item.keywords:
            item.add_marker(skip)


def random_symbol(rng, n):
    while True:
        t = tuple(rng.randrange(n) for _ in range(n))
        if t != tuple(range(n)):
            return t


def random_dfa(rng, n, k):
    """A DFA with about k random symbols (duplicates collapse)."""
    return Dfa(n, tuple({random_symbol(rng, n) for _ in range(k)}))


@pytest.fixture
def rng():
    return random.Random(20240611)


def extension_pair(rng, n):
    """A random DFA A and a synchronizing extension B of it."""
    while True:
        A = random_dfa(rng, n, rng.randint(0, 3))
        extra = {random_symbol(rng, n) for _ in range(rng.randint(1, 3))}
        B = Dfa(n, tuple(set(A.symbols) | extra))
        if len(B.symbols) > len(A.symbols) and sync_length(B) is not None:
            return A, B


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num = mark.args[0]
    if rep.skipped:
        _CRITERIA.setdefault(num, ("SKIP", item.name))
    elif rep.failed:
        _CRITERIA[num] = ("FAIL", item.name)
    elif rep.when == "call":
        _CRITERIA.setdefault(num, ("PASS", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        status, name = _CRITERIA[num]
        terminalreporter.write_line("criterion %2d: %s  (%s)" % (num, status, name))
