import random

import pytest
from hypothesis import strategies as st

from gbtree.tree import DegreeSequence


def small_sequences(max_k=5, max_d=4):
    """Hypothesis strategy for degree sequences whose trees stay small."""
    return st.lists(st.integers(2, max_d), min_size=1, max_size=max_k - 1).map(
        lambda ds: DegreeSequence(tuple(ds)))


def random_sample(count=30, max_k=5, max_d=4, seed=20240611):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(2, max_k)
        out.append(DegreeSequence(tuple(rng.randint(2, max_d) for _ in range(k - 1))))
    return out


@pytest.fixture
def counterexample6():
    return DegreeSequence((5, 3, 5, 3, 2))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    results = item.config._acceptance
    if report.when == "call" or (report.when == "setup" and report.failed):
        results[number] = (title, report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed = results[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {number:>2}. {title}")
