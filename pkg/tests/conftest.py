import functools

import pytest

from hptransmission import AnnularGeometry
from hptransmission.pipeline import RunConfig, run_single


@pytest.fixture(scope="session")
def geom():
    return AnnularGeometry(1.0, 2.0, 3.0)


@functools.lru_cache(maxsize=None)
def cached_run(eps, p, case="const", **kw):
    return run_single(RunConfig(case=case, **kw), eps, p)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    results = item.config._criteria
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if failed or n not in results:
        results[n] = (title, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter, config):
    results = config._criteria
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        title, status = results[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
