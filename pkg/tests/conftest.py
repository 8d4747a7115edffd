import pytest
from hypothesis import HealthCheck, settings

from freedecomp import registry

settings.register_profile("repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# outcomes of acceptance tests, keyed by criterion number
_criteria: dict[int, list[str]] = {}


@pytest.fixture(scope="session")
def presheaves():
    """Every registered presheaf example at its default budget."""
    return {name: registry.get(name).presheaf() for name in registry.presheaf_examples()}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    rep = outcome.get_result()
    if m is not None and (rep.when == "call" or rep.outcome != "passed"):
        _criteria.setdefault(m.args[0], []).append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        verdict = "PASS" if all(o == "passed" for o in _criteria[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}")
