import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--long-run", action="store_true", default=False,
                     help="run expensive checks (v >= 14 sweeps, n = 14, 16 tables)")


def pytest_configure(config):
    config.addinivalue_line("markers", "long_run: expensive checks, enabled by --long-run")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long-run"):
        return
    skip = pytest.mark.skip(reason="needs --long-run")
    for item in items:
        if "long_run" in item.keywords:
            item.add_marker(skip)
