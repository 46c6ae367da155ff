from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("acceptance")
    if marker is None:
        return
    number, title = marker
    detail = dict(report.user_properties).get("detail", "")
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE[number] = ("PASS" if report.passed else "FAIL", title, detail)


@pytest.fixture(autouse=True)
def _acceptance_tag(request, record_property):
    marker = request.node.get_closest_marker("acceptance")
    if marker is not None:
        record_property("acceptance", tuple(marker.args))


@pytest.fixture
def detail(record_property):
    """Attach a one-line summary to the acceptance report."""
    return lambda text: record_property("detail", text)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, text = _ACCEPTANCE[number]
        line = f"criterion {number:2d} {status}: {title}"
        terminalreporter.write_line(f"{line} ({text})" if text else line)
