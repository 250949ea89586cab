import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _criteria[number] = (text, call.excinfo is None, call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        text, ok, dt = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  AC{number}  {text}  ({dt:.1f} s)")
