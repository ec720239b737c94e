import re
import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")

_acceptance = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    path, _, name = report.nodeid.partition("::")
    if not path.endswith("test_acceptance.py") or not name.startswith("test_criterion_"):
        return
    number = int(re.match(r"test_criterion_(\d+)", name).group(1))
    ok = report.outcome == "passed"
    _acceptance[number] = _acceptance.get(number, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if _acceptance[number] else 'FAIL'}")
