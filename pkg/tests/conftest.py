import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    failed = report.failed
    if report.when == "call" or failed:
        previous = _CRITERIA.get(key, "PASS")
        _CRITERIA[key] = "FAIL" if failed or previous == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, slug), outcome in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num:2d} {outcome}  {slug.replace('_', ' ')}")
