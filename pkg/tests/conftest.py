import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")
    config.addinivalue_line("markers", "slow: Monte Carlo runs of more than a few seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args
    slot = _criteria.setdefault(n, {"title": title, "ok": True, "details": []})
    slot["ok"] &= rep.passed
    slot["details"] += [v for k, v in item.user_properties if k == "detail"]
    if rep.failed:
        slot["details"].append(f"{item.name} failed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        c = _criteria[n]
        line = f"criterion {n} {'PASS' if c['ok'] else 'FAIL'}: {c['title']}"
        if c["details"]:
            line += " | " + "; ".join(c["details"])
        terminalreporter.write_line(line)
