from __future__ import annotations


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.TITLES):
        terminalreporter.write_line(mod.summary_line(num))
