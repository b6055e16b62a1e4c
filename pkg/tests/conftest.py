import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    card = getattr(mod, "SCORECARD", None)
    if not card:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(card):
        terminalreporter.write_line(card[n])
