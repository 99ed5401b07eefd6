import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    """Echo one pass/fail line per acceptance criterion in the summary."""
    outcome = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m:
                n = int(m.group(1))
                line = "PASS" if status == "passed" else "FAIL"
                outcome[n] = line
    if outcome:
        terminalreporter.write_line("")
        for n in sorted(outcome):
            terminalreporter.write_line("criterion %d: %s" % (n, outcome[n]))
