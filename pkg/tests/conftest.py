import os

# Keep the suite single-process unless a test asks otherwise.
os.environ.setdefault("OPSF_THREADS", "1")


def pytest_terminal_summary(terminalreporter):
    from opsf.acceptance import LAST_RESULTS

    if not LAST_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(LAST_RESULTS):
        terminalreporter.write_line(LAST_RESULTS[k].line())
    passed = sum(r.passed for r in LAST_RESULTS.values())
    terminalreporter.write_line(f"{passed}/{len(LAST_RESULTS)} acceptance criteria passed")
