import re

_ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match or report.when not in ("setup", "call"):
        return
    num = int(match.group(1))
    ok = report.passed and _ACCEPTANCE.get(num, ("", True))[1]
    if report.when == "call" or not report.passed:
        _ACCEPTANCE[num] = (match.group(2).replace("_", " "), ok)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        name, ok = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {name}")
