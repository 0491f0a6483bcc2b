import pytest

_acceptance_lines: list[str] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "acceptance" not in getattr(report, "keywords", {}):
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
    _acceptance_lines.append(f"ACCEPTANCE {name}: {status}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)


@pytest.fixture
def portable():
    from regexpassport.dialects import Dialect

    return Dialect.PORTABLE_CORE
