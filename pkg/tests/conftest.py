"""Session-wide fixtures: the acceptance-criteria recorder and its report."""

import pytest


class AcceptanceLog:
    """One recorded verdict per acceptance criterion, printed after the run."""

    def __init__(self):
        self.entries = {}

    def record(self, criterion, description, passed, detail=""):
        self.entries[criterion] = (description, bool(passed), detail)


def pytest_configure(config):
    config.acceptance_log = AcceptanceLog()


@pytest.fixture(scope="session")
def acceptance(request):
    """Recorder that acceptance tests use to log their verdict line."""
    return request.config.acceptance_log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = getattr(config, "acceptance_log", None)
    if log is None or not log.entries:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(log.entries):
        description, passed, detail = log.entries[criterion]
        status = "PASS" if passed else "FAIL"
        line = f"{status}  {criterion}: {description}"
        if detail:
            line = f"{line}  [{detail}]"
        terminalreporter.write_line(line, green=passed, red=not passed)
