import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from burgers_lyapunov import CaseLabel, ProblemSpec  # noqa: E402

# one spec per stationary family, all with nu = 1, l = 1
CASE_SPECS = {
    CaseLabel.TRIG_COT: ProblemSpec(1.0, 1.0, -1.0, 1.0),
    CaseLabel.RATIONAL: ProblemSpec(1.0, 1.0, -2.0, -1.0),
    CaseLabel.HYPER_COTH: ProblemSpec(1.0, 1.0, 2.0, 3.0),
    CaseLabel.CONSTANT: ProblemSpec(1.0, 1.0, 2.0, 2.0),
    CaseLabel.HYPER_TANH: ProblemSpec(1.0, 1.0, 1.0, -1.0),
}

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=list(CASE_SPECS), ids=lambda c: f"case_{c.value}")
def case_spec(request):
    return request.param, CASE_SPECS[request.param]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
