import pytest

from gafcells import energysim

ACCEPTANCE_LINES = []
SIM_RUNS = []

_run_simulation = energysim.run_simulation


def _checked_run(config):
    # every simulation in the suite passes through here so conservation is
    # asserted on all of them, not just on the ones a test inspects
    res = _run_simulation(config)
    err = res.energy_balance_error()
    SIM_RUNS.append(err)
    assert err <= 1e-9, f"energy not conserved: relative error {err:.3e}"
    return res


@pytest.fixture(autouse=True)
def _conservation_guard(monkeypatch):
    monkeypatch.setattr(energysim, "run_simulation", _checked_run)


@pytest.fixture
def acceptance_line():
    def record(number, ok, text):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":").rstrip("ab"))):
        terminalreporter.write_line(line)
    if SIM_RUNS:
        terminalreporter.write_line(
            f"energy conservation checked on all {len(SIM_RUNS)} simulation runs in this session, "
            f"max relative imbalance {max(SIM_RUNS):.1e}")
