import numpy as np
import pytest

from rydlz import model
from rydlz.app.scenarios import ScenarioConfig, required_hold, run_pair_coherent, run_pair_dissipative


def random_unitary(rng, n=2):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(rng, n=4, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, n=4):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def _coherent(v0, v, hold=0.0):
    cfg = ScenarioConfig("pair-coherent", model.SweepSchedule(v=v, v0=v0), hold_time=hold)
    return run_pair_coherent(cfg)


@pytest.fixture(scope="session")
def fig4_run():
    return _coherent(0.5, 2.42)


@pytest.fixture(scope="session")
def fig4_strong_run():
    return _coherent(2.0, 2.42)


@pytest.fixture(scope="session")
def weak_run():
    # long enough hold to show five maxima
    return _coherent(0.1, 5.0, hold=320.0)


@pytest.fixture(scope="session")
def dissipative_run():
    cfg = ScenarioConfig("pair-dissipative", model.SweepSchedule(v=2.42, v0=0.5),
                         dissipation=model.DissipationSpec(0.05), output_stride=20,
                         hold_time=60.0, discord_every=5)
    return run_pair_dissipative(cfg)


@pytest.fixture(scope="session")
def lossless_lindblad_run():
    # same sweep and sample grid as fig4_run, no decay
    sch = model.SweepSchedule(v=2.42, v0=0.5)
    cfg = ScenarioConfig("pair-dissipative", sch, dissipation=model.DissipationSpec(0.0),
                         output_stride=10, hold_time=required_hold(sch, 0.0), discord_every=10)
    return run_pair_dissipative(cfg)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
