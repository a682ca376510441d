import numpy as np
import pytest

from sspca import SymmetricMatrix


def random_symmetric(rng, dim, scale=1.0):
    a = rng.standard_normal((dim, dim)) * scale
    return (a + a.T) / 2


def random_psd(rng, dim, rows=None):
    x = rng.standard_normal((rows or 2 * dim, dim))
    return x.T @ x / x.shape[0]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_psd(rng):
    return SymmetricMatrix.from_dense(random_psd(rng, 12))


# Acceptance gate: one line per criterion, printed after the run.
ACCEPTANCE: dict = {}


class _Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title

    def check(self, ok: bool, detail: str):
        ACCEPTANCE[self.number] = f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'}  {self.title}: {detail}"
        assert ok, detail


@pytest.fixture
def criterion(request):
    number, title = request.node.get_closest_marker("criterion").args
    yield _Criterion(number, title)
    ACCEPTANCE.setdefault(number, f"criterion {number:>2} FAIL  {title}: raised before reporting")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
