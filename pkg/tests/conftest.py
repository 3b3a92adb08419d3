import numpy as np
import pytest

from dickestat import _kernels_py, kernels

BACKENDS = ["python"]
try:
    from dickestat import _kernels as _compiled

    BACKENDS.append("cython")
except ImportError:  # extension not built
    _compiled = None


def backend_module(name):
    return _kernels_py if name == "python" else _compiled


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = backend_module(request.param)
    for fn in ("tridiag_matvec", "taylor_propagate", "distribution_moments"):
        monkeypatch.setattr(kernels, fn, getattr(mod, fn))
    monkeypatch.setattr(kernels, "BACKEND", mod.BACKEND)
    return mod


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


ACCEPTANCE_LINES = []


@pytest.fixture
def accept():
    """Record one pass/fail line for an acceptance criterion."""

    def record(criterion, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  [{detail}]" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
