"""Both kernel backends must agree with each other and with direct numpy."""
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import expm

from dickestat import _kernels_py, build_effective_hamiltonian, dicke_state, kernels

from conftest import BACKENDS, backend_module


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from dickestat import kernels; print(kernels.BACKEND)"],
        env={**os.environ, "DICKESTAT_PURE_PYTHON": "1"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
def test_compiled_backend_is_default():
    assert kernels.BACKEND == "cython" or os.environ.get("DICKESTAT_PURE_PYTHON") == "1"


def _h(two_j=41, two_m=5, delta=2.5):
    h = build_effective_hamiltonian(dicke_state(two_j, two_m, delta))
    return np.ascontiguousarray(h.diag), np.ascontiguousarray(h.offdiag), h.dense()


@pytest.mark.parametrize("name", BACKENDS)
def test_tridiag_matvec(name, rng):
    diag, off, dense = _h()
    x = rng.normal(size=diag.size) + 1j * rng.normal(size=diag.size)
    np.testing.assert_allclose(backend_module(name).tridiag_matvec(diag, off, x), dense @ x, rtol=1e-13, atol=1e-12)


@pytest.mark.parametrize("name", BACKENDS)
def test_taylor_against_expm(name):
    diag, off, dense = _h()
    psi0 = np.zeros(diag.size, dtype=complex)
    psi0[0] = 1.0
    psi, acc, rej, status = backend_module(name).taylor_propagate(diag, off, psi0, 1.3, 1e-11, 12, 10**6)
    assert status == 0 and acc > 0
    np.testing.assert_allclose(psi, expm(-1.3j * dense) @ psi0, atol=1e-10, rtol=0)


@pytest.mark.parametrize("name", BACKENDS)
def test_taylor_step_budget(name):
    diag, off, _ = _h()
    psi0 = np.eye(diag.size, dtype=complex)[0]
    *_, status = backend_module(name).taylor_propagate(diag, off, psi0, 50.0, 1e-12, 12, 3)
    assert status == 2


@pytest.mark.parametrize("name", BACKENDS)
def test_taylor_zero_time(name):
    diag, off, _ = _h()
    psi0 = np.eye(diag.size, dtype=complex)[0]
    psi, acc, rej, status = backend_module(name).taylor_propagate(diag, off, psi0, 0.0, 1e-10, 12, 10)
    np.testing.assert_array_equal(psi, psi0)
    assert (acc, rej, status) == (0, 0, 0)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="extension not built")
def test_backends_agree_on_taylor():
    diag, off, _ = _h(101, 1, 7.0)
    psi0 = np.eye(diag.size, dtype=complex)[0]
    a = backend_module("python").taylor_propagate(diag, off, psi0, 2.0, 1e-10, 12, 10**6)
    b = backend_module("cython").taylor_propagate(diag, off, psi0, 2.0, 1e-10, 12, 10**6)
    assert a[1:] == b[1:]
    np.testing.assert_allclose(a[0], b[0], atol=1e-13, rtol=0)


@pytest.mark.parametrize("name", BACKENDS)
def test_distribution_moments(name, rng):
    p = rng.random((7, 13))
    p /= p.sum(axis=1, keepdims=True)
    total, mean, fact2, peak_n, peak_p = backend_module(name).distribution_moments(p)
    n = np.arange(13)
    np.testing.assert_allclose(total, 1.0, rtol=1e-14)
    np.testing.assert_allclose(mean, p @ n, rtol=1e-13)
    np.testing.assert_allclose(fact2, p @ (n * (n - 1)), rtol=1e-13)
    np.testing.assert_array_equal(peak_n, p.argmax(axis=1))
    np.testing.assert_array_equal(peak_p, p.max(axis=1))


def test_moments_single_column():
    total, mean, fact2, peak_n, peak_p = _kernels_py.distribution_moments(np.ones((3, 1)))
    np.testing.assert_array_equal(mean, 0.0)
    np.testing.assert_array_equal(peak_n, 0)
