"""Pure-Python/numpy kernels; reference behaviour for the compiled ones."""
import numpy as np

BACKEND = "python"


def tridiag_matvec(diag, off, x):
    x = np.asarray(x, dtype=np.complex128)
    y = diag * x
    if diag.shape[0] > 1:
        y[:-1] += off * x[1:]
        y[1:] += off * x[:-1]
    return y


def _gershgorin(diag, off):
    radius = np.zeros_like(diag)
    if diag.shape[0] > 1:
        radius[:-1] += off
        radius[1:] += off
    return float(np.max(np.abs(diag) + radius)) if diag.shape[0] else 0.0


def taylor_propagate(diag, off, psi0, tau, tol, order, max_steps):
    """Adaptive Taylor-series integration of i dpsi/dtau = H psi.

    Returns (psi, accepted, rejected, status); status 0 ok, 1 step underflow,
    2 step budget exhausted.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    psi = np.array(psi0, dtype=np.complex128, copy=True)
    if tau <= 0.0 or diag.shape[0] == 0:
        return psi, 0, 0, 0
    bound = _gershgorin(diag, off)
    h = tau if bound * tau <= 1.0 else 1.0 / bound
    hmin = 1e-14 * max(tau, 1.0)
    t = 0.0
    accepted = rejected = 0
    status = 0
    while True:
        last = h >= tau - t
        if last:
            h = tau - t
        term = psi.copy()
        acc = psi.copy()
        for k in range(1, order + 1):
            term = (-1j * h / k) * tridiag_matvec(diag, off, term)
            acc += term
        err = float(np.max(np.abs(term)))
        allowed = tol * h / tau
        if err <= allowed:
            psi = acc
            accepted += 1
            if last:
                break
            t = t + h
        else:
            rejected += 1
        fac = 0.9 * (allowed / err) ** (1.0 / order) if err > 0.0 else 5.0
        h *= min(5.0, max(0.2, fac))
        if h < hmin:
            status = 1
            break
        if accepted + rejected >= max_steps:
            status = 2
            break
    return psi, accepted, rejected, status


def distribution_moments(probs):
    """Per-row (total, mean, sum n(n-1)P, argmax, max) of a (T, d) array."""
    p = np.asarray(probs, dtype=np.float64)
    n = np.arange(p.shape[1], dtype=float)
    return (
        p.sum(axis=1),
        p @ n,
        p @ (n * (n - 1.0)),
        np.argmax(p, axis=1).astype(np.int64),
        p.max(axis=1),
    )
