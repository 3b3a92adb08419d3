# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Must stay numerically interchangeable with _kernels_py."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

cnp.import_array()

BACKEND = "cython"


cdef inline void tridiag_apply(const double[::1] diag, const double[::1] off,
                               double complex[::1] x, double complex[::1] y,
                               Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(d):
        y[i] = diag[i] * x[i]
    for i in range(d - 1):
        y[i] = y[i] + off[i] * x[i + 1]
        y[i + 1] = y[i + 1] + off[i] * x[i]


def tridiag_matvec(const double[::1] diag, const double[::1] off, x):
    cdef double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef Py_ssize_t d = diag.shape[0]
    out = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] yv = out
    with nogil:
        tridiag_apply(diag, off, xv, yv, d)
    return out


cdef inline void taylor_term(const double[::1] diag, const double[::1] off,
                             double* tr, double* ti, double* nr, double* ni,
                             double* ar, double* ai, double s, Py_ssize_t d) noexcept nogil:
    # next term = (-i s) H term, accumulated into (ar, ai)
    cdef Py_ssize_t i
    cdef double hr, hi
    for i in range(d):
        hr = diag[i] * tr[i]
        hi = diag[i] * ti[i]
        if i > 0:
            hr += off[i - 1] * tr[i - 1]
            hi += off[i - 1] * ti[i - 1]
        if i < d - 1:
            hr += off[i] * tr[i + 1]
            hi += off[i] * ti[i + 1]
        nr[i] = s * hi
        ni[i] = -s * hr
        ar[i] += nr[i]
        ai[i] += ni[i]


def taylor_propagate(const double[::1] diag, const double[::1] off, psi0,
                     double tau, double tol, int order, long max_steps):
    """Adaptive Taylor-series integration of i dpsi/dtau = H psi.

    Returns (psi, accepted, rejected, status); status 0 ok, 1 step underflow,
    2 step budget exhausted.
    """
    cdef Py_ssize_t d = diag.shape[0], i
    psi_arr = np.array(psi0, dtype=np.complex128, copy=True)
    if tau <= 0.0 or d == 0:
        return psi_arr, 0, 0, 0
    buf_arr = np.empty((8, d), dtype=np.float64)
    cdef double[:, ::1] buf = buf_arr
    cdef double* pr = &buf[0, 0]
    cdef double* pi = &buf[1, 0]
    cdef double* ar = &buf[2, 0]
    cdef double* ai = &buf[3, 0]
    cdef double* tr = &buf[4, 0]
    cdef double* ti = &buf[5, 0]
    cdef double* nr = &buf[6, 0]
    cdef double* ni = &buf[7, 0]
    cdef double* swap
    cdef double t = 0.0, h, err, err2, e2, allowed, fac, bound = 0.0, hmin, row
    cdef long accepted = 0, rejected = 0
    cdef int k, status = 0
    cdef bint last

    buf_arr[0] = psi_arr.real
    buf_arr[1] = psi_arr.imag
    for i in range(d):
        row = fabs(diag[i])
        if i > 0:
            row += off[i - 1]
        if i < d - 1:
            row += off[i]
        if row > bound:
            bound = row
    h = tau if bound * tau <= 1.0 else 1.0 / bound
    hmin = 1e-14 * (tau if tau > 1.0 else 1.0)

    with nogil:
        while True:
            last = h >= tau - t
            if last:
                h = tau - t
            for i in range(d):
                tr[i] = pr[i]
                ti[i] = pi[i]
                ar[i] = pr[i]
                ai[i] = pi[i]
            for k in range(1, order + 1):
                taylor_term(diag, off, tr, ti, nr, ni, ar, ai, h / k, d)
                swap = tr; tr = nr; nr = swap
                swap = ti; ti = ni; ni = swap
            err2 = 0.0
            for i in range(d):
                e2 = tr[i] * tr[i] + ti[i] * ti[i]
                if e2 > err2:
                    err2 = e2
            err = sqrt(err2)
            allowed = tol * h / tau
            if err <= allowed:
                swap = pr; pr = ar; ar = swap
                swap = pi; pi = ai; ai = swap
                accepted += 1
                if last:
                    break
                t = t + h
            else:
                rejected += 1
            if err > 0.0:
                fac = 0.9 * pow(allowed / err, 1.0 / order)
            else:
                fac = 5.0
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
            h = h * fac
            if h < hmin:
                status = 1
                break
            if accepted + rejected >= max_steps:
                status = 2
                break
    out = np.empty(d, dtype=np.complex128)
    for i in range(d):
        out[i] = pr[i] + 1j * pi[i]
    return out, accepted, rejected, status


def distribution_moments(probs):
    """Per-row (total, mean, sum n(n-1)P, argmax, max) of a (T, d) array."""
    cdef double[:, ::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t rows = p.shape[0], d = p.shape[1], t, n
    total_a = np.empty(rows)
    mean_a = np.empty(rows)
    fact2_a = np.empty(rows)
    peak_n_a = np.empty(rows, dtype=np.int64)
    peak_p_a = np.empty(rows)
    cdef double[::1] total = total_a, mean = mean_a, fact2 = fact2_a, peak_p = peak_p_a
    cdef cnp.int64_t[::1] peak_n = peak_n_a
    cdef double s0, s1, s2, v, best
    cdef cnp.int64_t arg
    with nogil:
        for t in range(rows):
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            best = -1.0
            arg = 0
            for n in range(d):
                v = p[t, n]
                s0 += v
                s1 += n * v
                s2 += n * (n - 1.0) * v
                if v > best:
                    best = v
                    arg = n
            total[t] = s0
            mean[t] = s1
            fact2[t] = s2
            peak_n[t] = arg
            peak_p[t] = best
    return total_a, mean_a, fact2_a, peak_n_a, peak_p_a
