# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled phase-recursion kernels.

Semantics are defined by the pure-NumPy twin ``_phase_np``; the two must
agree to floating-point roundoff.  One step per reflection coefficient:

    psi <- psi + theta - 2*atan2(Im w, Re w),    w = 1 - alpha*exp(i*psi).
"""

import numpy as np

from libc.math cimport atan2, cos, sin

ctypedef double complex cplx

ctypedef fused coeff:
    double
    cplx


cdef inline double _step(double psi, double theta, double ar, double ai) noexcept nogil:
    cdef double c = cos(psi)
    cdef double s = sin(psi)
    cdef double wr = 1.0 - (ar * c - ai * s)
    cdef double wi = -(ar * s + ai * c)
    return psi + theta - 2.0 * atan2(wi, wr)


def terminal(double[::1] thetas, coeff[::1] alphas):
    """Terminal phase psi_m(theta_j) for one path; returns shape (J,)."""
    cdef Py_ssize_t J = thetas.shape[0]
    cdef Py_ssize_t m = alphas.shape[0]
    out_arr = np.empty(J, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j, k
    cdef double psi, th
    with nogil:
        for j in range(J):
            th = thetas[j]
            psi = th
            for k in range(m):
                if coeff is double:
                    psi = _step(psi, th, alphas[k], 0.0)
                else:
                    psi = _step(psi, th, alphas[k].real, alphas[k].imag)
            out[j] = psi
    return out_arr


def terminal_batch(double[::1] thetas, coeff[:, ::1] alphas):
    """Terminal phases for a batch of paths; alphas (B, m) -> psi (B, J)."""
    cdef Py_ssize_t J = thetas.shape[0]
    cdef Py_ssize_t B = alphas.shape[0]
    cdef Py_ssize_t m = alphas.shape[1]
    out_arr = np.empty((B, J), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t b, j, k
    cdef double psi, th
    with nogil:
        for b in range(B):
            for j in range(J):
                th = thetas[j]
                psi = th
                for k in range(m):
                    if coeff is double:
                        psi = _step(psi, th, alphas[b, k], 0.0)
                    else:
                        psi = _step(psi, th, alphas[b, k].real, alphas[b, k].imag)
                out[b, j] = psi
    return out_arr


def history(double[::1] thetas, coeff[::1] alphas):
    """Full trajectory psi_k(theta_j) for k = 0..m; returns shape (m+1, J)."""
    cdef Py_ssize_t J = thetas.shape[0]
    cdef Py_ssize_t m = alphas.shape[0]
    out_arr = np.empty((m + 1, J), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t j, k
    cdef double psi, th
    with nogil:
        for j in range(J):
            th = thetas[j]
            psi = th
            out[0, j] = psi
            for k in range(m):
                if coeff is double:
                    psi = _step(psi, th, alphas[k], 0.0)
                else:
                    psi = _step(psi, th, alphas[k].real, alphas[k].imag)
                out[k + 1, j] = psi
    return out_arr


def bisect_targets(double[::1] lo, double[::1] hi, double[::1] targets,
                   coeff[::1] alphas, double tol, int max_iter):
    """Bisect theta -> psi_m(theta) to the target levels on given brackets.

    Assumes psi is increasing in theta with psi(lo_r) < target_r <= psi(hi_r)
    for every row r.  Returns the bracket midpoints once every bracket is
    narrower than tol.
    """
    cdef Py_ssize_t R = lo.shape[0]
    cdef Py_ssize_t m = alphas.shape[0]
    out_arr = np.empty(R, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t r, k
    cdef int it
    cdef double a, b, mid, psi, tgt
    with nogil:
        for r in range(R):
            a = lo[r]
            b = hi[r]
            tgt = targets[r]
            it = 0
            while b - a > tol and it < max_iter:
                mid = 0.5 * (a + b)
                psi = mid
                for k in range(m):
                    if coeff is double:
                        psi = _step(psi, mid, alphas[k], 0.0)
                    else:
                        psi = _step(psi, mid, alphas[k].real, alphas[k].imag)
                if psi < tgt:
                    a = mid
                else:
                    b = mid
                it += 1
            out[r] = 0.5 * (a + b)
    return out_arr
