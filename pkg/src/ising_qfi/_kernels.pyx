# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled product-state kernels; see ``_fallback`` for the reference versions."""

import numpy as np

from libc.math cimport cos, sin
from scipy.linalg.cython_blas cimport zhemv


cdef void _fill_product(const double[::1] thetas, const double[::1] phis,
                        double complex[::1] psi) noexcept nogil:
    cdef Py_ssize_t n = thetas.shape[0]
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t i, idx
    cdef double complex a0, a1, v
    psi[0] = 1.0
    for i in range(n):
        a0 = cos(0.5 * thetas[i])
        a1 = (cos(phis[i]) + 1j * sin(phis[i])) * sin(0.5 * thetas[i])
        # site i becomes the next less significant bit; walk down to write in place
        for idx in range(size - 1, -1, -1):
            v = psi[idx]
            psi[2 * idx + 1] = v * a1
            psi[2 * idx] = v * a0
        size *= 2


def product_state(const double[::1] thetas, const double[::1] phis):
    cdef Py_ssize_t n = thetas.shape[0]
    if phis.shape[0] != n:
        raise ValueError("thetas and phis differ in length")
    out = np.empty(1 << n, dtype=np.complex128)
    cdef double complex[::1] psi = out
    with nogil:
        _fill_product(thetas, phis, psi)
    return out


def product_variance(const double[::1] thetas, const double[::1] phis, const double complex[::1, :] op):
    """``<psi|A^2|psi> - <psi|A|psi>^2`` for Hermitian ``A`` in Fortran order."""
    cdef Py_ssize_t n = thetas.shape[0]
    cdef int dim = 1 << n
    if phis.shape[0] != n:
        raise ValueError("thetas and phis differ in length")
    if op.shape[0] != dim or op.shape[1] != dim:
        raise ValueError("operator does not match the product-state dimension")
    psi_arr = np.empty(dim, dtype=np.complex128)
    y_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] psi = psi_arr
    cdef double complex[::1] y = y_arr
    cdef double complex one = 1.0, zero = 0.0
    cdef int inc = 1
    cdef char uplo = b'U'
    cdef double mean = 0.0, second = 0.0
    cdef Py_ssize_t i
    with nogil:
        _fill_product(thetas, phis, psi)
        zhemv(&uplo, &dim, &one, <double complex*> &op[0, 0], &dim, &psi[0], &inc, &zero, &y[0], &inc)
        for i in range(dim):
            mean += psi[i].real * y[i].real + psi[i].imag * y[i].imag
            second += y[i].real * y[i].real + y[i].imag * y[i].imag
    return second - mean * mean
