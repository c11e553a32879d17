# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector and Euclid kernels.

Qubit ``k`` is bit ``k`` of the basis index.  Every amplitude kernel mutates
a contiguous complex128 buffer in place; callers own the copy.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline Py_ssize_t _insert_zero(Py_ssize_t k, Py_ssize_t lower) nogil:
    # spread k around a zero bit whose value is lower + 1
    return ((k & ~lower) << 1) | (k & lower)


def apply_1q(cplx[::1] amps, int bit, cplx m00, cplx m01, cplx m10, cplx m11):
    cdef Py_ssize_t half = amps.shape[0] >> 1
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << bit
    cdef Py_ssize_t lower = stride - 1
    cdef Py_ssize_t k, i0, i1
    cdef double a_re, a_im, b_re, b_im
    cdef double p_re = m00.real, p_im = m00.imag, q_re = m01.real, q_im = m01.imag
    cdef double r_re = m10.real, r_im = m10.imag, s_re = m11.real, s_im = m11.imag
    with nogil:
        for k in range(half):
            i0 = _insert_zero(k, lower)
            i1 = i0 | stride
            a_re = amps[i0].real
            a_im = amps[i0].imag
            b_re = amps[i1].real
            b_im = amps[i1].imag
            amps[i0].real = p_re * a_re - p_im * a_im + q_re * b_re - q_im * b_im
            amps[i0].imag = p_re * a_im + p_im * a_re + q_re * b_im + q_im * b_re
            amps[i1].real = r_re * a_re - r_im * a_im + s_re * b_re - s_im * b_im
            amps[i1].imag = r_re * a_im + r_im * a_re + s_re * b_im + s_im * b_re


def apply_cphase(cplx[::1] amps, int bit_a, int bit_b, cplx phase):
    cdef int lo = bit_a if bit_a < bit_b else bit_b
    cdef int hi = bit_b if bit_a < bit_b else bit_a
    cdef Py_ssize_t lo_mask = ((<Py_ssize_t>1) << lo) - 1
    cdef Py_ssize_t hi_mask = ((<Py_ssize_t>1) << hi) - 1
    cdef Py_ssize_t both = ((<Py_ssize_t>1) << lo) | ((<Py_ssize_t>1) << hi)
    cdef Py_ssize_t quarter = amps.shape[0] >> 2
    cdef Py_ssize_t k, i
    cdef double re, im, c = phase.real, s = phase.imag
    with nogil:
        for k in range(quarter):
            i = _insert_zero(_insert_zero(k, lo_mask), hi_mask) | both
            re = amps[i].real
            im = amps[i].imag
            amps[i].real = c * re - s * im
            amps[i].imag = c * im + s * re


def apply_cnot(cplx[::1] amps, int control, int target):
    cdef int lo = control if control < target else target
    cdef int hi = target if control < target else control
    cdef Py_ssize_t lo_mask = ((<Py_ssize_t>1) << lo) - 1
    cdef Py_ssize_t hi_mask = ((<Py_ssize_t>1) << hi) - 1
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << control
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << target
    cdef Py_ssize_t quarter = amps.shape[0] >> 2
    cdef Py_ssize_t k, i, j
    cdef cplx tmp
    with nogil:
        for k in range(quarter):
            i = _insert_zero(_insert_zero(k, lo_mask), hi_mask) | cbit
            j = i | tbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


def register_probabilities(const cplx[::1] amps, int offset, int width):
    cdef Py_ssize_t n = amps.shape[0]
    cdef Py_ssize_t mask = ((<Py_ssize_t>1) << width) - 1
    out = np.zeros((<Py_ssize_t>1) << width, dtype=np.float64)
    cdef double[::1] p = out
    cdef Py_ssize_t i
    cdef cplx z
    with nogil:
        for i in range(n):
            z = amps[i]
            p[(i >> offset) & mask] += z.real * z.real + z.imag * z.imag
    return out


def gcd_trace_lengths(long a_max, long b_max):
    out = np.empty((a_max, b_max), dtype=np.int32)
    cdef int[:, ::1] rows = out
    cdef long a, b, x, y, t
    cdef int count
    with nogil:
        for a in range(1, a_max + 1):
            for b in range(1, b_max + 1):
                x = a
                y = b
                count = 1
                while y != 0:
                    t = x % y
                    x = y
                    y = t
                    count += 1
                rows[a - 1, b - 1] = count
    return out
