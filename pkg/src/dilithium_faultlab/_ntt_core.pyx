# Hot kernels: number-theoretic transform over Z_q[x]/(x^256 + 1).
#
# Plain 64-bit modular arithmetic; operands stay below 2^23 so every
# intermediate product fits comfortably in int64.

import numpy as np

cimport cython
cimport numpy as cnp

cdef cnp.int64_t Q = 8380417
cdef int N = 256


def _bitrev8(int x):
    cdef int r = 0, i
    for i in range(8):
        r = (r << 1) | ((x >> i) & 1)
    return r


_ZETAS_NP = np.array([pow(1753, _bitrev8(i), 8380417) for i in range(256)],
                     dtype=np.int64)
_N_INV = pow(256, -1, 8380417)

cdef cnp.int64_t[::1] ZETAS = _ZETAS_NP
cdef cnp.int64_t N_INV = _N_INV


@cython.boundscheck(False)
@cython.wraparound(False)
def ntt_batch(cnp.int64_t[:, ::1] a):
    """In-place forward transform of each row of a (rows, 256) array."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t r, j, start
    cdef int length, k
    cdef cnp.int64_t zeta, t
    for r in range(rows):
        k = 0
        length = 128
        while length >= 1:
            start = 0
            while start < N:
                k += 1
                zeta = ZETAS[k]
                for j in range(start, start + length):
                    t = zeta * a[r, j + length] % Q
                    a[r, j + length] = (a[r, j] - t + Q) % Q
                    a[r, j] = (a[r, j] + t) % Q
                start += 2 * length
            length >>= 1


@cython.boundscheck(False)
@cython.wraparound(False)
def intt_batch(cnp.int64_t[:, ::1] a):
    """In-place inverse transform of each row, including the 1/256 scaling."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t r, j, start
    cdef int length, k
    cdef cnp.int64_t zeta, t
    for r in range(rows):
        k = 256
        length = 1
        while length < N:
            start = 0
            while start < N:
                k -= 1
                zeta = Q - ZETAS[k]
                for j in range(start, start + length):
                    t = a[r, j]
                    a[r, j] = (t + a[r, j + length]) % Q
                    a[r, j + length] = (t - a[r, j + length] + Q) * zeta % Q
                start += 2 * length
            length <<= 1
        for j in range(N):
            a[r, j] = a[r, j] * N_INV % Q


@cython.boundscheck(False)
@cython.wraparound(False)
def pointwise_batch(cnp.int64_t[:, ::1] a, cnp.int64_t[:, ::1] b,
                    cnp.int64_t[:, ::1] out):
    """out = a * b coefficient-wise mod Q, row by row."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t r, j
    for r in range(rows):
        for j in range(N):
            out[r, j] = a[r, j] * b[r, j] % Q
