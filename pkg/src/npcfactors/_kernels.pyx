# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels: Philox4x64-10 streams, AR(1) filtering and the
AR(1)-covariance matrix-vector product."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin, M_PI
from libc.stdint cimport uint64_t

cnp.import_array()

cdef extern from *:
    """
    typedef unsigned __int128 npcf_u128;
    static inline unsigned long long npcf_mulhilo(unsigned long long a,
                                                  unsigned long long b,
                                                  unsigned long long *hi) {
        npcf_u128 p = (npcf_u128)a * (npcf_u128)b;
        *hi = (unsigned long long)(p >> 64);
        return (unsigned long long)p;
    }
    """
    unsigned long long npcf_mulhilo(unsigned long long a, unsigned long long b,
                                    unsigned long long *hi) nogil

cdef uint64_t M0 = 0xD2E7470EE14C6C93ULL
cdef uint64_t M1 = 0xCA5A826395121157ULL
cdef uint64_t W0 = 0x9E3779B97F4A7C15ULL
cdef uint64_t W1 = 0xBB67AE8584CAA73BULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline void _philox(uint64_t *c, uint64_t k0, uint64_t k1) noexcept nogil:
    cdef uint64_t hi0, lo0, hi1, lo1
    cdef int rnd
    for rnd in range(10):
        if rnd:
            k0 += W0
            k1 += W1
        lo0 = npcf_mulhilo(M0, c[0], &hi0)
        lo1 = npcf_mulhilo(M1, c[2], &hi1)
        c[0], c[1], c[2], c[3] = hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0


def philox4x64(counters, key):
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] c = np.array(
        counters, dtype=np.uint64, copy=True).reshape(-1, 4)
    cdef uint64_t k0 = <uint64_t>int(key[0])
    cdef uint64_t k1 = <uint64_t>int(key[1])
    cdef Py_ssize_t m, nb = c.shape[0]
    cdef uint64_t buf[4]
    with nogil:
        for m in range(nb):
            buf[0] = c[m, 0]; buf[1] = c[m, 1]; buf[2] = c[m, 2]; buf[3] = c[m, 3]
            _philox(buf, k0, k1)
            c[m, 0] = buf[0]; c[m, 1] = buf[1]; c[m, 2] = buf[2]; c[m, 3] = buf[3]
    return c


def gaussian_grid(key0, key1, stream, Py_ssize_t n_rows, Py_ssize_t n_cols):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n_rows, n_cols))
    cdef uint64_t k0 = <uint64_t>int(key0)
    cdef uint64_t k1 = <uint64_t>int(key1)
    cdef uint64_t s = <uint64_t>int(stream)
    cdef Py_ssize_t t, b, lane, col, n_blocks = (n_cols + 3) // 4
    cdef uint64_t buf[4]
    cdef double z[4]
    cdef double u1, u2, rad
    with nogil:
        for t in range(n_rows):
            for b in range(n_blocks):
                buf[0] = s; buf[1] = <uint64_t>t; buf[2] = <uint64_t>b; buf[3] = 0
                _philox(buf, k0, k1)
                for lane in range(0, 4, 2):
                    u1 = (<double>(buf[lane] >> 11) + 1.0) * INV_2_53
                    u2 = <double>(buf[lane + 1] >> 11) * INV_2_53
                    rad = sqrt(-2.0 * log(u1))
                    z[lane] = rad * cos(2.0 * M_PI * u2)
                    z[lane + 1] = rad * sin(2.0 * M_PI * u2)
                for lane in range(4):
                    col = 4 * b + lane
                    if col < n_cols:
                        out[t, col] = z[lane]
    return out


def uniform_grid(key0, key1, Py_ssize_t n_rows, Py_ssize_t n_cols):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n_rows, n_cols))
    cdef uint64_t k0 = <uint64_t>int(key0)
    cdef uint64_t k1 = <uint64_t>int(key1)
    cdef Py_ssize_t i, j
    cdef uint64_t buf[4]
    with nogil:
        for i in range(n_rows):
            for j in range(n_cols):
                buf[0] = <uint64_t>i; buf[1] = <uint64_t>j; buf[2] = 0; buf[3] = 0
                _philox(buf, k0, k1)
                out[i, j] = <double>(buf[0] >> 11) * INV_2_53
    return out


def ar1_filter(z, double rho, double sigma):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] zz = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t T = zz.shape[0], n = zz.shape[1], t, i
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((T, n))
    cdef double scale = sigma * sqrt(1.0 - rho * rho)
    with nogil:
        for t in range(T):
            if n == 0:
                break
            out[t, 0] = sigma * zz[t, 0]
            for i in range(1, n):
                out[t, i] = zz[t, i] * scale + rho * out[t, i - 1]
    return out


def kms_matvec(v, double rho, double sigma):
    arr = np.asarray(v, dtype=np.float64)
    squeeze = arr.ndim == 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = np.ascontiguousarray(
        arr.reshape(arr.shape[0], -1))
    cdef Py_ssize_t n = x.shape[0], k = x.shape[1], i, c
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, k))
    cdef double acc, s2 = sigma * sigma
    with nogil:
        for c in range(k):
            if n == 0:
                break
            acc = 0.0
            for i in range(n):
                acc = x[i, c] + rho * acc
                out[i, c] = acc
            acc = 0.0
            for i in range(n - 1, -1, -1):
                acc = x[i, c] + rho * acc
                out[i, c] = s2 * (out[i, c] + acc - x[i, c])
    return out[:, 0].copy() if squeeze else out
