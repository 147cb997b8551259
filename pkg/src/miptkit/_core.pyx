# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tableau kernels; see miptkit._kernels_py for the reference
semantics.  Identical layout and bit conventions, loops in C."""

import numpy as np

cimport cython
from libc.stdint cimport int64_t, uint8_t, uint64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND_NAME = "compiled"


cdef inline int64_t _popcount_row(uint64_t[:, ::1] a, Py_ssize_t r, Py_ssize_t w_cnt) nogil:
    cdef int64_t total = 0
    cdef Py_ssize_t w
    for w in range(w_cnt):
        total += __builtin_popcountll(a[r, w])
    return total


def apply_lookup1(uint64_t[:, ::1] X, uint64_t[:, ::1] Z, uint8_t[::1] signs,
                  Py_ssize_t site, const uint8_t[::1] perm, const uint8_t[::1] sign):
    cdef Py_ssize_t w = site >> 6
    cdef int b = site & 63
    cdef uint64_t bit = (<uint64_t>1) << b
    cdef Py_ssize_t r, nrows = X.shape[0]
    cdef int k, kk
    for r in range(nrows):
        k = <int>(((X[r, w] >> b) & 1) + 2 * ((Z[r, w] >> b) & 1))
        kk = perm[k]
        signs[r] ^= sign[k]
        X[r, w] = (X[r, w] & ~bit) | ((<uint64_t>(kk & 1)) << b)
        Z[r, w] = (Z[r, w] & ~bit) | ((<uint64_t>((kk >> 1) & 1)) << b)


def apply_lookup2(uint64_t[:, ::1] X, uint64_t[:, ::1] Z, uint8_t[::1] signs,
                  Py_ssize_t site_a, Py_ssize_t site_b,
                  const uint8_t[::1] perm, const uint8_t[::1] sign):
    cdef Py_ssize_t wa = site_a >> 6, wb = site_b >> 6
    cdef int ba = site_a & 63, bb = site_b & 63
    cdef uint64_t bita = (<uint64_t>1) << ba
    cdef uint64_t bitb = (<uint64_t>1) << bb
    cdef Py_ssize_t r, nrows = X.shape[0]
    cdef int k, kk
    for r in range(nrows):
        k = <int>(((X[r, wa] >> ba) & 1) + 2 * ((Z[r, wa] >> ba) & 1)
                  + 4 * ((X[r, wb] >> bb) & 1) + 8 * ((Z[r, wb] >> bb) & 1))
        kk = perm[k]
        signs[r] ^= sign[k]
        X[r, wa] = (X[r, wa] & ~bita) | ((<uint64_t>(kk & 1)) << ba)
        Z[r, wa] = (Z[r, wa] & ~bita) | ((<uint64_t>((kk >> 1) & 1)) << ba)
        X[r, wb] = (X[r, wb] & ~bitb) | ((<uint64_t>((kk >> 2) & 1)) << bb)
        Z[r, wb] = (Z[r, wb] & ~bitb) | ((<uint64_t>((kk >> 3) & 1)) << bb)


cdef inline void _rowmult_one(uint64_t[:, ::1] X, uint64_t[:, ::1] Z,
                              uint8_t[::1] signs, Py_ssize_t i, Py_ssize_t p,
                              Py_ssize_t w_cnt) nogil:
    cdef int64_t y_i = 0, y_p = 0, cross = 0, y_new = 0, c
    cdef Py_ssize_t w
    for w in range(w_cnt):
        y_i += __builtin_popcountll(X[i, w] & Z[i, w])
        y_p += __builtin_popcountll(X[p, w] & Z[p, w])
        cross += __builtin_popcountll(Z[i, w] & X[p, w])
        X[i, w] ^= X[p, w]
        Z[i, w] ^= Z[p, w]
        y_new += __builtin_popcountll(X[i, w] & Z[i, w])
    c = (y_i + y_p + 2 * cross - y_new) % 4
    if c < 0:
        c += 4
    signs[i] ^= signs[p] ^ <uint8_t>(c >> 1)


def measure_prepare(uint64_t[:, ::1] X, uint64_t[:, ::1] Z, Py_ssize_t n,
                    Py_ssize_t site):
    cdef Py_ssize_t w = site >> 6
    cdef int b = site & 63
    cdef Py_ssize_t r
    for r in range(n, 2 * n):
        if (X[r, w] >> b) & 1:
            return r
    return -1


def measure_update_random(uint64_t[:, ::1] X, uint64_t[:, ::1] Z,
                          uint8_t[::1] signs, Py_ssize_t n, Py_ssize_t site,
                          Py_ssize_t pivot, int outcome):
    cdef Py_ssize_t w = site >> 6
    cdef int b = site & 63
    cdef Py_ssize_t r, w_cnt = X.shape[1]
    for r in range(2 * n):
        if r == pivot or r == pivot - n:
            continue
        if (X[r, w] >> b) & 1:
            _rowmult_one(X, Z, signs, r, pivot, w_cnt)
    for r in range(w_cnt):
        X[pivot - n, r] = X[pivot, r]
        Z[pivot - n, r] = Z[pivot, r]
        X[pivot, r] = 0
        Z[pivot, r] = 0
    signs[pivot - n] = signs[pivot]
    Z[pivot, w] = (<uint64_t>1) << b
    signs[pivot] = <uint8_t>outcome


def measure_deterministic(uint64_t[:, ::1] X, uint64_t[:, ::1] Z,
                          uint8_t[::1] signs, Py_ssize_t n, Py_ssize_t site):
    cdef Py_ssize_t w = site >> 6
    cdef int b = site & 63
    cdef Py_ssize_t r, k, w_cnt = X.shape[1]
    cdef int64_t phase = 0, y_cur, y_r, cross, y_new
    cdef int sbit = 0
    cdef uint64_t[::1] sx = np.zeros(w_cnt, dtype=np.uint64)
    cdef uint64_t[::1] sz = np.zeros(w_cnt, dtype=np.uint64)
    for r in range(n):
        if not (X[r, w] >> b) & 1:
            continue
        y_cur = 0
        y_r = 0
        cross = 0
        y_new = 0
        for k in range(w_cnt):
            y_cur += __builtin_popcountll(sx[k] & sz[k])
            y_r += __builtin_popcountll(X[r + n, k] & Z[r + n, k])
            cross += __builtin_popcountll(sz[k] & X[r + n, k])
            sx[k] ^= X[r + n, k]
            sz[k] ^= Z[r + n, k]
            y_new += __builtin_popcountll(sx[k] & sz[k])
        phase = (phase + y_cur + y_r + 2 * cross - y_new) % 4
        if phase < 0:
            phase += 4
        sbit ^= signs[r + n]
    return sbit ^ <int>(phase >> 1)


def rank_left_half(uint64_t[:, ::1] X, uint64_t[:, ::1] Z, Py_ssize_t n):
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t wh = (half + 63) // 64
    cdef int rem = <int>(half & 63)
    m_np = np.zeros((n, 2 * wh), dtype=np.uint64)
    cdef uint64_t[:, ::1] m = m_np
    cdef Py_ssize_t r, w
    cdef uint64_t mask
    for r in range(n):
        for w in range(wh):
            m[r, w] = X[r + n, w]
            m[r, wh + w] = Z[r + n, w]
    if rem:
        mask = ((<uint64_t>1) << rem) - 1
        for r in range(n):
            m[r, wh - 1] &= mask
            m[r, 2 * wh - 1] &= mask
    cdef Py_ssize_t rank = 0, piv, i
    cdef int b, bits
    cdef uint64_t tmp
    for w in range(2 * wh):
        bits = rem if rem and (w + 1) % wh == 0 else 64
        for b in range(bits):
            piv = -1
            for r in range(rank, n):
                if (m[r, w] >> b) & 1:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for i in range(2 * wh):
                    tmp = m[rank, i]
                    m[rank, i] = m[piv, i]
                    m[piv, i] = tmp
            for r in range(rank + 1, n):
                if (m[r, w] >> b) & 1:
                    for i in range(2 * wh):
                        m[r, i] ^= m[rank, i]
            rank += 1
            if rank == n:
                return rank - half
    return rank - half


def compose_layers(const uint8_t[:, ::1] perms, const uint8_t[:, ::1] signs):
    cdef Py_ssize_t n_layers = perms.shape[0]
    perm_np = np.arange(16, dtype=np.uint8)
    sign_np = np.zeros(16, dtype=np.uint8)
    cdef uint8_t[::1] perm = perm_np
    cdef uint8_t[::1] sign = sign_np
    cdef Py_ssize_t l, k
    cdef uint8_t buf_p[16]
    cdef uint8_t buf_s[16]
    for l in range(n_layers):
        for k in range(16):
            buf_s[k] = sign[k] ^ signs[l, perm[k]]
            buf_p[k] = perms[l, perm[k]]
        for k in range(16):
            perm[k] = buf_p[k]
            sign[k] = buf_s[k]
    return perm_np, sign_np
