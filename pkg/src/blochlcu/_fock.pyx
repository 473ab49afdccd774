# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled ladder-string kernel; same contract as ``_fock_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline int _parity(long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c ^= 1
    return c


def ladder_terms_coo(int n_modes, ops, daggers, lengths, coefs):
    cdef cnp.int64_t[:, :] o = np.ascontiguousarray(ops, dtype=np.int64)
    cdef cnp.int64_t[:, :] dg = np.ascontiguousarray(daggers, dtype=np.int64)
    cdef cnp.int64_t[:] ln = np.ascontiguousarray(lengths, dtype=np.int64)
    cdef double complex[:] cf = np.ascontiguousarray(coefs, dtype=np.complex128)
    cdef Py_ssize_t nterms = cf.shape[0]
    cdef long long dim = 1LL << n_modes
    cdef Py_ssize_t cap = nterms * dim
    rows_a = np.empty(cap, dtype=np.int64)
    cols_a = np.empty(cap, dtype=np.int64)
    vals_a = np.empty(cap, dtype=np.complex128)
    cdef cnp.int64_t[:] rows = rows_a
    cdef cnp.int64_t[:] cols = cols_a
    cdef double complex[:] vals = vals_a
    cdef Py_ssize_t t, i, nnz = 0
    cdef long long b, state
    cdef int pos, bit, sign, alive
    with nogil:
        for t in range(nterms):
            if cf[t] == 0:
                continue
            for b in range(dim):
                state = b
                sign = 1
                alive = 1
                for i in range(ln[t] - 1, -1, -1):
                    pos = n_modes - 1 - <int>o[t, i]
                    bit = (state >> pos) & 1
                    if bit == dg[t, i]:
                        alive = 0
                        break
                    if _parity(state >> (pos + 1)):
                        sign = -sign
                    state ^= (1LL << pos)
                if alive:
                    rows[nnz] = state
                    cols[nnz] = b
                    vals[nnz] = cf[t] * sign
                    nnz += 1
    return rows_a[:nnz].copy(), cols_a[:nnz].copy(), vals_a[:nnz].copy()
