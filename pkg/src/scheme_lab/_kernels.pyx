# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels for 0/1 relation matrices."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef extern from *:
    """
    static inline int popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    """
    int popcount64(unsigned long long x) nogil


cdef cnp.ndarray _pack_rows(cnp.ndarray m):
    # pack each row of a 0/1 matrix into little-endian 64-bit words
    cdef cnp.ndarray bits = np.packbits(np.ascontiguousarray(m, dtype=np.uint8) != 0, axis=1, bitorder="little")
    cdef Py_ssize_t nbytes = bits.shape[1]
    cdef Py_ssize_t nwords = (nbytes + 7) // 8
    padded = np.zeros((bits.shape[0], nwords * 8), dtype=np.uint8)
    padded[:, :nbytes] = bits
    return np.ascontiguousarray(padded).view(np.uint64)


def zero_one_product(cnp.ndarray a_in, cnp.ndarray b_in):
    """Product of two 0/1 matrices as an int64 count matrix (popcount of packed rows)."""
    if a_in.shape[1] != b_in.shape[0]:
        raise ValueError("shape mismatch")
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] pa = _pack_rows(a_in)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] pb = _pack_rows(np.ascontiguousarray(b_in).T)
    cdef Py_ssize_t n = pa.shape[0], p = pb.shape[0], w = pa.shape[1], i, j, t
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((n, p), dtype=np.int64)
    cdef long long acc
    with nogil:
        for i in range(n):
            for j in range(p):
                acc = 0
                for t in range(w):
                    acc += popcount64(pa[i, t] & pb[j, t])
                out[i, j] = acc
    return out


def relation_constants(cnp.ndarray counts_in, cnp.ndarray labels_in, Py_ssize_t nlabels):
    """Check that ``counts`` is constant on each label class.

    Returns (values, bad) where values[k] is the constant on class k (or -1
    if the class is empty) and bad is None or ((r0, c0), (r1, c1)): two cells
    of one class holding different counts.
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=2] counts = np.ascontiguousarray(counts_in, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] labels = np.ascontiguousarray(labels_in, dtype=np.int64)
    cdef Py_ssize_t n = counts.shape[0], m = counts.shape[1], i, j, lab
    cdef cnp.ndarray[cnp.int64_t, ndim=1] values = np.full(nlabels, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] first_r = np.zeros(nlabels, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] first_c = np.zeros(nlabels, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(nlabels, dtype=np.uint8)
    for i in range(n):
        for j in range(m):
            lab = labels[i, j]
            if seen[lab] == 0:
                seen[lab] = 1
                values[lab] = counts[i, j]
                first_r[lab] = i
                first_c[lab] = j
            elif values[lab] != counts[i, j]:
                return values, ((int(first_r[lab]), int(first_c[lab])), (int(i), int(j)))
    return values, None
