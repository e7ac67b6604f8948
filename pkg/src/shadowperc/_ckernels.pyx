# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same contracts as :mod:`shadowperc._pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

NAME = "cython"


cdef inline double _slope(const double* y, Py_ssize_t u, Py_ssize_t v) noexcept nogil:
    return (y[v] - y[u]) / <double>(v - u)


cdef int _hull_row(const double* y, Py_ssize_t n, double* out, Py_ssize_t* off,
                   Py_ssize_t* stack) noexcept nogil:
    # Right-to-left sweep over the upper hull of (v, y[v]); stack top is the
    # leftmost hull vertex.
    cdef Py_ssize_t top, u, h0, h1
    stack[0] = n - 1
    top = 1
    for u in range(n - 2, -1, -1):
        while top >= 2:
            h0 = stack[top - 1]
            h1 = stack[top - 2]
            if _slope(y, u, h0) < _slope(y, u, h1):
                top -= 1
            else:
                break
        h0 = stack[top - 1]
        out[u] = _slope(y, u, h0)
        off[u] = h0 - u
        # drop vertices collinear with the new point; the least one was reported
        while top >= 2:
            h0 = stack[top - 1]
            h1 = stack[top - 2]
            if _slope(y, u, h0) <= _slope(y, u, h1):
                top -= 1
            else:
                break
        stack[top] = u
        top += 1
    return 0


def suffix_max_slope(row):
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] y = np.ascontiguousarray(row, dtype=np.float64)
    cdef Py_ssize_t n = y.shape[0]
    if n < 2:
        raise ValueError("row must have at least 2 entries")
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] out = np.empty(n - 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] off = np.empty(n - 1, dtype=np.int64)
    cdef Py_ssize_t* stack = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t* offbuf = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t i
    if stack == NULL or offbuf == NULL:
        free(stack)
        free(offbuf)
        raise MemoryError()
    with nogil:
        _hull_row(&y[0], n, &out[0], offbuf, stack)
        for i in range(n - 1):
            off[i] = offbuf[i]
    free(stack)
    free(offbuf)
    return out, off


def truncated_max_slope(rows, Py_ssize_t width, Py_ssize_t horizon):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] y = np.ascontiguousarray(rows, dtype=np.float64)
    cdef Py_ssize_t nrows = y.shape[0], n = y.shape[1]
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if width < 1 or width > n - 1:
        raise ValueError("width must satisfy 1 <= width <= ncols - 1")
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] alpha = np.empty((nrows, width), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] off = np.empty((nrows, width), dtype=np.int64)
    cdef double* full = <double*> malloc(n * sizeof(double))
    cdef Py_ssize_t* fulloff = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t* stack = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t j, u, r, rmax, best_r
    cdef double best, s
    cdef const double* yr
    if full == NULL or fulloff == NULL or stack == NULL:
        free(full)
        free(fulloff)
        free(stack)
        raise MemoryError()
    with nogil:
        for j in range(nrows):
            yr = &y[j, 0]
            _hull_row(yr, n, full, fulloff, stack)
            for u in range(width):
                rmax = horizon
                if rmax > n - 1 - u:
                    rmax = n - 1 - u
                if fulloff[u] <= rmax:
                    # least full-suffix maximizer lies inside the horizon
                    alpha[j, u] = full[u]
                    off[j, u] = fulloff[u]
                    continue
                best = _slope(yr, u, u + 1)
                best_r = 1
                for r in range(2, rmax + 1):
                    s = _slope(yr, u, u + r)
                    if s > best:
                        best = s
                        best_r = r
                alpha[j, u] = best
                off[j, u] = best_r
    free(full)
    free(fulloff)
    free(stack)
    return alpha, off


def next_smaller_or_equal(values):
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] a = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] nxt = np.empty(n, dtype=np.int64)
    if n == 0:
        return nxt
    cdef Py_ssize_t* stack = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t top = 0, u
    if stack == NULL:
        raise MemoryError()
    with nogil:
        for u in range(n - 1, -1, -1):
            while top > 0 and a[stack[top - 1]] > a[u]:
                top -= 1
            nxt[u] = stack[top - 1] if top > 0 else -1
            stack[top] = u
            top += 1
    free(stack)
    return nxt


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef inline void _union(Py_ssize_t* parent, Py_ssize_t* size, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a == b:
        return
    if size[a] < size[b]:
        a, b = b, a
    parent[b] = a
    size[a] += size[b]


def label_components(mask, bint star):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t H = m.shape[0], W = m.shape[1], N = H * W
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] labels = np.zeros((H, W), dtype=np.int32)
    if N == 0:
        return labels, 0
    cdef Py_ssize_t* parent = <Py_ssize_t*> malloc(N * sizeof(Py_ssize_t))
    cdef Py_ssize_t* size = <Py_ssize_t*> malloc(N * sizeof(Py_ssize_t))
    cdef Py_ssize_t* rootlabel = <Py_ssize_t*> malloc(N * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, j, k, root, count = 0
    if parent == NULL or size == NULL or rootlabel == NULL:
        free(parent)
        free(size)
        free(rootlabel)
        raise MemoryError()
    with nogil:
        for k in range(N):
            parent[k] = k
            size[k] = 1
            rootlabel[k] = 0
        for j in range(H):
            for i in range(W):
                if not m[j, i]:
                    continue
                k = j * W + i
                if i > 0 and m[j, i - 1]:
                    _union(parent, size, k, k - 1)
                if j > 0:
                    if m[j - 1, i]:
                        _union(parent, size, k, k - W)
                    if star:
                        if i > 0 and m[j - 1, i - 1]:
                            _union(parent, size, k, k - W - 1)
                        if i < W - 1 and m[j - 1, i + 1]:
                            _union(parent, size, k, k - W + 1)
        for j in range(H):
            for i in range(W):
                if not m[j, i]:
                    continue
                root = _find(parent, j * W + i)
                if rootlabel[root] == 0:
                    count += 1
                    rootlabel[root] = count
                labels[j, i] = <cnp.int32_t> rootlabel[root]
    free(parent)
    free(size)
    free(rootlabel)
    return labels, count
