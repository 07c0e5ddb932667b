# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: product-eigenvalue enumeration and lattice convolution.

The pure-Python twin lives in ``_kernels_py``; ``backend`` picks one at
import time.  Both expose the same two functions with identical semantics.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp, fabs, log
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

cnp.import_array()

BACKEND_NAME = "compiled"


cdef inline int _grow(double** y, int** c, long long** parent, int** inc,
                      long long* cap) except -1:
    cdef long long newcap = cap[0] * 2
    y[0] = <double*> realloc(y[0], newcap * sizeof(double))
    c[0] = <int*> realloc(c[0], newcap * sizeof(int))
    parent[0] = <long long*> realloc(parent[0], newcap * sizeof(long long))
    inc[0] = <int*> realloc(inc[0], newcap * sizeof(int))
    if y[0] == NULL or c[0] == NULL or parent[0] == NULL or inc[0] == NULL:
        raise MemoryError()
    cap[0] = newcap
    return 0


def enumerate_products(double[::1] step, double y_root,
                       long long count_target, double mass_target,
                       long long cap, bint want_indices):
    """Best-first enumeration of product eigenvalues in non-increasing order.

    ``step[j] = |ln omega_j|``; ``y_root = sum_j |ln(1 - omega_j)|`` is the
    log-magnitude of the largest eigenvalue.  Emits eigenvalues by increasing
    ``y = |ln lambda|`` until the count target or the cumulative-mass target
    is met.  Returns ``(y_values, cum_mass, hit_cap, indices_or_None)``.
    """
    cdef long long d = step.shape[0]
    cdef long long store_cap = 1024
    cdef double* ny = <double*> malloc(store_cap * sizeof(double))
    cdef int* nc = <int*> malloc(store_cap * sizeof(int))
    cdef long long* npar = <long long*> malloc(store_cap * sizeof(long long))
    cdef int* ninc = <int*> malloc(store_cap * sizeof(int))
    cdef long long heap_cap = 1024
    cdef long long* heap = <long long*> malloc(heap_cap * sizeof(long long))
    cdef long long out_cap = 1024
    cdef long long* out = <long long*> malloc(out_cap * sizeof(long long))
    if ny == NULL or nc == NULL or npar == NULL or ninc == NULL or heap == NULL or out == NULL:
        free(ny); free(nc); free(npar); free(ninc); free(heap); free(out)
        raise MemoryError()

    cdef long long n_nodes = 0, heap_n = 0, m = 0
    cdef double mass_sum = 0.0, mass_comp = 0.0, mass_now = 0.0
    cdef bint hit_cap = False, stopped = False
    cdef long long node, child, pos, parent_pos, a, b, r, cur
    cdef double yv, t, v
    cdef int ci, i
    cdef double[::1] y_view
    cdef cnp.int32_t[:, ::1] idx_view

    # root: all-ones multi-index, any coordinate may be incremented
    ny[0] = y_root; nc[0] = <int>(d - 1); npar[0] = -1; ninc[0] = -1
    n_nodes = 1
    heap[0] = 0; heap_n = 1

    try:
        while heap_n > 0:
            # pop min (y, id)
            node = heap[0]
            heap_n -= 1
            if heap_n > 0:
                heap[0] = heap[heap_n]
                pos = 0
                while True:
                    a = 2 * pos + 1
                    if a >= heap_n:
                        break
                    b = a + 1
                    if b < heap_n and (ny[heap[b]] < ny[heap[a]] or
                                       (ny[heap[b]] == ny[heap[a]] and heap[b] < heap[a])):
                        a = b
                    if (ny[heap[a]] < ny[heap[pos]] or
                            (ny[heap[a]] == ny[heap[pos]] and heap[a] < heap[pos])):
                        heap[pos], heap[a] = heap[a], heap[pos]
                        pos = a
                    else:
                        break

            # emit
            if m >= out_cap:
                out_cap *= 2
                out = <long long*> realloc(out, out_cap * sizeof(long long))
                if out == NULL:
                    raise MemoryError()
            out[m] = node
            m += 1
            v = exp(-ny[node])
            t = mass_sum + v
            if fabs(mass_sum) >= fabs(v):
                mass_comp += (mass_sum - t) + v
            else:
                mass_comp += (v - t) + mass_sum
            mass_sum = t
            mass_now = mass_sum + mass_comp

            if count_target >= 0 and m >= count_target:
                stopped = True
                break
            if mass_target >= 0.0 and mass_now >= mass_target:
                stopped = True
                break
            if m >= cap:
                hit_cap = True
                break

            # push children, highest increment index first so that equal-value
            # ties pop in lexicographic multi-index order
            ci = nc[node]
            yv = ny[node]
            for i in range(ci, -1, -1):
                if n_nodes >= store_cap:
                    _grow(&ny, &nc, &npar, &ninc, &store_cap)
                ny[n_nodes] = yv + step[i]
                nc[n_nodes] = i
                npar[n_nodes] = node
                ninc[n_nodes] = i
                child = n_nodes
                n_nodes += 1
                if heap_n >= heap_cap:
                    heap_cap *= 2
                    heap = <long long*> realloc(heap, heap_cap * sizeof(long long))
                    if heap == NULL:
                        raise MemoryError()
                # sift up
                pos = heap_n
                heap[pos] = child
                heap_n += 1
                while pos > 0:
                    parent_pos = (pos - 1) // 2
                    a = heap[parent_pos]
                    if (ny[child] < ny[a] or (ny[child] == ny[a] and child < a)):
                        heap[pos] = a
                        heap[parent_pos] = child
                        pos = parent_pos
                    else:
                        break
            if heap_n > cap:
                hit_cap = True
                break

        y_out = np.empty(m, dtype=np.float64)
        y_view = y_out
        for node in range(m):
            y_view[node] = ny[out[node]]

        indices = None
        if want_indices and m > 0:
            indices = np.ones((m, d), dtype=np.int32)
            idx_view = indices
            for r in range(m):
                cur = out[r]
                while npar[cur] >= 0:
                    idx_view[r, ninc[cur]] += 1
                    cur = npar[cur]

        return y_out, mass_now, hit_cap, indices
    finally:
        free(ny); free(nc); free(npar); free(ninc); free(heap); free(out)


def convolve_lattice(double[::1] mass, double[::1] log_count,
                     long long[::1] shifts, double[::1] probs,
                     long long support_hi):
    """One dimension of the binned convolution.

    ``shifts`` are ascending bin offsets of the dimension's lattice points,
    ``probs`` the matching eigenvalue masses.  Mass convolves additively;
    counts convolve in the log domain via a streamed log-sum-exp.  Bins at or
    beyond the array end are accumulated into the dropped totals.  Returns
    ``(new_mass, new_log_count, dropped_mass, dropped_log_count)``.
    """
    cdef Py_ssize_t n = mass.shape[0]
    cdef Py_ssize_t K = shifts.shape[0]
    cdef Py_ssize_t hi = support_hi if support_hi < n else n

    out_mass = np.zeros(n, dtype=np.float64)
    out_lc = np.full(n, -np.inf, dtype=np.float64)
    cdef double[::1] om = out_mass
    cdef double[::1] olc = out_lc

    cdef double dropped = 0.0, dropped_c = 0.0
    cdef double dropped_lc = -INFINITY
    cdef double p, t, v, mx, ssum
    cdef Py_ssize_t k, i, j, s, lim, out_hi

    # mass: shift-add, spill into dropped
    for k in range(K):
        s = shifts[k]
        p = probs[k]
        lim = hi if hi < n - s else n - s
        if s >= n:
            lim = 0
        for i in range(lim):
            om[i + s] += p * mass[i]
        for i in range(lim, hi):
            v = p * mass[i]
            t = dropped + v
            if fabs(dropped) >= fabs(v):
                dropped_c += (dropped - t) + v
            else:
                dropped_c += (v - t) + dropped
            dropped = t

    # counts: per output bin, log-sum-exp over the K shifted inputs
    out_hi = hi + shifts[K - 1] + 1
    if out_hi > n:
        out_hi = n
    for i in range(out_hi):
        mx = -INFINITY
        for k in range(K):
            j = i - shifts[k]
            if j < 0:
                break
            if j < hi and log_count[j] > mx:
                mx = log_count[j]
        if mx == -INFINITY:
            continue
        ssum = 0.0
        for k in range(K):
            j = i - shifts[k]
            if j < 0:
                break
            if j < hi:
                v = log_count[j]
                if v > -INFINITY:
                    ssum += exp(v - mx)
        olc[i] = mx + log(ssum)

    # dropped counts
    for k in range(K):
        s = shifts[k]
        lim = n - s
        if lim < 0:
            lim = 0
        for i in range(lim, hi):
            v = log_count[i]
            if v == -INFINITY:
                continue
            if dropped_lc == -INFINITY:
                dropped_lc = v
            elif v > dropped_lc:
                dropped_lc = v + log(1.0 + exp(dropped_lc - v))
            else:
                dropped_lc = dropped_lc + log(1.0 + exp(v - dropped_lc))

    return out_mass, out_lc, dropped + dropped_c, dropped_lc
