# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef long _gcd(long a, long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def strong_components(adj):
    cdef const cnp.uint8_t[:, :] A = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.int64_t[:] index = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[:] low = np.zeros(n, dtype=np.int64)
    cdef cnp.uint8_t[:] on_stack = np.zeros(n, dtype=np.uint8)
    labels_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[:] labels = labels_arr
    cdef cnp.int64_t[:] stack = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] work_v = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] work_pos = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t sp = 0, wp = 0, root, v, w, u, pos
    cdef long counter = 0, ncomp = 0
    with nogil:
        for root in range(n):
            if index[root] != -1:
                continue
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            on_stack[root] = 1
            work_v[0] = root
            work_pos[0] = 0
            wp = 1
            while wp > 0:
                v = work_v[wp - 1]
                pos = work_pos[wp - 1]
                # advance to the next successor of v
                while pos < n and A[v, pos] == 0:
                    pos += 1
                if pos < n:
                    work_pos[wp - 1] = pos + 1
                    w = pos
                    if index[w] == -1:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        work_v[wp] = w
                        work_pos[wp] = 0
                        wp += 1
                    elif on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                    continue
                wp -= 1
                if wp > 0:
                    u = work_v[wp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        on_stack[w] = 0
                        labels[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
    return labels_arr, int(ncomp)


def component_period(adj, labels, long comp):
    cdef const cnp.uint8_t[:, :] A = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef const cnp.int64_t[:] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.int64_t[:] level = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[:] queue = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 0, u, v, root = -1
    cdef long g = 0
    for v in range(n):
        if lab[v] == comp:
            root = v
            break
    if root < 0:
        raise ValueError("empty component")
    with nogil:
        level[root] = 0
        queue[tail] = root
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for v in range(n):
                if A[u, v] == 0 or lab[v] != comp:
                    continue
                if level[v] == -1:
                    level[v] = level[u] + 1
                    queue[tail] = v
                    tail += 1
                else:
                    g = _gcd(g, level[u] + 1 - level[v])
    return int(g)


def closed_subsets(need, order):
    cdef const cnp.uint64_t[:] req = np.ascontiguousarray(need, dtype=np.uint64)
    cdef const cnp.int64_t[:] ordv = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t cap = 1024, count = 1, i, m, cur
    buf = np.zeros(cap, dtype=np.uint64)
    cdef cnp.uint64_t[:] sets = buf
    cdef cnp.uint64_t r, bit, s
    cdef long c
    for i in range(ordv.shape[0]):
        c = ordv[i]
        r = req[c]
        bit = (<cnp.uint64_t>1) << c
        cur = count
        # worst case the list doubles
        if 2 * cur > cap:
            while 2 * cur > cap:
                cap *= 2
            new = np.zeros(cap, dtype=np.uint64)
            new[:count] = buf[:count]
            buf = new
            sets = buf
        with nogil:
            for m in range(cur):
                s = sets[m]
                if (s & r) == r:
                    sets[count] = s | bit
                    count += 1
    return buf[:count].copy()


def weighted_power_sums(a, coeffs):
    cdef const double[:, :] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, :] C = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], nj = C.shape[0], nk = C.shape[1]
    out_arr = np.zeros((nj, n, n), dtype=np.float64)
    cdef double[:, :, :] out = out_arr
    cdef double[:, :] P = np.eye(n, dtype=np.float64)
    cdef double[:, :] Q = np.zeros((n, n), dtype=np.float64)
    cdef double[:, :] tmp
    cdef Py_ssize_t j, k, i, l, m
    cdef double c, acc
    with nogil:
        for k in range(nk):
            for j in range(nj):
                c = C[j, k]
                if c != 0.0:
                    for i in range(n):
                        for l in range(n):
                            out[j, i, l] += c * P[i, l]
            if k + 1 < nk:
                for i in range(n):
                    for l in range(n):
                        acc = 0.0
                        for m in range(n):
                            acc = acc + P[i, m] * A[m, l]
                        Q[i, l] = acc
                tmp = P
                P = Q
                Q = tmp
    return out_arr
