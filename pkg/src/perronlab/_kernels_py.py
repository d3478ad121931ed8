"""Pure Python reference implementation of the combinatorial and power-sum kernels.

The compiled module ``_kernels_ext`` exposes the same four functions with the
same signatures and return types; ``perronlab.kernels`` picks one at import.
"""
from math import gcd

import numpy as np


def strong_components(adj):
    """Strongly connected components of the digraph ``i -> j iff adj[i, j]``.

    Iterative Tarjan. Components are labelled in order of completion, so for
    an edge between two different components ``a -> b`` we have
    ``label[b] < label[a]`` (sinks get the small labels).

    Returns
    -------
    labels : ndarray of int64, shape (n,)
    ncomp : int
    """
    adj = np.asarray(adj, dtype=np.uint8)
    n = adj.shape[0]
    succ = [np.flatnonzero(adj[i]).tolist() for i in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    labels = np.full(n, -1, dtype=np.int64)
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            nbrs = succ[v]
            if pos < len(nbrs):
                work[-1] = (v, pos + 1)
                w = nbrs[pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    labels[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return labels, ncomp


def component_period(adj, labels, comp):
    """gcd of ``level(u) + 1 - level(v)`` over edges inside one component.

    ``level`` is the BFS depth from the smallest vertex of the component.
    Returns 0 when the component has no internal edge (a single vertex
    without a loop).
    """
    adj = np.asarray(adj, dtype=np.uint8)
    labels = np.asarray(labels)
    members = np.flatnonzero(labels == comp)
    n = adj.shape[0]
    level = [-1] * n
    root = int(members[0])
    level[root] = 0
    queue = [root]
    head = 0
    g = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in np.flatnonzero(adj[u]).tolist():
            if labels[v] != comp:
                continue
            if level[v] == -1:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = gcd(g, abs(level[u] + 1 - level[v]))
    # tree edges contribute 0; a component with edges but g == 0 cannot occur
    # since every strongly connected component with an edge has a cycle
    return g


def closed_subsets(need, order):
    """All subsets ``S`` of ``range(len(need))`` with ``need[c] <= S`` for ``c in S``.

    ``need`` holds bitmasks over components; ``order`` must list every
    component after all components in its ``need`` mask. Returns a uint64
    array of bitmasks, the empty set first.
    """
    sets = [0]
    for c in order:
        c = int(c)
        req = int(need[c])
        bit = 1 << c
        sets.extend([s | bit for s in sets if s & req == req])
    return np.array(sets, dtype=np.uint64)


def weighted_power_sums(a, coeffs):
    """``out[j] = sum_k coeffs[j, k] * a**k`` for a real square matrix ``a``."""
    a = np.asarray(a, dtype=np.float64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = a.shape[0]
    nj, nk = coeffs.shape
    out = np.zeros((nj, n, n))
    power = np.eye(n)
    for k in range(nk):
        col = coeffs[:, k]
        if np.any(col):
            out += col[:, None, None] * power
        if k + 1 < nk:
            power = power @ a
    return out
