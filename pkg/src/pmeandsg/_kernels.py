"""Compiled inner loops.

The indexed heap orders nodes by ``(key[node], node)`` so that every argmin
breaks ties toward the smallest node index.
"""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)

MODE_FP = 0
MODE_LOG = 1
MODE_NEG = 2
MODE_MIN = 3
MODE_MAX = 4


@njit(inline="always")
def _less(key, a, b):
    ka = key[a]
    kb = key[b]
    return ka < kb or (ka == kb and a < b)


@njit(**_JIT)
def _sift_up(heap, pos, key, i):
    v = heap[i]
    while i > 0:
        parent = (i - 1) >> 1
        u = heap[parent]
        if _less(key, v, u):
            heap[i] = u
            pos[u] = i
            i = parent
        else:
            break
    heap[i] = v
    pos[v] = i


@njit(**_JIT)
def _sift_down(heap, pos, key, i, size):
    v = heap[i]
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and _less(key, heap[c + 1], heap[c]):
            c += 1
        u = heap[c]
        if _less(key, u, v):
            heap[i] = u
            pos[u] = i
            i = c
        else:
            break
    heap[i] = v
    pos[v] = i


@njit(**_JIT)
def _heap_init(key):
    n = key.shape[0]
    heap = np.arange(n)
    pos = np.arange(n)
    for i in range(n // 2 - 1, -1, -1):
        _sift_down(heap, pos, key, i, n)
    return heap, pos


@njit(**_JIT)
def _heap_pop(heap, pos, key, size):
    v = heap[0]
    size -= 1
    if size > 0:
        heap[0] = heap[size]
        pos[heap[0]] = 0
        _sift_down(heap, pos, key, 0, size)
    pos[v] = -1
    return v


@njit(**_JIT)
def _heap_update(heap, pos, key, v, new, size):
    old = key[v]
    key[v] = new
    i = pos[v]
    if new < old:
        _sift_up(heap, pos, key, i)
    else:
        _sift_down(heap, pos, key, i, size)


@njit(**_JIT)
def _delta(indptr, indices, deg, alive, phi, j):
    total = phi[deg[j]]
    for e in range(indptr[j], indptr[j + 1]):
        i = indices[e]
        if alive[i]:
            total += phi[deg[i]] - phi[deg[i] - 1]
    return total


@njit(**_JIT)
def delta_all(indptr, indices, deg, alive, phi):
    n = indptr.shape[0] - 1
    out = np.full(n, np.inf)
    for j in range(n):
        if alive[j]:
            out[j] = _delta(indptr, indices, deg, alive, phi, j)
    return out


@njit(**_JIT)
def gen_peel_order(indptr, indices, phi):
    """Removal order of greedy peeling by the numerator drop ``Delta_j``.

    After each removal only nodes within two hops of the removed node can
    change; those are recomputed from current degrees and re-keyed.
    """
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
    alive = np.ones(n, dtype=np.bool_)
    key = np.empty(n)
    for j in range(n):
        key[j] = _delta(indptr, indices, deg, alive, phi, j)
    heap, pos = _heap_init(key)
    order = np.empty(n, dtype=np.int64)
    stamp = np.full(n, -1, dtype=np.int64)
    dirty = np.empty(n, dtype=np.int64)
    size = n
    for step in range(n):
        v = _heap_pop(heap, pos, key, size)
        size -= 1
        order[step] = v
        alive[v] = False
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if alive[u]:
                deg[u] -= 1
        cnt = 0
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if not alive[u]:
                continue
            if stamp[u] != step:
                stamp[u] = step
                dirty[cnt] = u
                cnt += 1
            for f in range(indptr[u], indptr[u + 1]):
                w = indices[f]
                if alive[w] and stamp[w] != step:
                    stamp[w] = step
                    dirty[cnt] = w
                    cnt += 1
        for t in range(cnt):
            w = dirty[t]
            new = _delta(indptr, indices, deg, alive, phi, w)
            if new != key[w]:
                _heap_update(heap, pos, key, w, new, size)
    return order


@njit(**_JIT)
def simple_peel_order(indptr, indices):
    """Repeatedly remove a minimum-degree node (smallest index on ties)."""
    n = indptr.shape[0] - 1
    key = np.empty(n)
    for v in range(n):
        key[v] = indptr[v + 1] - indptr[v]
    alive = np.ones(n, dtype=np.bool_)
    heap, pos = _heap_init(key)
    order = np.empty(n, dtype=np.int64)
    size = n
    for step in range(n):
        v = _heap_pop(heap, pos, key, size)
        size -= 1
        order[step] = v
        alive[v] = False
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if alive[u]:
                key[u] -= 1.0
                _sift_up(heap, pos, key, pos[u])
    return order


@njit(**_JIT)
def score_order(indptr, indices, order, phi, mode, p):
    """Objective of every prefix set ``S_i = V - order[:i]``, ``i < n``.

    ``mode`` selects f_p (MODE_FP), the p-mean for p = 0 / p < 0
    (MODE_LOG / MODE_NEG, from the ``phi`` table) or min / max degree.
    Prefixes where the p-mean is undefined (zero degrees, p <= 0) are NaN.
    """
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    maxdeg = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > maxdeg:
            maxdeg = deg[v]
    cnt = np.zeros(maxdeg + 2, dtype=np.int64)
    num = 0.0
    zeros = 0
    for v in range(n):
        cnt[deg[v]] += 1
        if deg[v] > 0:
            num += phi[deg[v]]
        else:
            zeros += 1
    lo = 0
    while lo < maxdeg and cnt[lo] == 0:
        lo += 1
    hi = maxdeg
    alive = np.ones(n, dtype=np.bool_)
    out = np.empty(n)
    size = n
    for i in range(n):
        if mode == MODE_FP:
            out[i] = num / size
        elif zeros > 0:
            out[i] = np.nan
        elif mode == MODE_LOG:
            out[i] = np.exp(num / size)
        elif mode == MODE_NEG:
            out[i] = (-num / size) ** (1.0 / p)
        elif mode == MODE_MIN:
            out[i] = lo
        else:
            out[i] = hi
        v = order[i]
        d = deg[v]
        alive[v] = False
        size -= 1
        cnt[d] -= 1
        if d > 0:
            num -= phi[d]
        else:
            zeros -= 1
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if not alive[u]:
                continue
            du = deg[u]
            num -= phi[du]
            cnt[du] -= 1
            du -= 1
            cnt[du] += 1
            deg[u] = du
            if du > 0:
                num += phi[du]
            else:
                zeros += 1
            if du < lo:
                lo = du
        if size > 0:
            while cnt[lo] == 0:
                lo += 1
            while cnt[hi] == 0:
                hi -= 1
    return out


@njit(**_JIT)
def core_numbers(indptr, indices):
    """Core number of every node by bucket-sorted min-degree peeling,
    O(n + m)."""
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    maxdeg = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > maxdeg:
            maxdeg = deg[v]
    bin_start = np.zeros(maxdeg + 1, dtype=np.int64)
    for v in range(n):
        bin_start[deg[v]] += 1
    start = 0
    for d in range(maxdeg + 1):
        c = bin_start[d]
        bin_start[d] = start
        start += c
    vert = np.empty(n, dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    fill = bin_start.copy()
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    for i in range(n):
        v = vert[i]
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_start[du] += 1
                deg[u] -= 1
    return deg


@njit(**_JIT)
def greedy_gains(indptr, indices, order, pw, alpha):
    """Marginal gains of ``psi(S) = sum d_v(S)^p - alpha |S|`` when the
    nodes of ``order`` are inserted one at a time into an empty set."""
    n = indptr.shape[0] - 1
    inside = np.zeros(n, dtype=np.bool_)
    deg = np.zeros(n, dtype=np.int64)
    gains = np.empty(order.shape[0])
    for t in range(order.shape[0]):
        v = order[t]
        g = -alpha
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if inside[u]:
                g += pw[deg[u] + 1] - pw[deg[u]]
                deg[u] += 1
                c += 1
        g += pw[c]
        deg[v] = c
        inside[v] = True
        gains[t] = g
    return gains
