"""Numba kernels for the hot loops: union-find, triangle counts, cell-list pairs."""

import numba as nb
import numpy as np


@nb.njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


@nb.njit(cache=True)
def component_labels(n, src, dst):
    """Union-find with union-by-size and path compression.

    Returns ``(labels, count)`` where ids are assigned in order of each
    component's first-seen (lowest) vertex.
    """
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    for k in range(len(src)):
        ra = _find(parent, src[k])
        rb = _find(parent, dst[k])
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
    labels = np.empty(n, dtype=np.int64)
    root_label = np.full(n, -1, dtype=np.int64)
    count = 0
    for v in range(n):
        r = _find(parent, v)
        if root_label[r] < 0:
            root_label[r] = count
            count += 1
        labels[v] = root_label[r]
    return labels, count


@nb.njit(cache=True)
def edge_common_counts(indptr, indices):
    """Common-neighbor count for every edge ``u < v`` in CSR order.

    Marks the neighbors of ``u`` once, then scans each ``v``'s list against the
    marks: O(sum of deg(u) * deg(v)) over edges, no sorting needed.
    """
    n = len(indptr) - 1
    m = 0
    for u in range(n):
        for k in range(indptr[u], indptr[u + 1]):
            if indices[k] > u:
                m += 1
    us = np.empty(m, dtype=np.int64)
    vs = np.empty(m, dtype=np.int64)
    counts = np.empty(m, dtype=np.int64)
    mark = np.zeros(n, dtype=np.bool_)
    e = 0
    for u in range(n):
        for k in range(indptr[u], indptr[u + 1]):
            mark[indices[k]] = True
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if v <= u:
                continue
            c = 0
            for s in range(indptr[v], indptr[v + 1]):
                if mark[indices[s]]:
                    c += 1
            us[e] = u
            vs[e] = v
            counts[e] = c
            e += 1
        for k in range(indptr[u], indptr[u + 1]):
            mark[indices[k]] = False
    return us, vs, counts


@nb.njit(cache=True)
def _cell_pairs_pass(points, order, cell_of, cell_start, dims, offsets, r2, out_i, out_j, fill):
    n, k = points.shape
    total = 0
    coord = np.empty(k, dtype=np.int64)
    for i in range(n):
        c = cell_of[i]
        rem = c
        for d in range(k - 1, -1, -1):
            coord[d] = rem % dims
            rem //= dims
        for o in range(offsets.shape[0]):
            lin = 0
            ok = True
            for d in range(k):
                x = coord[d] + offsets[o, d]
                if x < 0 or x >= dims:
                    ok = False
                    break
                lin = lin * dims + x
            if not ok:
                continue
            for s in range(cell_start[lin], cell_start[lin + 1]):
                j = order[s]
                if j <= i:
                    continue
                d2 = 0.0
                for d in range(k):
                    diff = points[i, d] - points[j, d]
                    d2 += diff * diff
                if d2 <= r2 * r2:
                    if fill:
                        out_i[total] = i
                        out_j[total] = j
                    total += 1
    return total


@nb.njit(cache=True)
def cell_candidate_pairs(points, cell_of, dims, offsets, radius):
    """Pairs ``i < j`` whose Euclidean distance is at most ``radius``, searched
    over the stencil ``offsets`` of cubical cells. ``cell_of`` holds each
    point's linear cell index in a ``dims``-per-axis grid."""
    ncell = dims ** points.shape[1]
    counts = np.zeros(ncell + 1, dtype=np.int64)
    for i in range(len(cell_of)):
        counts[cell_of[i] + 1] += 1
    cell_start = np.cumsum(counts)
    order = np.argsort(cell_of, kind="mergesort")
    dummy = np.empty(0, dtype=np.int64)
    m = _cell_pairs_pass(points, order, cell_of, cell_start, dims, offsets, radius, dummy, dummy, False)
    out_i = np.empty(m, dtype=np.int64)
    out_j = np.empty(m, dtype=np.int64)
    _cell_pairs_pass(points, order, cell_of, cell_start, dims, offsets, radius, out_i, out_j, True)
    return out_i, out_j
