"""Hot inner loops, compiled with numba when available.

Set ``NEWSFRAMES_DISABLE_NUMBA=1`` to force the pure-numpy paths. Both paths
return identical integer results; float results agree to rounding.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

USE_NUMBA = njit is not None and os.environ.get("NEWSFRAMES_DISABLE_NUMBA", "") not in ("1", "true", "yes")

# FR positions are snapped to this grid each iteration so both backends agree
# beyond the last-ulp differences of their summation orders.
LAYOUT_GRID = 1e-9


# --------------------------------------------------------------------------
# dependency tree distances
# --------------------------------------------------------------------------

def _tree_pairs_loop(heads, keep, max_dist):
    n = heads.shape[0]
    # undirected adjacency list packed into fixed arrays (a tree has n-1 edges)
    deg = np.zeros(n, dtype=np.int64)
    for i in range(n):
        h = heads[i] - 1
        if h >= 0:
            deg[i] += 1
            deg[h] += 1
    start = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        start[i + 1] = start[i] + deg[i]
    fill = start[:-1].copy()
    adj = np.empty(start[n], dtype=np.int64)
    for i in range(n):
        h = heads[i] - 1
        if h >= 0:
            adj[fill[i]] = h
            fill[i] += 1
            adj[fill[h]] = i
            fill[h] += 1

    out_i = np.empty(n * n, dtype=np.int64)
    out_j = np.empty(n * n, dtype=np.int64)
    count = 0
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for src in range(n):
        if not keep[src]:
            continue
        dist[:] = -1
        dist[src] = 0
        queue[0] = src
        qh = 0
        qt = 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            if dist[u] >= max_dist:
                continue
            for p in range(start[u], start[u + 1]):
                v = adj[p]
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue[qt] = v
                    qt += 1
        for j in range(src + 1, n):
            if keep[j] and dist[j] > 0:
                out_i[count] = src
                out_j[count] = j
                count += 1
    return out_i[:count], out_j[:count]


def _tree_pairs_numpy(heads, keep, max_dist):
    n = heads.shape[0]
    inf = n + 1
    d = np.full((n, n), inf, dtype=np.int64)
    np.fill_diagonal(d, 0)
    child = np.nonzero(heads > 0)[0]
    d[child, heads[child] - 1] = 1
    d[heads[child] - 1, child] = 1
    for k in range(n):
        np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :], out=d)
    mask = (d <= max_dist) & np.triu(np.ones((n, n), dtype=bool), 1)
    mask &= keep[:, None] & keep[None, :]
    ii, jj = np.nonzero(mask)
    return ii.astype(np.int64), jj.astype(np.int64)


# --------------------------------------------------------------------------
# null model counting
# --------------------------------------------------------------------------

def _sample_counts_loop(samples, membership):
    s, n = samples.shape
    e = membership.shape[1]
    out = np.zeros((s, e), dtype=np.int64)
    for a in range(s):
        for b in range(n):
            row = samples[a, b]
            for c in range(e):
                out[a, c] += membership[row, c]
    return out


def _sample_counts_numpy(samples, membership):
    return membership[samples].astype(np.int64).sum(axis=1)


# --------------------------------------------------------------------------
# modularity
# --------------------------------------------------------------------------

def _community_sums_loop(src, dst, w, comm, n_comm, n_nodes):
    internal = np.zeros(n_comm, dtype=np.float64)
    total = np.zeros(n_comm, dtype=np.float64)
    for p in range(src.shape[0]):
        a = src[p]
        b = dst[p]
        total[comm[a]] += w[p]
        total[comm[b]] += w[p]
        if comm[a] == comm[b]:
            internal[comm[a]] += 2.0 * w[p]
    return internal, total


def _community_sums_numpy(src, dst, w, comm, n_comm, n_nodes):
    ca = comm[src]
    cb = comm[dst]
    total = np.bincount(ca, weights=w, minlength=n_comm) + np.bincount(cb, weights=w, minlength=n_comm)
    same = ca == cb
    internal = 2.0 * np.bincount(ca[same], weights=w[same], minlength=n_comm)
    return internal, total


# --------------------------------------------------------------------------
# Louvain local-move pass
# --------------------------------------------------------------------------

def _local_move_pass(indptr, indices, weights, degree, order, comm, tot, m, tol):
    """One sweep over ``order``; mutates ``comm`` and ``tot`` in place.

    Returns (n_moves, node, old, new, gain) where the last four arrays are
    filled up to ``n_moves``.
    """
    n = degree.shape[0]
    neigh_w = np.zeros(n, dtype=np.float64)
    touched = np.empty(n, dtype=np.int64)
    mv_node = np.empty(n, dtype=np.int64)
    mv_old = np.empty(n, dtype=np.int64)
    mv_new = np.empty(n, dtype=np.int64)
    mv_gain = np.empty(n, dtype=np.float64)
    n_moves = 0
    two_m2 = 2.0 * m * m
    for idx in range(order.shape[0]):
        i = order[idx]
        ci = comm[i]
        ki = degree[i]
        n_touched = 0
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j == i:
                continue
            c = comm[j]
            if neigh_w[c] == 0.0:
                touched[n_touched] = c
                n_touched += 1
            neigh_w[c] += weights[p]
        tot[ci] -= ki
        stay = neigh_w[ci] / m - tot[ci] * ki / two_m2
        best_c = ci
        best_gain = stay
        for t in range(n_touched):
            c = touched[t]
            g = neigh_w[c] / m - tot[c] * ki / two_m2
            if g > best_gain or (g == best_gain and c < best_c):
                best_gain = g
                best_c = c
        if best_c != ci and best_gain - stay > tol:
            comm[i] = best_c
            tot[best_c] += ki
            mv_node[n_moves] = i
            mv_old[n_moves] = ci
            mv_new[n_moves] = best_c
            mv_gain[n_moves] = best_gain - stay
            n_moves += 1
        else:
            tot[ci] += ki
        for t in range(n_touched):
            neigh_w[touched[t]] = 0.0
    return n_moves, mv_node, mv_old, mv_new, mv_gain


# --------------------------------------------------------------------------
# Fruchterman-Reingold layout
# --------------------------------------------------------------------------

def _fr_loop(pos, src, dst, w, iterations, k, t0, grid):
    n = pos.shape[0]
    disp = np.zeros((n, 2), dtype=np.float64)
    k2 = k * k
    for it in range(iterations):
        disp[:, :] = 0.0
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                d2 = dx * dx + dy * dy
                if d2 < 1e-18:
                    d2 = 1e-18
                f = k2 / d2
                disp[i, 0] += dx * f
                disp[i, 1] += dy * f
        for p in range(src.shape[0]):
            a = src[p]
            b = dst[p]
            dx = pos[a, 0] - pos[b, 0]
            dy = pos[a, 1] - pos[b, 1]
            d = np.sqrt(dx * dx + dy * dy)
            f = w[p] * d / k
            disp[a, 0] -= dx * f
            disp[a, 1] -= dy * f
            disp[b, 0] += dx * f
            disp[b, 1] += dy * f
        temp = t0 * (1.0 - it / iterations)
        for i in range(n):
            dl = np.sqrt(disp[i, 0] * disp[i, 0] + disp[i, 1] * disp[i, 1])
            if dl > 0.0:
                s = min(dl, temp) / dl
                pos[i, 0] = np.round((pos[i, 0] + disp[i, 0] * s) / grid) * grid
                pos[i, 1] = np.round((pos[i, 1] + disp[i, 1] * s) / grid) * grid
    return pos


def _fr_numpy(pos, src, dst, w, iterations, k, t0, grid):
    n = pos.shape[0]
    k2 = k * k
    off = ~np.eye(n, dtype=bool)
    for it in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        d2 = np.maximum((delta ** 2).sum(axis=2), 1e-18)
        f = np.where(off, k2 / d2, 0.0)
        disp = (delta * f[:, :, None]).sum(axis=1)
        if src.shape[0]:
            ed = pos[src] - pos[dst]
            d = np.sqrt((ed ** 2).sum(axis=1))
            fe = (w * d / k)[:, None] * ed
            np.subtract.at(disp, src, fe)
            np.add.at(disp, dst, fe)
        temp = t0 * (1.0 - it / iterations)
        dl = np.sqrt((disp ** 2).sum(axis=1))
        moving = dl > 0.0
        s = np.where(moving, np.minimum(dl, temp) / np.where(moving, dl, 1.0), 0.0)
        newpos = np.round((pos + disp * s[:, None]) / grid) * grid
        pos = np.where(moving[:, None], newpos, pos)
    return pos


if USE_NUMBA:
    tree_pairs = njit(cache=True)(_tree_pairs_loop)
    sample_counts = njit(cache=True)(_sample_counts_loop)
    community_sums = njit(cache=True)(_community_sums_loop)
    local_move_pass = njit(cache=True)(_local_move_pass)
    fr_layout = njit(cache=True)(_fr_loop)
else:
    tree_pairs = _tree_pairs_numpy
    sample_counts = _sample_counts_numpy
    community_sums = _community_sums_numpy
    local_move_pass = _local_move_pass
    fr_layout = _fr_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
