"""Pure-Python implementations of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np


def frechet(dist):
    dist = np.asarray(dist, dtype=np.float64)
    p, q = dist.shape
    if p == 0 or q == 0:
        raise ValueError("empty distance table")
    rows = dist.tolist()
    prev = [0.0] * q
    prev[0] = rows[0][0]
    for j in range(1, q):
        prev[j] = max(prev[j - 1], rows[0][j])
    for i in range(1, p):
        row = rows[i]
        cur = [0.0] * q
        cur[0] = max(prev[0], row[0])
        for j in range(1, q):
            cur[j] = max(min(prev[j], cur[j - 1], prev[j - 1]), row[j])
        prev = cur
    return prev[q - 1]


def dijkstra(cost, flow, potential, source, is_target, dist, pred, via_reverse):
    n = cost.shape[0]
    dist[:] = math.inf
    pred[:] = -1
    via_reverse[:] = 0
    dist[source] = 0.0
    done = np.zeros(n, dtype=bool)
    for _ in range(n):
        masked = np.where(done, math.inf, dist)
        u = int(np.argmin(masked))
        if masked[u] == math.inf:
            return -1
        done[u] = True
        if is_target[u]:
            return u
        du = dist[u]
        # forward arcs are uncapacitated; reverse arcs exist where flow is positive
        rc = cost[u, :] + potential[u] - potential
        rc2 = np.where(flow[:, u] > 0.0, -cost[:, u] + potential[u] - potential, math.inf)
        rev = rc2 < rc
        rc = np.where(rev, rc2, rc)
        rc = np.maximum(rc, 0.0)
        cand = du + rc
        better = (~done) & (cand < dist)
        dist[better] = cand[better]
        pred[better] = u
        via_reverse[better] = rev[better]
    return -1
