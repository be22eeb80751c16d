# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: discrete Frechet table and dense residual Dijkstra.

Both routines mirror :mod:`polycurrents._fallback` line for line; the
test-suite checks the two backends against each other.
"""

from libc.math cimport INFINITY

import numpy as np


def frechet(double[:, ::1] dist):
    """Discrete Frechet value of a pairwise distance table (two-row DP)."""
    cdef Py_ssize_t p = dist.shape[0]
    cdef Py_ssize_t q = dist.shape[1]
    cdef Py_ssize_t i, j
    cdef double a, b, c, m
    if p == 0 or q == 0:
        raise ValueError("empty distance table")
    prev_arr = np.empty(q, dtype=np.float64)
    cur_arr = np.empty(q, dtype=np.float64)
    cdef double[::1] prev = prev_arr
    cdef double[::1] cur = cur_arr
    cdef double[::1] tmp

    prev[0] = dist[0, 0]
    for j in range(1, q):
        prev[j] = prev[j - 1] if prev[j - 1] > dist[0, j] else dist[0, j]
    for i in range(1, p):
        cur[0] = prev[0] if prev[0] > dist[i, 0] else dist[i, 0]
        for j in range(1, q):
            a = prev[j]
            b = cur[j - 1]
            c = prev[j - 1]
            m = a if a < b else b
            if c < m:
                m = c
            cur[j] = m if m > dist[i, j] else dist[i, j]
        tmp = prev
        prev = cur
        cur = tmp
    return prev[q - 1]


def dijkstra(
    double[:, ::1] cost,
    double[:, ::1] flow,
    double[::1] potential,
    Py_ssize_t source,
    unsigned char[::1] is_target,
    double[::1] dist,
    Py_ssize_t[::1] pred,
    unsigned char[::1] via_reverse,
):
    """Shortest reduced-cost paths from ``source`` in an uncapacitated residual graph.

    Stops when the first node flagged in ``is_target`` is settled and returns
    its index, or -1 if no target is reachable. ``dist`` holds exact labels
    for settled nodes and tentative (upper) labels elsewhere.
    """
    cdef Py_ssize_t n = cost.shape[0]
    cdef Py_ssize_t k, u, v, best
    cdef double bd, du, rc, rc2
    cdef unsigned char rev
    done_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] done = done_arr

    for v in range(n):
        dist[v] = INFINITY
        pred[v] = -1
        via_reverse[v] = 0
    dist[source] = 0.0

    for k in range(n):
        best = -1
        bd = INFINITY
        for v in range(n):
            if not done[v] and dist[v] < bd:
                bd = dist[v]
                best = v
        if best < 0:
            return -1
        u = best
        done[u] = 1
        if is_target[u]:
            return u
        du = dist[u]
        for v in range(n):
            if done[v]:
                continue
            rc = INFINITY
            rev = 0
            if cost[u, v] < INFINITY:
                rc = cost[u, v] + potential[u] - potential[v]
            if flow[v, u] > 0.0:
                rc2 = -cost[v, u] + potential[u] - potential[v]
                if rc2 < rc:
                    rc = rc2
                    rev = 1
            if rc == INFINITY:
                continue
            if rc < 0.0:
                rc = 0.0
            if du + rc < dist[v]:
                dist[v] = du + rc
                pred[v] = u
                via_reverse[v] = rev
    return -1
