"""Independent reference solvers used only by the tests.

None of these share code with the library: plans come from enumerating
spanning-tree bases of the transportation polytope, flat norms and
cycle searches from scipy's LP solver, Frechet distances from the
textbook recursive DP.
"""

import math
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.optimize import linprog


def enumerate_vertex_plans(a, b):
    """All basic feasible plans of the transportation polytope with margins ``a``, ``b``."""
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    m, n = len(a), len(b)
    cells = [(i, j) for i in range(m) for j in range(n)]
    plans = []
    for subset in combinations(cells, m + n - 1):
        sol = _solve_tree(subset, a, b, m, n)
        if sol is not None and min(sol.values()) >= -1e-12:
            plans.append(sol)
    return plans


def _solve_tree(subset, a, b, m, n):
    # nodes 0..m-1 rows, m..m+n-1 columns; peel leaves of the tree
    adj = {v: set() for v in range(m + n)}
    for i, j in subset:
        adj[i].add(m + j)
        adj[m + j].add(i)
    seen = set()
    stack = [0]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(adj[v] - seen)
    if len(seen) != m + n:
        return None
    rest = a + b
    sol = {}
    leaves = [v for v in adj if len(adj[v]) == 1]
    while leaves:
        v = leaves.pop()
        if not adj[v]:
            continue
        (u,) = adj[v]
        val = rest[v]
        cell = (v, u - m) if v < m else (u, v - m)
        sol[cell] = val
        rest[u] -= val
        adj[u].discard(v)
        adj[v].clear()
        if len(adj[u]) == 1:
            leaves.append(u)
    return sol


def optimal_vertex_plans(a, b, D, slack=0.0):
    """Minimum cost over all vertex plans and the plans within ``slack`` of it."""
    scored = [(math.fsum(v * D[i][j] for (i, j), v in plan.items()), plan) for plan in enumerate_vertex_plans(a, b)]
    best = min(c for c, _ in scored)
    return best, [plan for c, plan in scored if c <= best + slack]


def brute_force_w1(a, b, D):
    """Minimum plan cost over all vertex plans; ``D[i, j]`` is the row-to-column cost."""
    return optimal_vertex_plans(a, b, D)[0]


def lp_w1(a, b, D):
    m, n = len(a), len(b)
    A_eq = np.zeros((m + n, m * n))
    for i in range(m):
        A_eq[i, i * n : (i + 1) * n] = 1
    for j in range(n):
        A_eq[m + j, j::n] = 1
    res = linprog(np.asarray(D, float).ravel(), A_eq=A_eq, b_eq=np.concatenate([a, b]), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def lp_flat_norm(values, D, creation_cost=1.0):
    """LP for min M(A) + M(B) with A + boundary(B) = mu, B on the complete directed graph."""
    values = np.asarray(values, float)
    k = len(values)
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    nvar = 2 * k + len(pairs)
    c = np.concatenate([np.full(2 * k, creation_cost), [D[i][j] for i, j in pairs]])
    A_eq = np.zeros((k, nvar))
    for v in range(k):
        A_eq[v, v] = 1
        A_eq[v, k + v] = -1
    for col, (i, j) in enumerate(pairs):
        A_eq[j, 2 * k + col] += 1
        A_eq[i, 2 * k + col] -= 1
    res = linprog(c, A_eq=A_eq, b_eq=values, bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def has_nonzero_cycle(edges, n_points):
    """Brute force: is there a nonzero zero-boundary subcurrent?

    For every nonempty edge subset, asks the LP whether positive
    fractions on exactly those edges can have zero boundary.
    """
    edges = list(edges)
    for r in range(1, len(edges) + 1):
        for subset in combinations(edges, r):
            A = np.zeros((n_points, r))
            for col, (t, h, w) in enumerate(subset):
                A[h, col] += w
                A[t, col] -= w
            # scale invariance lets us ask for fractions >= 1 instead of > 0
            res = linprog(np.zeros(r), A_eq=A, b_eq=np.zeros(n_points), bounds=(1, None), method="highs")
            if res.status == 0:
                return True
    return False


def recursive_frechet_table(D):
    """Textbook recursion over a precomputed distance table."""
    D = np.asarray(D, float)

    @lru_cache(maxsize=None)
    def c(i, j):
        d = float(D[i, j])
        if i == 0 and j == 0:
            return d
        if i == 0:
            return max(c(0, j - 1), d)
        if j == 0:
            return max(c(i - 1, 0), d)
        return max(min(c(i - 1, j), c(i - 1, j - 1), c(i, j - 1)), d)

    return c(D.shape[0] - 1, D.shape[1] - 1)


def recursive_frechet(P, Q, p=2):
    P = np.asarray(P, float)
    Q = np.asarray(Q, float)
    D = [[float(np.linalg.norm(a - b, ord=p)) for b in Q] for a in P]
    return recursive_frechet_table(D)


def dense_dijkstra(cost, source):
    """Plain O(n^2) Dijkstra on a matrix of nonnegative arc costs (inf = no arc)."""
    n = len(cost)
    dist = [float("inf")] * n
    dist[source] = 0.0
    done = [False] * n
    for _ in range(n):
        u = min((v for v in range(n) if not done[v]), key=lambda v: dist[v], default=None)
        if u is None or dist[u] == float("inf"):
            break
        done[u] = True
        for v in range(n):
            if cost[u][v] < float("inf") and dist[u] + cost[u][v] < dist[v]:
                dist[v] = dist[u] + cost[u][v]
    return dist
