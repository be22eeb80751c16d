"""Uncapacitated min-cost flow by successive shortest paths with node potentials."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import ZERO
from .errors import InfeasibleFlowError, PolyCurrentsError


@dataclass(frozen=True)
class FlowResult:
    flow: np.ndarray
    potential: np.ndarray
    value: float
    augmentations: int


def min_cost_flow(cost, supply, *, max_iter: int | None = None) -> FlowResult:
    """Solve ``min sum c_uv f_uv`` s.t. out(v) - in(v) = supply(v), f >= 0.

    ``cost[u, v]`` is the cost of arc u -> v (``inf`` when absent); arcs have
    no capacity. Costs must be nonnegative, which makes zero potentials a
    valid start. On return ``potential`` satisfies
    ``cost[u, v] + potential[u] - potential[v] >= 0`` on every residual arc,
    with equality wherever flow is positive.

    Supplies that do not sum to zero are pushed as far as possible; the
    leftover imbalance is the caller's responsibility.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    supply = np.asarray(supply, dtype=np.float64)
    n = cost.shape[0]
    if cost.shape != (n, n) or supply.shape != (n,):
        raise PolyCurrentsError("cost must be square and match the supply vector")
    finite = cost[np.isfinite(cost)]
    if finite.size and finite.min() < 0:
        raise PolyCurrentsError("arc costs must be nonnegative")

    flow = np.zeros((n, n))
    potential = np.zeros(n)
    excess = supply.copy()
    eps = ZERO * max(1.0, float(np.abs(supply).sum()))
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.intp)
    via_reverse = np.empty(n, dtype=np.uint8)
    limit = max_iter if max_iter is not None else 4 * n * n + 16
    count = 0

    while True:
        excess[np.abs(excess) <= eps] = 0.0
        sources = np.flatnonzero(excess > 0)
        targets = excess < 0
        if sources.size == 0 or not targets.any():
            break
        if count >= limit:
            raise InfeasibleFlowError("min-cost flow did not converge")
        s = int(sources[0])
        t = kernels.dijkstra(cost, flow, potential, s, targets.astype(np.uint8), dist, pred, via_reverse)
        if t < 0:
            raise InfeasibleFlowError(f"no residual path from node {s} to any deficit node")
        potential += np.minimum(dist, dist[t])

        arcs = []
        v = t
        delta = min(excess[s], -excess[t])
        while v != s:
            u = int(pred[v])
            rev = bool(via_reverse[v])
            arcs.append((u, v, rev))
            if rev:
                delta = min(delta, flow[v, u])
            v = u
        for u, v, rev in arcs:
            if rev:
                left = flow[v, u] - delta
                flow[v, u] = left if left > eps else 0.0
            else:
                flow[u, v] += delta
        excess[s] -= delta
        excess[t] += delta
        count += 1

    finite_mask = np.isfinite(cost)
    value = float(np.sum(flow[finite_mask] * cost[finite_mask]))
    return FlowResult(flow=flow, potential=potential, value=value, augmentations=count)
