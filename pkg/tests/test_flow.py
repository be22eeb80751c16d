import numpy as np
import pytest
from scipy.optimize import linprog

from polycurrents.errors import InfeasibleFlowError, PolyCurrentsError
from polycurrents.flow import min_cost_flow


def lp_min_cost_flow(cost, supply):
    n = len(supply)
    arcs = [(u, v) for u in range(n) for v in range(n) if np.isfinite(cost[u, v])]
    A = np.zeros((n, len(arcs)))
    for k, (u, v) in enumerate(arcs):
        A[u, k] += 1
        A[v, k] -= 1
    res = linprog([cost[u, v] for u, v in arcs], A_eq=A, b_eq=supply, bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def random_instance(rng, n):
    cost = rng.uniform(0, 5, size=(n, n))
    cost[rng.random((n, n)) < 0.3] = np.inf
    np.fill_diagonal(cost, np.inf)
    # a ring keeps every instance feasible
    for u in range(n):
        cost[u, (u + 1) % n] = min(cost[u, (u + 1) % n], 5.0)
    supply = rng.uniform(-3, 3, size=n)
    supply -= supply.mean()
    return cost, supply


def test_matches_lp_and_certifies(rng):
    for _ in range(40):
        n = int(rng.integers(2, 9))
        cost, supply = random_instance(rng, n)
        res = min_cost_flow(cost, supply)
        assert res.value == pytest.approx(lp_min_cost_flow(cost, supply), rel=1e-9, abs=1e-9)
        f = res.flow
        np.testing.assert_allclose(f.sum(axis=1) - f.sum(axis=0), supply, atol=1e-9)
        assert (f >= 0).all()
        p = res.potential
        finite = np.isfinite(cost)
        rc = np.where(finite, cost + p[:, None] - p[None, :], np.inf)
        assert rc[finite].min() >= -1e-9
        assert np.all(np.abs(rc[f > 1e-12]) <= 1e-9)
        # reverse residual arcs: reduced cost of v->u is -rc[u, v], must also be >= 0
        assert np.all(-rc[f > 1e-12] >= -1e-9)


def test_zero_supply():
    res = min_cost_flow(np.array([[np.inf, 1.0], [1.0, np.inf]]), np.zeros(2))
    assert res.value == 0 and res.augmentations == 0


def test_errors():
    with pytest.raises(PolyCurrentsError):
        min_cost_flow(np.array([[0.0, -1.0], [1.0, 0.0]]), np.zeros(2))
    with pytest.raises(PolyCurrentsError):
        min_cost_flow(np.zeros((2, 2)), np.zeros(3))
    with pytest.raises(InfeasibleFlowError):
        min_cost_flow(np.full((2, 2), np.inf), np.array([1.0, -1.0]))
