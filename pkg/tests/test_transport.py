import math

import numpy as np
import pytest

from oracles import brute_force_w1, lp_w1
from polycurrents import (
    AtomicMeasure,
    EmbeddedSpace,
    FiniteMetricSpace,
    Path,
    Transport,
    beckmann,
    decompose,
    duality_gap,
    kantorovich,
    normalize_masses,
    plan_to_transport,
    transport_cost,
)
from polycurrents.errors import LipschitzError, PolyCurrentsError, UnbalancedError, UnsupportedGeodesicError
from polycurrents.transport import Plan, direct_transport


@pytest.fixture
def square():
    return EmbeddedSpace([[0, 0], [1, 0], [0, 1], [1, 1]])


def random_instance(rng, m, n, p=2):
    pts = np.round(rng.uniform(-5, 5, size=(m + n, 2)), 6)
    space = EmbeddedSpace(pts, p)
    a = rng.uniform(0.2, 2.0, size=m)
    b = rng.uniform(0.2, 2.0, size=n)
    b *= a.sum() / b.sum()
    plus = AtomicMeasure(zip(range(m), a.tolist()))
    minus = AtomicMeasure(zip(range(m, m + n), b.tolist()))
    # rebalance the last atom so totals agree to the last bit
    diff = plus.total() - minus.total()
    minus = minus + AtomicMeasure.dirac(m + n - 1, diff)
    return space, plus, minus


def test_equal_measures(square):
    mu = AtomicMeasure([(0, 1.0), (3, 2.0)])
    kr = kantorovich(mu, mu, square)
    assert kr.w1 == 0.0
    assert sorted(kr.plan.entries) == [(0, 0, 1.0), (3, 3, 2.0)]
    res = beckmann(mu, mu, square)
    assert not res.current and res.certified


def test_single_pair(square):
    kr = kantorovich(AtomicMeasure.dirac(3), AtomicMeasure.dirac(0), square)
    assert kr.w1 == pytest.approx(math.sqrt(2))
    assert kr.plan.entries == ((3, 0, 1.0),)
    res = beckmann(AtomicMeasure.dirac(3), AtomicMeasure.dirac(0), square)
    assert res.current.edges == ((0, 3, 1.0),)
    assert res.current.mass() == pytest.approx(math.sqrt(2))


def test_two_by_two(square):
    plus = AtomicMeasure([(0, 1.0), (1, 1.0)])
    minus = AtomicMeasure([(2, 1.0), (3, 1.0)])
    kr = kantorovich(plus, minus, square)
    assert kr.w1 == pytest.approx(2.0)
    assert sorted(kr.plan.entries) == [(0, 2, 1.0), (1, 3, 1.0)]
    eta, _ = plan_to_transport(kr.plan, square)
    assert sorted((w, p.vertices) for w, p in eta.atoms) == [(1.0, (2, 0)), (1.0, (3, 1))]
    assert eta.cost(square) == pytest.approx(2.0)
    assert brute_force_w1([1, 1], [1, 1], square.pairwise([0, 1], [2, 3])) == pytest.approx(2.0)


def test_plan_to_transport_examples(square):
    assert plan_to_transport(Plan(()), square)[0].atoms == ()
    eta, S = plan_to_transport(Plan(((3, 0, 0.5),)), square, k=3)
    assert len(eta) == 1 and len(eta.atoms[0][1]) == 4 and len(S) == 6
    assert eta.cost(S) == pytest.approx(0.5 * math.sqrt(2), rel=1e-12)
    with pytest.raises(UnsupportedGeodesicError):
        plan_to_transport(Plan(((1, 0, 1.0),)), FiniteMetricSpace([[0, 1], [1, 0]]))


def test_errors(square):
    with pytest.raises(UnbalancedError, match="plus=1.0, minus=2.0"):
        kantorovich(AtomicMeasure.dirac(0), AtomicMeasure.dirac(1, 2.0), square)
    with pytest.raises(PolyCurrentsError):
        kantorovich(AtomicMeasure(), AtomicMeasure(), square)
    with pytest.raises(PolyCurrentsError):
        kantorovich(AtomicMeasure.dirac(0, -1.0), AtomicMeasure.dirac(1, -1.0), square)


def test_normalize_masses(square):
    plus, minus = normalize_masses(AtomicMeasure.dirac(0, 2.0), AtomicMeasure([(1, 1.0), (2, 3.0)]))
    assert minus.total() == pytest.approx(2.0)
    assert kantorovich(plus, minus, square).w1 >= 0


def test_flow_matches_brute_force_small(rng):
    # every support size up to 4 x 4
    for m in range(1, 5):
        for n in range(1, 5):
            for _ in range(3):
                space, plus, minus = random_instance(rng, m, n)
                kr = kantorovich(plus, minus, space)
                D = space.pairwise(plus.support, minus.support)
                expected = brute_force_w1([w for _, w in plus.atoms], [w for _, w in minus.atoms], D)
                assert kr.w1 == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_matches_lp_larger(rng):
    for trial in range(15):
        space, plus, minus = random_instance(rng, int(rng.integers(5, 21)), int(rng.integers(5, 21)), p=[1, 2, "inf"][trial % 3])
        kr = kantorovich(plus, minus, space)
        D = space.pairwise(plus.support, minus.support)
        expected = lp_w1([w for _, w in plus.atoms], [w for _, w in minus.atoms], D)
        assert kr.w1 == pytest.approx(expected, rel=1e-9)


def test_beckmann_certificate_random(rng):
    for trial in range(20):
        space, plus, minus = random_instance(rng, int(rng.integers(1, 8)), int(rng.integers(1, 8)), p=[1, 2, "inf"][trial % 3])
        res = beckmann(plus, minus, space)
        assert res.certified, res.certificate
        assert res.current.boundary().isclose(plus - minus, atol=1e-12)
        assert transport_cost(res.transport, space) == pytest.approx(res.w1, rel=1e-9)


def test_beckmann_round_trip_through_decompose(rng):
    for _ in range(15):
        space, plus, minus = random_instance(rng, 4, 5)
        res = beckmann(plus, minus, space)
        eta = decompose(res.current)
        assert eta.cost(space) == pytest.approx(res.w1, rel=1e-9)
        assert eta.final().isclose(plus, atol=1e-9) and eta.initial().isclose(minus, atol=1e-9)


def test_finite_metric_beckmann():
    M = FiniteMetricSpace([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    res = beckmann(AtomicMeasure.dirac(2), AtomicMeasure.dirac(0), M)
    assert res.current.edges == ((0, 2, 1.0),)
    assert res.w1 == 2.0 and res.certified


def test_duality_gap_examples(square):
    plus, minus = AtomicMeasure.dirac(3), AtomicMeasure.dirac(0)
    kr = kantorovich(plus, minus, square)
    assert duality_gap(plus, minus, {0: 0.0, 3: 0.0}, kr.w1, square) == pytest.approx(kr.w1)
    assert abs(duality_gap(plus, minus, kr.potentials, kr.w1, square)) <= 1e-9
    # f = d(., x0) with x0 the minus point is tight
    f = {z: square.distance(z, 0) for z in (0, 3)}
    assert duality_gap(plus, minus, f, kr.w1, square) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(LipschitzError):
        duality_gap(plus, minus, {0: 0.0, 3: 5.0}, kr.w1, square)
    with pytest.raises(PolyCurrentsError):
        duality_gap(plus, minus, {0: 0.0}, kr.w1, square)


def test_potentials_lipschitz_and_tight(rng):
    for _ in range(20):
        space, plus, minus = random_instance(rng, 5, 6)
        kr = kantorovich(plus, minus, space)
        pts = sorted(kr.potentials)
        vals = np.array([kr.potentials[z] for z in pts])
        D = space.pairwise(pts, pts)
        assert (np.abs(vals[:, None] - vals[None, :]) <= D + 1e-9).all()
        for i, j, _ in kr.plan.entries:
            assert kr.potentials[i] - kr.potentials[j] == pytest.approx(space.distance(i, j), abs=1e-9)


def test_transport_cost_checks(square):
    plus, minus = AtomicMeasure.dirac(3), AtomicMeasure.dirac(0)
    assert transport_cost(Transport(), square) == 0
    opt = beckmann(plus, minus, square).transport
    assert transport_cost(opt, square, plus, minus) == pytest.approx(math.sqrt(2))
    detour = Transport([(1.0, [0, 1, 3])])
    assert transport_cost(detour, square, plus, minus) == pytest.approx(2.0)
    with pytest.raises(PolyCurrentsError):
        transport_cost(detour, square, minus, plus)


def test_direct_transport():
    eta = direct_transport(Plan(((1, 0, 2.0), (2, 2, 1.0))))
    assert eta.atoms == ((2.0, Path([0, 1])), (1.0, Path([2])))
