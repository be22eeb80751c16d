"""Wasserstein-1 transport, its minimal-mass current formulation, and duality certificates.

Orientation convention: a current with boundary ``plus - minus`` carries
mass *from* the atoms of ``minus`` *to* the atoms of ``plus``. Transports
built here therefore start on ``minus`` and end on ``plus``, so that
``eta.final() == plus`` and ``eta.initial() == minus``, matching the
endpoint convention of :func:`polycurrents.decomposition.decompose`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import ATOL, RTOL, ZERO
from .currents import PolyhedralCurrent
from .decomposition import extract_cycles, synthesize
from .errors import LipschitzError, PolyCurrentsError, UnbalancedError, UnsupportedGeodesicError
from .flow import min_cost_flow
from .measures import AtomicMeasure
from .paths import Path, Transport
from .spaces import EmbeddedSpace, geodesic_chord


@dataclass(frozen=True)
class Plan:
    """Coupling of ``plus`` (rows) and ``minus`` (columns) as ``(plus_index, minus_index, mass)`` entries."""

    entries: tuple[tuple[int, int, float], ...]

    def row_marginal(self) -> AtomicMeasure:
        return AtomicMeasure((i, m) for i, _, m in self.entries)

    def column_marginal(self) -> AtomicMeasure:
        return AtomicMeasure((j, m) for _, j, m in self.entries)

    def cost(self, space) -> float:
        return math.fsum(m * space.distance(i, j) for i, j, m in self.entries)

    def marginal_residual(self, plus: AtomicMeasure, minus: AtomicMeasure) -> float:
        return max(self.row_marginal().max_deviation(plus), self.column_marginal().max_deviation(minus))


@dataclass(frozen=True)
class KantorovichResult:
    plan: Plan
    w1: float
    potentials: dict[int, float]


def check_balanced(plus: AtomicMeasure, minus: AtomicMeasure, atol: float = ATOL) -> None:
    for name, mu in (("plus", plus), ("minus", minus)):
        if any(w < 0 for _, w in mu.atoms):
            raise PolyCurrentsError(f"{name} measure must be nonnegative")
        if not mu:
            raise PolyCurrentsError(f"{name} measure has empty support")
    a, b = plus.total(), minus.total()
    if abs(a - b) > atol:
        raise UnbalancedError(a, b)


def normalize_masses(plus: AtomicMeasure, minus: AtomicMeasure) -> tuple[AtomicMeasure, AtomicMeasure]:
    """Rescale ``minus`` to the total mass of ``plus``."""
    b = minus.total()
    if b <= 0:
        raise PolyCurrentsError("minus measure has no mass")
    return plus, minus * (plus.total() / b)


def kantorovich(plus: AtomicMeasure, minus: AtomicMeasure, space) -> KantorovichResult:
    """Optimal plan, W1 value and 1-Lipschitz Kantorovich potentials.

    The plan comes from successive shortest paths on the bipartite graph
    ``supp(plus) x supp(minus)``. The node potentials of the solver give a
    dual pair ``(u, v)`` with ``u_i - v_j <= d(x_i, y_j)``, tight on the
    plan; the potential returned is its 1-Lipschitz extension
    ``f(z) = min_j (v_j + d(z, y_j))`` on the union of both supports, so
    that ``sum f d(plus - minus) == W1``.
    """
    check_balanced(plus, minus)
    xs, a = zip(*plus.atoms)
    ys, b = zip(*minus.atoms)
    m, n = len(xs), len(ys)
    D = space.pairwise(xs, ys)
    cost = np.full((m + n, m + n), np.inf)
    cost[:m, m:] = D
    supply = np.concatenate([np.asarray(a), -np.asarray(b)])
    res = min_cost_flow(cost, supply)
    gamma = res.flow[:m, m:]
    # drop round-off crumbs left by augmentation
    rows, cols = np.nonzero(gamma > ZERO)
    plan = Plan(tuple((int(xs[r]), int(ys[c]), float(gamma[r, c])) for r, c in zip(rows, cols)))
    w1 = math.fsum(gamma[rows, cols] * D[rows, cols])

    v = -res.potential[m:]
    union = sorted(set(xs) | set(ys))
    Dz = space.pairwise(union, ys)
    f = np.min(v[None, :] + Dz, axis=1)
    potentials = {int(z): float(val) for z, val in zip(union, f)}
    return KantorovichResult(plan, float(w1), potentials)


def plan_to_transport(plan: Plan, space, k: int = 1) -> tuple[Transport, EmbeddedSpace]:
    """One atom per plan entry along the straight chord from the minus point to the plus point.

    Diagonal entries become constant paths. Returns the transport and the
    (possibly extended) space holding the chord subdivision points.
    """
    if not isinstance(space, EmbeddedSpace):
        raise UnsupportedGeodesicError(
            "plans lift to geodesic transports only in embedded spaces; "
            "a finite metric space need not be geodesic"
        )
    atoms = []
    for i, j, mass in plan.entries:
        if i == j:
            atoms.append((mass, Path([i])))
            continue
        space, path = geodesic_chord(space, j, i, k)
        atoms.append((mass, path))
    return Transport(atoms), space


def direct_transport(plan: Plan) -> Transport:
    """Plan entries as single-edge paths; the finite-metric stand-in for geodesics."""
    return Transport((mass, Path([j, i]) if i != j else Path([i])) for i, j, mass in plan.entries)


def transport_cost(eta: Transport, space, plus: AtomicMeasure | None = None, minus: AtomicMeasure | None = None) -> float:
    """``sum w * len(path)``.

    When ``plus`` and ``minus`` are given, ``eta`` must be admissible for
    them (ends on ``plus``, starts on ``minus``) and the cost is checked
    against W1 from below.
    """
    cost = eta.cost(space)
    if plus is not None and minus is not None:
        if not (eta.final().isclose(plus) and eta.initial().isclose(minus)):
            raise PolyCurrentsError("transport is not admissible for the given marginals")
        w1 = kantorovich(plus, minus, space).w1
        if cost < w1 - RTOL * max(1.0, w1):
            raise PolyCurrentsError(f"admissible transport cheaper than W1 ({cost!r} < {w1!r})")
    return cost


def duality_gap(
    plus: AtomicMeasure,
    minus: AtomicMeasure,
    f: dict[int, float],
    w1: float,
    space,
    tol: float = RTOL,
) -> float:
    """``W1 - sum f d(plus - minus)`` after checking that ``f`` is 1-Lipschitz on both supports."""
    pts = sorted(set(plus.support) | set(minus.support))
    missing = [z for z in pts if z not in f]
    if missing:
        raise PolyCurrentsError(f"potential undefined at points {missing}")
    vals = np.array([f[z] for z in pts])
    D = space.pairwise(pts, pts)
    excess = np.abs(vals[:, None] - vals[None, :]) - D
    if excess.size and excess.max() > tol:
        r, c = np.unravel_index(int(np.argmax(excess)), excess.shape)
        raise LipschitzError(
            f"potential is not 1-Lipschitz: |f({pts[r]}) - f({pts[c]})| exceeds d by {excess[r, c]:.3e}"
        )
    return float(w1 - (plus - minus).pair(f))


@dataclass
class BeckmannResult:
    current: PolyhedralCurrent
    transport: Transport
    plan: Plan
    w1: float
    potentials: dict[int, float]
    certificate: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return bool(self.certificate.get("passed"))


def beckmann(plus: AtomicMeasure, minus: AtomicMeasure, space, k: int = 1, tol: float = RTOL) -> BeckmannResult:
    """Minimal-mass current with boundary ``plus - minus`` built from an optimal plan.

    In an embedded space the transport runs along straight chords; in a
    finite metric space each plan entry becomes one direct edge. The
    certificate records primal and dual residuals, whether the current is
    acyclic, and an overall ``passed`` flag at tolerance ``tol``.
    """
    kr = kantorovich(plus, minus, space)
    if isinstance(space, EmbeddedSpace):
        eta, space = plan_to_transport(kr.plan, space, k)
    else:
        eta = direct_transport(kr.plan)
    T = synthesize(eta, space)
    C, _ = extract_cycles(T)
    scale = max(1.0, kr.w1)
    mass_res = abs(T.mass() - kr.w1)
    cost_res = abs(eta.cost(space) - kr.w1)
    bnd_res = T.boundary().max_deviation(plus - minus)
    marg_res = kr.plan.marginal_residual(plus, minus)
    gap = duality_gap(plus, minus, kr.potentials, kr.w1, space, tol)
    cert = {
        "mass_residual": mass_res,
        "transport_cost_residual": cost_res,
        "boundary_residual": bnd_res,
        "marginal_residual": marg_res,
        "duality_gap": gap,
        "cycle_mass": C.mass(),
        "acyclic": not C,
    }
    cert["passed"] = bool(
        mass_res <= tol * scale
        and cost_res <= tol * scale
        and bnd_res <= tol * scale
        and marg_res <= tol * scale
        and -tol * scale <= gap <= tol * scale
        and not C
    )
    return BeckmannResult(T, eta, kr.plan, kr.w1, kr.potentials, cert)
