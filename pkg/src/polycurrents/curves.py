"""Curve space at desk scale: parametric length, Frechet-type distance, spiral demo."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import kernels
from .currents import Affine, Form, PolyhedralCurrent, evaluate
from .decomposition import synthesize
from .errors import PolyCurrentsError, UnsupportedGeodesicError
from .measures import total_variation
from .paths import Path, Transport
from .spaces import EmbeddedSpace, parse_p

_METRIC = {1.0: "cityblock", 2.0: "euclidean", math.inf: "chebyshev"}


def _polyline(curve, space) -> tuple[np.ndarray, float]:
    if isinstance(curve, Path):
        if not isinstance(space, EmbeddedSpace):
            raise UnsupportedGeodesicError("curve coordinates need an embedded space")
        return space.points[list(curve.vertices)], space.p
    pts = np.atleast_2d(np.asarray(curve, dtype=float))
    p = space.p if isinstance(space, EmbeddedSpace) else 2.0
    return pts, p


def parametric_length(curve, space=None, p=None) -> float:
    """Sum of consecutive distances along a path or a coordinate polyline."""
    if isinstance(curve, Path) and space is not None and not isinstance(space, EmbeddedSpace):
        return curve.length(space)
    pts, q = _polyline(curve, space)
    q = q if p is None else parse_p(p)
    if len(pts) < 2:
        return 0.0
    return math.fsum(np.linalg.norm(np.diff(pts, axis=0), ord=q, axis=1))


def densify_polyline(points: np.ndarray, per_unit: float, p: float = 2.0) -> np.ndarray:
    """Subdivide every segment into ``ceil(length * per_unit)`` equal pieces."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) < 2 or per_unit <= 0:
        return pts
    out = [pts[:1]]
    for a, b in zip(pts[:-1], pts[1:]):
        k = max(1, int(math.ceil(np.linalg.norm(b - a, ord=p) * per_unit)))
        t = (np.arange(1, k + 1) / k)[:, None]
        out.append(a + t * (b - a))
    return np.vstack(out)


def discrete_frechet(P, Q, p: float = 2.0) -> float:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if len(P) == 0 or len(Q) == 0:
        raise PolyCurrentsError("curves must have at least one vertex")
    table = np.ascontiguousarray(cdist(P, Q, metric=_METRIC[parse_p(p)]))
    return float(kernels.frechet(table))


def theta_distance(c1, c2, space=None, densify: float = 16.0) -> float:
    """Discrete Frechet distance between two curves after densification.

    ``densify`` is the number of sample points per unit length. The
    result is an upper bound for the distance over increasing
    reparameterisations; the excess is at most the longest densified segment.
    """
    P, p = _polyline(c1, space)
    Q, _ = _polyline(c2, space)
    return discrete_frechet(densify_polyline(P, densify, p), densify_polyline(Q, densify, p), p)


def spiral_points(nu: int, segments_per_turn: int = 64) -> np.ndarray:
    t = np.arange(segments_per_turn * nu + 1) / (segments_per_turn * nu)
    r = 1.0 + t / nu
    ang = 2.0 * np.pi * nu * t
    return np.column_stack([r * np.cos(ang), r * np.sin(ang)])


def circle_current(segments: int = 64) -> PolyhedralCurrent:
    ang = 2.0 * np.pi * np.arange(segments) / segments
    space = EmbeddedSpace(np.column_stack([np.cos(ang), np.sin(ang)]))
    return PolyhedralCurrent(space, [(k, (k + 1) % segments, 1.0) for k in range(segments)])


def form_panel() -> list[Form]:
    """Fixed affine forms used to compare spiral currents with the circle."""
    fs = [Affine((0.0, 0.0), 1.0), Affine((1.0, 0.0)), Affine((0.0, 1.0)), Affine((1.0, -1.0), 1.0)]
    pis = [Affine((1.0, 0.0)), Affine((0.0, 1.0)), Affine((1.0, -2.0))]
    return [Form(f, pi) for f in fs for pi in pis]


@dataclass(frozen=True)
class SpiralRow:
    nu: int
    eta_mass: float
    boundary_tv: float
    max_form_err: float


def spiral_suite(levels, segments_per_turn: int = 64) -> list[SpiralRow]:
    """Spiral transports ``(1/nu) delta_{theta_nu}`` against the unit circle cycle.

    ``theta_nu(t) = (1 + t/nu)(cos 2 pi nu t, sin 2 pi nu t)`` is sampled
    with ``segments_per_turn * nu`` segments. Each row reports the total
    mass of the transport, the total variation of the boundary of its
    current, and the largest deviation from the circle current over the
    affine form panel.
    """
    circle = circle_current(segments_per_turn)
    panel = form_panel()
    circle_vals = [evaluate(circle, w) for w in panel]
    rows = []
    for nu in levels:
        nu = int(nu)
        if nu < 1:
            raise PolyCurrentsError("spiral levels must be >= 1")
        space = EmbeddedSpace(spiral_points(nu, segments_per_turn))
        eta = Transport([(1.0 / nu, Path(range(len(space))))])
        T = synthesize(eta, space)
        err = max(abs(evaluate(T, w) - c) for w, c in zip(panel, circle_vals))
        rows.append(SpiralRow(nu, eta.total_mass(), total_variation(T.boundary()), err))
    return rows
