"""Polyhedral one-dimensional currents, differential forms, and grid vector-field currents."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .config import ATOL, ZERO, negligible
from .errors import PolyCurrentsError, SpaceMismatchError, UnsupportedGeodesicError
from .measures import AtomicMeasure
from .spaces import EmbeddedSpace, Space, dual_exponent, norm, parse_p

Edge = tuple[int, int, float]


def _canonical(edges: Iterable[Sequence], n_points: int) -> tuple[Edge, ...]:
    parts: dict[tuple[int, int], list[float]] = defaultdict(list)
    for e in edges:
        tail, head, w = int(e[0]), int(e[1]), float(e[2])
        if not math.isfinite(w):
            raise PolyCurrentsError(f"non-finite weight on edge {tail}->{head}")
        if tail == head:
            raise PolyCurrentsError(f"edge {tail}->{head} has coinciding endpoints")
        for v in (tail, head):
            if not 0 <= v < n_points:
                raise IndexError(f"edge vertex {v} out of range for space with {n_points} points")
        # one signed slot per unordered pair; sign carries orientation
        if tail < head:
            parts[(tail, head)].append(w)
        else:
            parts[(head, tail)].append(-w)
    out = []
    for (a, b), ws in parts.items():
        net = math.fsum(ws)
        if negligible(net, sum(abs(w) for w in ws)):
            continue
        out.append((a, b, net) if net > 0 else (b, a, -net))
    out.sort(key=lambda e: (e[0], e[1]))
    return tuple(out)


class PolyhedralCurrent:
    """Weighted oriented edges between points of a space.

    Stored in canonical form: positive weights, one edge per unordered pair
    of points (antiparallel contributions cancel, parallel ones merge),
    sorted by ``(tail, head)``. The position in :attr:`edges` is the edge
    index used for tie-breaking elsewhere.
    """

    __slots__ = ("space", "edges", "_lookup")

    def __init__(self, space: Space, edges: Iterable[Sequence] = ()):
        self.space = space
        self.edges: tuple[Edge, ...] = _canonical(edges, len(space))
        self._lookup = {(t, h): w for t, h, w in self.edges}

    def __repr__(self):
        return f"PolyhedralCurrent({len(self.edges)} edges, mass={self.mass():.6g})"

    def __len__(self):
        return len(self.edges)

    def __bool__(self):
        return bool(self.edges)

    def __eq__(self, other):
        """Exact edge-wise equality on the same space."""
        if not isinstance(other, PolyhedralCurrent):
            return NotImplemented
        return self.space == other.space and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def weight(self, tail: int, head: int) -> float:
        """Signed weight along ``tail -> head`` (negative if stored reversed)."""
        if (tail, head) in self._lookup:
            return self._lookup[(tail, head)]
        return -self._lookup.get((head, tail), 0.0)

    def as_dict(self) -> dict[tuple[int, int], float]:
        return dict(self._lookup)

    def _same_space(self, other: PolyhedralCurrent):
        if self.space is not other.space and self.space != other.space:
            raise SpaceMismatchError("currents live on different spaces")

    def __add__(self, other: PolyhedralCurrent) -> PolyhedralCurrent:
        self._same_space(other)
        return PolyhedralCurrent(self.space, self.edges + other.edges)

    def __neg__(self) -> PolyhedralCurrent:
        return PolyhedralCurrent(self.space, [(h, t, w) for t, h, w in self.edges])

    def __sub__(self, other: PolyhedralCurrent) -> PolyhedralCurrent:
        return self + (-other)

    def scaled(self, c: float) -> PolyhedralCurrent:
        if c < 0:
            raise PolyCurrentsError("scale factor must be nonnegative")
        return PolyhedralCurrent(self.space, [(t, h, c * w) for t, h, w in self.edges])

    def lengths(self) -> np.ndarray:
        if not self.edges:
            return np.zeros(0)
        t, h, _ = zip(*self.edges)
        return np.asarray(self.space.distances(t, h), dtype=float)

    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=float)

    def mass(self) -> float:
        if not self.edges:
            return 0.0
        return math.fsum(self.weights() * self.lengths())

    def boundary(self) -> AtomicMeasure:
        pairs = []
        for t, h, w in self.edges:
            pairs.append((h, w))
            pairs.append((t, -w))
        return AtomicMeasure(pairs)

    def vertices(self) -> set[int]:
        return {v for t, h, _ in self.edges for v in (t, h)}

    def isclose(self, other: PolyhedralCurrent, rtol: float = 0.0, atol: float = ATOL) -> bool:
        return self.max_deviation(other, rtol) <= atol

    def max_deviation(self, other: PolyhedralCurrent, rtol: float = 0.0) -> float:
        """Largest per-edge weight difference, after discounting ``rtol`` times the larger weight."""
        keys = {(min(t, h), max(t, h)) for t, h, _ in self.edges + other.edges}
        worst = 0.0
        for a, b in keys:
            x, y = self.weight(a, b), other.weight(a, b)
            worst = max(worst, abs(x - y) - rtol * max(abs(x), abs(y)))
        return worst


def mass(T: PolyhedralCurrent) -> float:
    return T.mass()


def boundary(T: PolyhedralCurrent) -> AtomicMeasure:
    return T.boundary()


def add(T1: PolyhedralCurrent, T2: PolyhedralCurrent) -> PolyhedralCurrent:
    return T1 + T2


def scale(T: PolyhedralCurrent, c: float) -> PolyhedralCurrent:
    return T.scaled(c)


def restrict(
    T: PolyhedralCurrent,
    vertices: Iterable[int] | None = None,
    keep: Callable[[int, int, float], bool] | None = None,
) -> PolyhedralCurrent:
    """Restriction to a vertex set (edges with both ends inside) and/or an edge predicate."""
    vs = None if vertices is None else set(vertices)
    out = []
    for t, h, w in T.edges:
        if vs is not None and not (t in vs and h in vs):
            continue
        if keep is not None and not keep(t, h, w):
            continue
        out.append((t, h, w))
    return PolyhedralCurrent(T.space, out)


def is_subcurrent(S: PolyhedralCurrent, T: PolyhedralCurrent, tol: float = ATOL):
    """Decide ``S <= T`` edge by edge.

    Returns ``(True, fractions)`` where ``fractions`` maps each edge
    ``(tail, head)`` of ``T`` to ``w_S / w_T`` in [0, 1], or ``(False, None)``.
    """
    S._same_space(T)
    for t, h, w in S.edges:
        wt = T.weight(t, h)
        if wt <= 0 or w > wt + tol:
            return False, None
    fractions = {(t, h): min(1.0, max(0.0, S.weight(t, h)) / w) for t, h, w in T.edges}
    return True, fractions


def subcurrent_defect(S: PolyhedralCurrent, T: PolyhedralCurrent) -> float:
    """``M(T - S) + M(S) - M(T)``; nonnegative, zero exactly when ``S <= T``."""
    return (T - S).mass() + S.mass() - T.mass()


def push_forward(
    T: PolyhedralCurrent,
    vertex_map: Mapping[int, int] | Sequence[int] | Callable[[int], int],
    target_space: Space | None = None,
) -> PolyhedralCurrent:
    """Re-index edges through ``vertex_map``; edges collapsed to a point vanish."""
    fn = vertex_map if callable(vertex_map) else vertex_map.__getitem__
    space = T.space if target_space is None else target_space
    out = []
    for t, h, w in T.edges:
        a, b = int(fn(t)), int(fn(h))
        if a != b:
            out.append((a, b, w))
    return PolyhedralCurrent(space, out)


def push_forward_measure(mu: AtomicMeasure, vertex_map) -> AtomicMeasure:
    fn = vertex_map if callable(vertex_map) else vertex_map.__getitem__
    return AtomicMeasure((int(fn(i)), w) for i, w in mu.atoms)


def interior_overlaps(T: PolyhedralCurrent, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Pairs of edge indices whose embedded segments share a piece of positive length."""
    if not isinstance(T.space, EmbeddedSpace):
        raise UnsupportedGeodesicError("overlap detection needs coordinates")
    P = T.space.points
    segs = [(P[t], P[h]) for t, h, _ in T.edges]
    found = []
    for i in range(len(segs)):
        a0, a1 = segs[i]
        da = a1 - a0
        la = float(np.dot(da, da))
        for j in range(i + 1, len(segs)):
            b0, b1 = segs[j]
            # collinear: both endpoints of b on the line through a
            r0, r1 = b0 - a0, b1 - a0
            if np.linalg.norm(r0 - np.dot(r0, da) / la * da) > tol:
                continue
            if np.linalg.norm(r1 - np.dot(r1, da) / la * da) > tol:
                continue
            s0, s1 = sorted((np.dot(r0, da) / la, np.dot(r1, da) / la))
            if min(1.0, s1) - max(0.0, s0) > tol:
                found.append((i, j))
    return found


@dataclass(frozen=True)
class Affine:
    """``x -> <gradient, x> + offset``; evaluates row-wise on coordinate arrays."""

    gradient: tuple[float, ...]
    offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gradient", tuple(float(g) for g in self.gradient))
        object.__setattr__(self, "offset", float(self.offset))

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ np.asarray(self.gradient) + self.offset

    @classmethod
    def constant(cls, value: float, dimension: int = 2) -> Affine:
        return cls((0.0,) * dimension, value)

    def lipschitz(self, p: float) -> float:
        return norm(self.gradient, dual_exponent(parse_p(p)))


class Form:
    """One-form ``f dpi``.

    ``f`` and ``pi`` are :class:`Affine` (exact) or callables mapping an
    ``(m, dim)`` coordinate array to ``m`` values. ``f_sup`` and ``pi_lip``
    declare bounds; for affine parts they are derived when omitted and a
    declared Lipschitz constant is checked against the dual norm of the
    gradient.
    """

    def __init__(self, f, pi, *, f_sup: float | None = None, pi_lip: float | None = None):
        self.f = f
        self.pi = pi
        self.f_sup = f_sup
        self.pi_lip = pi_lip

    @property
    def is_affine(self) -> bool:
        return isinstance(self.f, Affine) and isinstance(self.pi, Affine)

    def lipschitz(self, p: float) -> float:
        if isinstance(self.pi, Affine):
            exact = self.pi.lipschitz(p)
            if self.pi_lip is not None:
                if self.pi_lip < exact * (1 - 1e-12):
                    raise PolyCurrentsError(
                        f"declared Lipschitz constant {self.pi_lip} is below the gradient's dual norm {exact}"
                    )
                return self.pi_lip
            return exact
        if self.pi_lip is None:
            raise PolyCurrentsError("callable pi needs a declared Lipschitz constant")
        return self.pi_lip

    def sup_on(self, points: np.ndarray) -> float:
        """Sup of |f| over the convex hulls of segments with the given endpoints."""
        if self.f_sup is not None:
            return self.f_sup
        if isinstance(self.f, Affine):
            if len(points) == 0:
                return abs(self.f.offset)
            return float(np.max(np.abs(self.f(points))))
        raise PolyCurrentsError("callable f needs a declared sup bound")


def evaluate(T: PolyhedralCurrent, form: Form, refinement: int = 1) -> float:
    """``T(f dpi)`` by the midpoint Riemann-Stieltjes sum on each edge.

    Exact when ``f`` is affine (or constant) and ``pi`` is affine.
    """
    if not isinstance(T.space, EmbeddedSpace):
        raise UnsupportedGeodesicError("forms are evaluated on coordinates; use an embedded space")
    if refinement < 1:
        raise PolyCurrentsError("refinement must be >= 1")
    if not T.edges:
        return 0.0
    P = T.space.points
    t, h, w = zip(*T.edges)
    A, B = P[list(t)], P[list(h)]
    w = np.asarray(w)
    terms = []
    for s in range(refinement):
        a = A + (s / refinement) * (B - A)
        b = A + ((s + 1) / refinement) * (B - A)
        mid = 0.5 * (a + b)
        f_mid = np.asarray(form.f(mid), dtype=float).reshape(-1)
        dpi = np.asarray(form.pi(b), dtype=float).reshape(-1) - np.asarray(form.pi(a), dtype=float).reshape(-1)
        terms.append(w * f_mid * dpi)
    return math.fsum(np.concatenate(terms))


def mass_bound(T: PolyhedralCurrent, form: Form) -> float:
    """``sup|f| * Lip(pi) * M(T)``, the bound on ``|T(f dpi)|``."""
    if not T.edges:
        return 0.0
    pts = T.space.points[sorted(T.vertices())]
    return form.sup_on(pts) * form.lipschitz(T.space.p) * T.mass()


def stokes_pairing(T: PolyhedralCurrent, pi: Affine | Callable) -> float:
    """Pairing of ``boundary(T)`` with ``pi``; equals ``evaluate(T, 1 dpi)``."""
    mu = T.boundary()
    if not mu:
        return 0.0
    idx = list(mu.support)
    vals = np.asarray(pi(T.space.points[idx]), dtype=float).reshape(-1)
    return mu.pair(dict(zip(idx, vals)))


class GridCurrent:
    """Piecewise-constant planar vector field ``l`` on an axis-aligned rectangle.

    ``field`` lists one 2-vector per cell in row-major order: cell ``(i, j)``
    (``i`` along x, ``j`` along y) is entry ``j * nx + i``. The current acts
    by ``T(f dpi) = integral of f <grad pi, l> dx``.
    """

    def __init__(self, rect: Sequence[float], shape: Sequence[int], field, p=2):
        x0, y0, x1, y1 = (float(v) for v in rect)
        if not (x1 > x0 and y1 > y0):
            raise PolyCurrentsError(f"degenerate rectangle {list(rect)}")
        nx, ny = (int(v) for v in shape)
        if nx < 1 or ny < 1:
            raise PolyCurrentsError(f"grid shape must be positive, got {list(shape)}")
        arr = np.array(field, dtype=float)
        if arr.shape == (2,):
            arr = np.tile(arr, (nx * ny, 1))
        if arr.shape != (nx * ny, 2):
            raise PolyCurrentsError(f"field must hold {nx * ny} 2-vectors, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise PolyCurrentsError("field entries must be finite")
        arr.setflags(write=False)
        self.rect = (x0, y0, x1, y1)
        self.shape = (nx, ny)
        self.field = arr
        self.p = parse_p(p)

    @property
    def cell_size(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.rect
        nx, ny = self.shape
        return (x1 - x0) / nx, (y1 - y0) / ny

    @property
    def cell_area(self) -> float:
        hx, hy = self.cell_size
        return hx * hy

    def cell(self, i: int, j: int) -> np.ndarray:
        return self.field[j * self.shape[0] + i]

    def cell_box(self, i: int, j: int) -> tuple[float, float, float, float]:
        x0, y0, _, _ = self.rect
        hx, hy = self.cell_size
        return x0 + i * hx, y0 + j * hy, x0 + (i + 1) * hx, y0 + (j + 1) * hy

    def node_index(self, i: int, j: int) -> int:
        return j * (self.shape[0] + 1) + i

    def node_space(self) -> EmbeddedSpace:
        """Grid nodes as an embedded space; node ``(i, j)`` has index ``j * (nx + 1) + i``."""
        x0, y0, x1, y1 = self.rect
        nx, ny = self.shape
        xs = np.linspace(x0, x1, nx + 1)
        ys = np.linspace(y0, y1, ny + 1)
        X, Y = np.meshgrid(xs, ys)
        return EmbeddedSpace(np.column_stack([X.ravel(), Y.ravel()]), self.p)

    def refined(self, factor: int) -> GridCurrent:
        """The same field on a grid with every cell split into ``factor x factor`` cells."""
        factor = int(factor)
        if factor < 1:
            raise PolyCurrentsError("refinement factor must be >= 1")
        nx, ny = self.shape
        L = self.field.reshape(ny, nx, 2)
        L = np.repeat(np.repeat(L, factor, axis=0), factor, axis=1)
        return GridCurrent(self.rect, (nx * factor, ny * factor), L.reshape(-1, 2), self.p)

    def mass(self) -> float:
        return math.fsum(np.linalg.norm(self.field, ord=self.p, axis=1) * self.cell_area)

    def boundary(self) -> AtomicMeasure:
        """Boundary lumped onto grid nodes.

        Each cell face carries the jump of the normal component of ``l``
        across it; integrating against piecewise-linear nodal functions puts
        half of each face's flux on each of its two end nodes. The result is
        the net flux into the node's dual cell, so sources of ``l`` get
        negative atoms and sinks positive ones.
        """
        nx, ny = self.shape
        hx, hy = self.cell_size
        L = self.field.reshape(ny, nx, 2)
        pairs = []
        for j in range(ny):
            for i in range(nx + 1):
                left = L[j, i - 1, 0] if i > 0 else 0.0
                right = L[j, i, 0] if i < nx else 0.0
                q = 0.5 * (left - right) * hy
                if q:
                    pairs.append((self.node_index(i, j), q))
                    pairs.append((self.node_index(i, j + 1), q))
        for j in range(ny + 1):
            for i in range(nx):
                below = L[j - 1, i, 1] if j > 0 else 0.0
                above = L[j, i, 1] if j < ny else 0.0
                q = 0.5 * (below - above) * hx
                if q:
                    pairs.append((self.node_index(i, j), q))
                    pairs.append((self.node_index(i + 1, j), q))
        return AtomicMeasure(pairs)

    def evaluate(self, form: Form) -> float:
        """``T(f dpi)`` for affine ``f`` and ``pi`` (exact: cell-centre rule on an affine integrand)."""
        if not form.is_affine:
            raise PolyCurrentsError("grid evaluation supports affine forms only")
        nx, ny = self.shape
        centres = []
        for j in range(ny):
            for i in range(nx):
                bx0, by0, bx1, by1 = self.cell_box(i, j)
                centres.append(((bx0 + bx1) / 2, (by0 + by1) / 2))
        f_c = form.f(np.array(centres))
        grad = np.asarray(form.pi.gradient)
        return math.fsum(f_c * (self.field @ grad) * self.cell_area)


def grid_mass(G: GridCurrent) -> float:
    return G.mass()


def grid_boundary(G: GridCurrent) -> AtomicMeasure:
    return G.boundary()
