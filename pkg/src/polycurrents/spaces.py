"""Finite ambient spaces: point clouds under an l^p norm, or explicit metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from .config import ATOL
from .errors import PolyCurrentsError, UnsupportedGeodesicError
from .paths import Path

_METRIC_NAMES = {1.0: "cityblock", 2.0: "euclidean", math.inf: "chebyshev"}


def parse_p(p) -> float:
    """Normalise a norm exponent; accepts 1, 2, inf and the strings ``"inf"``/``"infinity"``."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "∞"):
            return math.inf
        p = float(p)
    p = float(p)
    if p not in _METRIC_NAMES:
        raise PolyCurrentsError(f"norm exponent must be one of 1, 2, inf; got {p!r}")
    return p


def dual_exponent(p: float) -> float:
    return {1.0: math.inf, 2.0: 2.0, math.inf: 1.0}[p]


def norm(vector, p: float) -> float:
    return float(np.linalg.norm(np.asarray(vector, dtype=float), ord=p))


def _coord_key(row) -> tuple:
    # coordinates closer than ~1e-12 share a key and are treated as one point
    return tuple(float(x) + 0.0 for x in np.round(np.asarray(row, dtype=float), 12))


@dataclass(frozen=True, eq=False)
class EmbeddedSpace:
    """Points in R^dimension with distances from the l^p norm."""

    points: np.ndarray
    p: float = 2.0
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1 and pts.size == 0:
            pts = pts.reshape(0, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise PolyCurrentsError("points must be a sequence of coordinate tuples of equal length")
        if not np.all(np.isfinite(pts)):
            raise PolyCurrentsError("point coordinates must be finite")
        index = {}
        for i, row in enumerate(pts):
            key = _coord_key(row)
            if key in index:
                raise PolyCurrentsError(
                    f"points {index[key]} and {i} have identical coordinates {list(row)}"
                )
            index[key] = i
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "p", parse_p(self.p))
        object.__setattr__(self, "_index", index)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, EmbeddedSpace):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.p, self.points.shape, self.points.tobytes()))

    def _check(self, i: int) -> int:
        if not 0 <= i < len(self):
            raise IndexError(f"point index {i} out of range for space with {len(self)} points")
        return int(i)

    def coords(self, i: int) -> np.ndarray:
        return self.points[self._check(i)]

    def distance(self, i: int, j: int) -> float:
        i, j = self._check(i), self._check(j)
        if i == j:
            return 0.0
        return norm(self.points[i] - self.points[j], self.p)

    def distances(self, tails, heads) -> np.ndarray:
        """Elementwise distances between index arrays of equal length."""
        tails = np.asarray(tails, dtype=np.intp)
        heads = np.asarray(heads, dtype=np.intp)
        if tails.size == 0:
            return np.zeros(0)
        diff = self.points[tails] - self.points[heads]
        return np.linalg.norm(diff, ord=self.p, axis=1)

    def pairwise(self, rows, cols) -> np.ndarray:
        a = self.points[np.asarray(rows, dtype=np.intp)]
        b = self.points[np.asarray(cols, dtype=np.intp)]
        if len(a) == 0 or len(b) == 0:
            return np.zeros((len(a), len(b)))
        return cdist(a, b, metric=_METRIC_NAMES[self.p])

    def find(self, coords) -> int | None:
        return self._index.get(_coord_key(coords))

    def with_points(self, coords) -> tuple[EmbeddedSpace, list[int]]:
        """Return a space extended by ``coords`` and the index of each of them.

        Coordinates already present are not duplicated; their existing index
        is returned instead.
        """
        coords = np.asarray(coords, dtype=np.float64).reshape(-1, self.dimension)
        new_rows = []
        pending = {}
        out = []
        for row in coords:
            key = _coord_key(row)
            idx = self._index.get(key)
            if idx is None:
                idx = pending.get(key)
            if idx is None:
                idx = len(self) + len(new_rows)
                pending[key] = idx
                new_rows.append(row)
            out.append(idx)
        if not new_rows:
            return self, out
        return EmbeddedSpace(np.vstack([self.points, np.array(new_rows)]), self.p), out


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Abstract finite metric space given by its distance matrix."""

    d: np.ndarray

    def __post_init__(self):
        mat = np.array(self.d, dtype=np.float64, copy=True)
        report = validate_metric(mat)
        if report:
            shown = ", ".join(str(v) for v in report[:5])
            raise PolyCurrentsError(f"invalid metric ({len(report)} violations): {shown}")
        mat.setflags(write=False)
        object.__setattr__(self, "d", mat)

    def __len__(self) -> int:
        return self.d.shape[0]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return np.array_equal(self.d, other.d)

    def __hash__(self):
        return hash(self.d.tobytes())

    def _check(self, i: int) -> int:
        if not 0 <= i < len(self):
            raise IndexError(f"point index {i} out of range for space with {len(self)} points")
        return int(i)

    def distance(self, i: int, j: int) -> float:
        return float(self.d[self._check(i), self._check(j)])

    def distances(self, tails, heads) -> np.ndarray:
        return self.d[np.asarray(tails, dtype=np.intp), np.asarray(heads, dtype=np.intp)]

    def pairwise(self, rows, cols) -> np.ndarray:
        return self.d[np.ix_(np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp))]


Space = Union[EmbeddedSpace, FiniteMetricSpace]


def distance(space: Space, i: int, j: int) -> float:
    return space.distance(i, j)


class MetricViolation(NamedTuple):
    kind: str
    indices: tuple

    def __str__(self):
        return f"{self.kind}{self.indices}"


def validate_metric(matrix, tol: float = ATOL) -> list[MetricViolation]:
    """List every violated metric axiom of a square distance matrix.

    Triangle violations are reported as ``(a, b, c)`` with
    ``d(a, c) > d(a, b) + d(b, c) + tol`` and ``a < c``.
    """
    d = np.asarray(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise PolyCurrentsError(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    out: list[MetricViolation] = []
    if not np.all(np.isfinite(d)):
        bad = np.argwhere(~np.isfinite(d))
        return [MetricViolation("non-finite", tuple(int(x) for x in b)) for b in bad]
    for i in np.flatnonzero(np.diag(d) != 0.0):
        out.append(MetricViolation("nonzero-diagonal", (int(i),)))
    iu, ju = np.triu_indices(n, 1)
    for i, j in zip(iu, ju):
        if d[i, j] != d[j, i]:
            out.append(MetricViolation("asymmetric", (int(i), int(j))))
        if d[i, j] <= 0.0 or d[j, i] <= 0.0:
            out.append(MetricViolation("non-positive", (int(i), int(j))))
    if n >= 3:
        # viol[a, b, c]: d[a, c] > d[a, b] + d[b, c]
        viol = d[:, None, :] > d[:, :, None] + d[None, :, :] + tol
        for a, b, c in np.argwhere(viol):
            if a < c and b != a and b != c:
                out.append(MetricViolation("triangle", (int(a), int(b), int(c))))
    return out


def geodesic_chord(space: Space, i: int, j: int, k: int = 1) -> tuple[EmbeddedSpace, Path]:
    """Straight segment from point ``i`` to point ``j`` split into ``k`` pieces.

    Interior points are appended to the space (or reused when already
    present); the extended space is returned with the path.
    """
    if not isinstance(space, EmbeddedSpace):
        raise UnsupportedGeodesicError(
            "geodesic chords need coordinates; a finite metric space has no straight segments"
        )
    if k < 1:
        raise PolyCurrentsError(f"subdivision count must be >= 1, got {k}")
    a, b = space.coords(i), space.coords(j)
    if i == j:
        raise PolyCurrentsError(f"degenerate chord: endpoints coincide (index {i})")
    if k == 1:
        return space, Path((int(i), int(j)))
    t = np.arange(1, k)[:, None] / k
    interior = (1.0 - t) * a + t * b
    space, idx = space.with_points(interior)
    return space, Path((int(i), *idx, int(j)))


def as_space(obj: Space | Sequence) -> Space:
    if isinstance(obj, (EmbeddedSpace, FiniteMetricSpace)):
        return obj
    return EmbeddedSpace(np.asarray(obj, dtype=float))
