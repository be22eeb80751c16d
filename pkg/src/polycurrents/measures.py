"""Finite signed atomic measures and the flat norm of 0-currents."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Mapping

import numpy as np

from .config import ATOL, ZERO, negligible
from .errors import PolyCurrentsError


def _accumulate(pairs: Iterable[tuple[int, float]]) -> dict[int, float]:
    parts: dict[int, list[float]] = defaultdict(list)
    for idx, w in pairs:
        w = float(w)
        if not math.isfinite(w):
            raise PolyCurrentsError(f"non-finite weight {w!r} at atom {idx}")
        parts[int(idx)].append(w)
    out = {}
    for idx, ws in parts.items():
        net = math.fsum(ws)
        if not negligible(net, sum(abs(w) for w in ws)):
            out[idx] = net
    return out


class AtomicMeasure:
    """Finitely supported signed measure on point indices.

    Repeated indices are summed on construction and atoms whose weight is
    cancellation noise (or below ``1e-15``) are dropped, so the stored
    representation is canonical.
    """

    __slots__ = ("_atoms",)

    def __init__(self, atoms: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        pairs = atoms.items() if isinstance(atoms, Mapping) else atoms
        acc = _accumulate(pairs)
        self._atoms = tuple(sorted(acc.items()))

    @classmethod
    def dirac(cls, index: int, weight: float = 1.0) -> AtomicMeasure:
        return cls([(index, weight)])

    @property
    def atoms(self) -> tuple[tuple[int, float], ...]:
        return self._atoms

    def as_dict(self) -> dict[int, float]:
        return dict(self._atoms)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._atoms)

    def __getitem__(self, index: int) -> float:
        return self.as_dict().get(index, 0.0)

    def __len__(self):
        return len(self._atoms)

    def __bool__(self):
        return bool(self._atoms)

    def __iter__(self):
        return iter(self._atoms)

    def total(self) -> float:
        return math.fsum(w for _, w in self._atoms)

    def __add__(self, other: AtomicMeasure) -> AtomicMeasure:
        return AtomicMeasure(self._atoms + other._atoms)

    def __neg__(self) -> AtomicMeasure:
        return AtomicMeasure((i, -w) for i, w in self._atoms)

    def __sub__(self, other: AtomicMeasure) -> AtomicMeasure:
        return self + (-other)

    def __mul__(self, c: float) -> AtomicMeasure:
        return AtomicMeasure((i, c * w) for i, w in self._atoms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return self._atoms == other._atoms

    def __hash__(self):
        return hash(self._atoms)

    def __repr__(self):
        body = ", ".join(f"{i}: {w:.6g}" for i, w in self._atoms)
        return f"AtomicMeasure({{{body}}})"

    def isclose(self, other: AtomicMeasure, atol: float = ATOL, rtol: float = 0.0) -> bool:
        """Atom-for-atom comparison; atoms present on one side only must be within ``atol`` of zero."""
        return self.max_deviation(other, rtol) <= atol

    def max_deviation(self, other: AtomicMeasure, rtol: float = 0.0) -> float:
        a, b = self.as_dict(), other.as_dict()
        worst = 0.0
        for k in set(a) | set(b):
            x, y = a.get(k, 0.0), b.get(k, 0.0)
            worst = max(worst, abs(x - y) - rtol * max(abs(x), abs(y)))
        return worst

    def pair(self, values: Mapping[int, float] | np.ndarray) -> float:
        """Integral of a function given by its values at point indices."""
        return math.fsum(w * float(values[i]) for i, w in self._atoms)


def jordan(mu: AtomicMeasure) -> tuple[AtomicMeasure, AtomicMeasure]:
    """Positive and negative parts, with disjoint supports."""
    plus = AtomicMeasure((i, w) for i, w in mu.atoms if w > 0)
    minus = AtomicMeasure((i, -w) for i, w in mu.atoms if w < 0)
    return plus, minus


def total_variation(mu: AtomicMeasure) -> float:
    return math.fsum(abs(w) for _, w in mu.atoms)


def flat_norm_0(mu: AtomicMeasure, space, creation_cost: float = 1.0):
    """Flat norm of a 0-current ``inf{c M(A) + M(B) : A + boundary(B) = mu}``.

    Solved exactly as an uncapacitated min-cost flow on the support of
    ``mu`` plus an apex node; edges between atoms cost their distance and
    edges to the apex cost ``creation_cost`` (creating or annihilating mass).

    Returns
    -------
    value : float
    witness : tuple of (AtomicMeasure, PolyhedralCurrent)
        ``(A, B)`` with ``A + boundary(B) == mu`` atom-for-atom.
    """
    from .currents import PolyhedralCurrent
    from .flow import min_cost_flow

    if creation_cost <= 0:
        raise PolyCurrentsError("creation cost must be positive")
    support = list(mu.support)
    if not support:
        return 0.0, (AtomicMeasure(), PolyhedralCurrent(space, []))
    for i in support:
        if not 0 <= i < len(space):
            raise IndexError(f"atom index {i} out of range")
    k = len(support)
    n = k + 1
    apex = k
    cost = np.full((n, n), np.inf)
    cost[:k, :k] = space.pairwise(support, support)
    np.fill_diagonal(cost, np.inf)
    cost[:k, apex] = creation_cost
    cost[apex, :k] = creation_cost
    weights = np.array([w for _, w in mu.atoms])
    # node v must absorb net inflow mu(v); the apex balances the total
    supply = np.concatenate([-weights, [weights.sum()]])
    result = min_cost_flow(cost, supply)
    f = result.flow
    created = f[apex, :k] - f[:k, apex]
    A = AtomicMeasure(zip(support, created))
    rows, cols = np.nonzero(f[:k, :k])
    B = PolyhedralCurrent(space, [(support[r], support[c], f[r, c]) for r, c in zip(rows, cols)])
    value = creation_cost * total_variation(A) + B.mass()
    return float(value), (A, B)


def narrow_gap(mu: AtomicMeasure, nu: AtomicMeasure, space) -> float:
    """Flat distance between two atomic measures on a shared space."""
    return flat_norm_0(mu - nu, space)[0]
