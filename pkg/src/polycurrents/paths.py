"""Vertex paths and finitely supported transports (weighted path collections)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .config import ZERO
from .errors import PolyCurrentsError


@dataclass(frozen=True)
class Path:
    """Polygonal curve through point indices.

    A single vertex is the constant curve at that point.
    """

    vertices: tuple[int, ...]

    def __init__(self, vertices: Sequence[int]):
        verts = tuple(int(v) for v in vertices)
        if not verts:
            raise PolyCurrentsError("a path needs at least one vertex")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise PolyCurrentsError(f"consecutive vertices must differ, got {a} twice in {list(verts)}")
        object.__setattr__(self, "vertices", verts)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def is_constant(self) -> bool:
        return len(self.vertices) == 1

    @property
    def is_arc(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def reversed(self) -> Path:
        return Path(self.vertices[::-1])

    def length(self, space) -> float:
        """Parametric length: sum of consecutive distances."""
        if len(self.vertices) < 2:
            return 0.0
        return math.fsum(space.distances(self.vertices[:-1], self.vertices[1:]))


@dataclass(frozen=True)
class Transport:
    """Finite positive combination of paths, ``sum_i w_i * delta_{path_i}``."""

    atoms: tuple[tuple[float, Path], ...]

    def __init__(self, atoms: Iterable[tuple[float, Path | Sequence[int]]] = ()):
        out = []
        for w, path in atoms:
            w = float(w)
            if not math.isfinite(w) or w <= ZERO:
                raise PolyCurrentsError(f"transport weights must be finite and positive, got {w!r}")
            out.append((w, path if isinstance(path, Path) else Path(path)))
        object.__setattr__(self, "atoms", tuple(out))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def total_mass(self) -> float:
        return math.fsum(w for w, _ in self.atoms)

    def initial(self):
        """Push-forward of the transport by the start-point map."""
        from .measures import AtomicMeasure

        return AtomicMeasure((p.start, w) for w, p in self.atoms)

    def final(self):
        from .measures import AtomicMeasure

        return AtomicMeasure((p.end, w) for w, p in self.atoms)

    def cost(self, space) -> float:
        return math.fsum(w * p.length(space) for w, p in self.atoms)

    def scaled(self, c: float) -> Transport:
        return Transport((c * w, p) for w, p in self.atoms)
