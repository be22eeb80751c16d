"""Cycle extraction and decomposition of acyclic polyhedral currents into transports."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .config import RTOL, ZERO, negligible
from .currents import PolyhedralCurrent, is_subcurrent, restrict, subcurrent_defect
from .errors import NotAcyclicError
from .measures import jordan, total_variation
from .paths import Path, Transport


def _out_adjacency(weights: dict) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = defaultdict(list)
    for t, h in weights:
        adj[t].append(h)
    for heads in adj.values():
        heads.sort()
    return adj


def find_cycle(weights: dict[tuple[int, int], float]) -> list[int] | None:
    """A directed cycle of the support graph as a closed vertex list, or None.

    Depth-first search from the lowest vertex index, following the
    lowest-index edge first.
    """
    adj = _out_adjacency(weights)
    state: dict[int, int] = {}  # 1 = on stack, 2 = finished
    for root in sorted({v for e in weights for v in e}):
        if root in state:
            continue
        stack = [(root, iter(adj.get(root, ())))]
        trail = [root]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[v] = 2
                stack.pop()
                trail.pop()
                continue
            s = state.get(nxt)
            if s == 1:
                k = trail.index(nxt)
                return trail[k:] + [nxt]
            if s is None:
                state[nxt] = 1
                stack.append((nxt, iter(adj.get(nxt, ()))))
                trail.append(nxt)
    return None


def is_acyclic(T: PolyhedralCurrent) -> bool:
    return find_cycle(T.as_dict()) is None


def extract_cycles(T: PolyhedralCurrent) -> tuple[PolyhedralCurrent, PolyhedralCurrent]:
    """Split ``T = C + T'`` with ``C`` a cycle of ``T`` and ``T'`` acyclic.

    Repeatedly finds a directed cycle and subtracts its minimum weight,
    which empties at least one edge per round.
    """
    remaining = T.as_dict()
    taken: dict[tuple[int, int], float] = defaultdict(float)
    while True:
        cycle = find_cycle(remaining)
        if cycle is None:
            break
        edges = list(zip(cycle, cycle[1:]))
        m = min(remaining[e] for e in edges)
        for e in edges:
            left = remaining[e] - m
            taken[e] += m
            if left <= 0 or negligible(left, remaining[e]):
                del remaining[e]
            else:
                remaining[e] = left
    C = PolyhedralCurrent(T.space, [(t, h, w) for (t, h), w in taken.items()])
    rest = PolyhedralCurrent(T.space, [(t, h, w) for (t, h), w in remaining.items()])
    return C, rest


def decompose(T: PolyhedralCurrent) -> Transport:
    """Decompose an acyclic polyhedral current into weighted arcs.

    Takes the minimum-weight edge (lowest index on ties), extends it to a
    maximal path forward and backward along lowest-index edges, removes
    that path with the minimum weight, and repeats until nothing is left.

    Raises
    ------
    NotAcyclicError
        If the support graph has a directed cycle; run
        :func:`extract_cycles` first.
    """
    remaining = T.as_dict()
    cycle = find_cycle(remaining)
    if cycle is not None:
        raise NotAcyclicError(cycle)
    order = {e: k for k, (t, h, _) in enumerate(T.edges) for e in [(t, h)]}
    out_adj: dict[int, set[int]] = defaultdict(set)
    in_adj: dict[int, set[int]] = defaultdict(set)
    for t, h in remaining:
        out_adj[t].add(h)
        in_adj[h].add(t)

    atoms = []
    while remaining:
        start = min(remaining, key=lambda e: (remaining[e], order[e]))
        m = remaining[start]
        verts = [start[0], start[1]]
        while out_adj[verts[-1]]:
            verts.append(min(out_adj[verts[-1]]))
        while in_adj[verts[0]]:
            verts.insert(0, min(in_adj[verts[0]]))
        for e in zip(verts, verts[1:]):
            left = remaining[e] - m
            if left <= 0 or negligible(left, remaining[e]):
                del remaining[e]
                out_adj[e[0]].discard(e[1])
                in_adj[e[1]].discard(e[0])
            else:
                remaining[e] = left
        atoms.append((m, Path(verts)))
    return Transport(atoms)


def synthesize(eta: Transport, space) -> PolyhedralCurrent:
    """The current ``sum_i w_i [[path_i]]``, canonicalised (antiparallel pieces cancel)."""
    return PolyhedralCurrent(space, [(a, b, w) for w, p in eta.atoms for a, b in p.edges()])


def path_current(path: Path, space, weight: float = 1.0) -> PolyhedralCurrent:
    return PolyhedralCurrent(space, [(a, b, weight) for a, b in path.edges()])


def remove_loop(path: Path, space=None) -> tuple[Path, Path | None]:
    """Excise the longest closed sub-path between two visits of one vertex.

    Returns ``(g, f)`` with ``f`` the excised loop (``None`` for an arc, in
    which case ``g`` is the input). ``g`` may be a constant path. Lengths
    use ``space`` distances, or unit edges when ``space`` is None.
    """
    v = path.vertices
    if path.is_arc:
        return path, None
    if space is None:
        steps = np.ones(len(v) - 1)
    else:
        steps = np.asarray(space.distances(v[:-1], v[1:]), dtype=float)
    prefix = np.concatenate([[0.0], np.cumsum(steps)])
    best = None
    seen: dict[int, list[int]] = defaultdict(list)
    for j, x in enumerate(v):
        for i in seen[x]:
            key = (prefix[j] - prefix[i], -i, j)
            if best is None or key > best[0]:
                best = (key, i, j)
        seen[x].append(j)
    _, i, j = best
    loop = Path(v[i : j + 1])
    rest = Path(v[: i + 1] + v[j + 1 :])
    return rest, loop


def to_arcs(eta: Transport, space) -> tuple[Transport, PolyhedralCurrent]:
    """Remove loops from every path; returns the arc transport and the removed loops as a current.

    Constant paths left after excision are dropped.
    """
    arcs = []
    loops = []
    for w, p in eta.atoms:
        while True:
            g, f = remove_loop(p, space)
            if f is None:
                break
            loops.append((w, f))
            p = g
        if not p.is_constant:
            arcs.append((w, p))
    return Transport(arcs), synthesize(Transport(loops), space)


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "residual": self.residual, "detail": self.detail}


@dataclass
class DecompositionReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, key: str) -> Check:
        for c in self.checks:
            if c.name.startswith(key):
                return c
        raise KeyError(key)

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def format(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.name}: residual={c.residual:.3e} {c.detail}".rstrip())
        return "\n".join(lines)


def verify_decomposition(
    T: PolyhedralCurrent,
    eta: Transport,
    *,
    rtol: float = RTOL,
    samples: int = 8,
    seed: int = 0,
) -> DecompositionReport:
    """Check that ``eta`` decomposes ``T``.

    (a) synthesis reproduces ``T``; (b) mass additivity; (c) endpoint
    measures equal the Jordan parts of the boundary; (d) all paths are
    arcs; (e) every single-path piece is a subcurrent of ``T``; (f) the
    mass of restrictions to ``samples`` random vertex sets splits over
    the paths. Residuals are absolute; a check passes when its residual
    is at most ``rtol`` times the natural scale.
    """
    space = T.space
    M = T.mass()
    report = DecompositionReport()

    def ok(residual, scale):
        return residual <= rtol * scale + ZERO

    S = synthesize(eta, space)
    r = (S - T).mass()
    report.checks.append(Check("a: synthesis equals T", ok(r, M), r))

    cost = eta.cost(space)
    r = abs(cost - M)
    report.checks.append(Check("b: mass additivity", ok(r, M), r, f"sum w*len={cost:.12g} mass={M:.12g}"))

    plus, minus = jordan(T.boundary())
    r = total_variation(eta.final() - plus) + total_variation(eta.initial() - minus)
    report.checks.append(Check("c: endpoint measures", ok(r, total_variation(plus) + total_variation(minus)), r))

    bad = sum(1 for _, p in eta.atoms if not p.is_arc)
    report.checks.append(Check("d: paths are arcs", bad == 0, float(bad)))

    worst = 0.0
    sub_ok = True
    for w, p in eta.atoms:
        piece = path_current(p, space, w)
        worst = max(worst, subcurrent_defect(piece, T))
        sub_ok = sub_ok and is_subcurrent(piece, T, tol=rtol * max(w, ZERO))[0]
    report.checks.append(Check("e: pieces are subcurrents", sub_ok and ok(worst, M), worst))

    rng = np.random.default_rng(seed)
    verts = sorted(T.vertices() | {v for _, p in eta.atoms for v in p.vertices})
    worst = 0.0
    pieces = [(w, path_current(p, space)) for w, p in eta.atoms]
    for _ in range(samples if verts else 0):
        keep = [v for v in verts if rng.random() < 0.5]
        lhs = restrict(T, keep).mass()
        rhs = math.fsum(w * restrict(P, keep).mass() for w, P in pieces)
        worst = max(worst, abs(lhs - rhs))
    report.checks.append(Check("f: restriction identity", ok(worst, M), worst))
    return report
