import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from polycurrents import EmbeddedSpace, PolyhedralCurrent  # noqa: E402


def random_points(rng, n, dim=2, scale=10.0):
    pts = rng.uniform(-scale, scale, size=(n, dim))
    return np.round(pts, 6)


def random_acyclic(rng, max_points=30, max_edges=50, p=2):
    """Random current whose edges all point forward in a random vertex order."""
    n = int(rng.integers(2, max_points + 1))
    space = EmbeddedSpace(random_points(rng, n), p)
    order = rng.permutation(n)
    pairs = set()
    target = int(rng.integers(1, max_edges + 1))
    for _ in range(4 * target):
        if len(pairs) >= target:
            break
        a, b = rng.choice(n, size=2, replace=False)
        if order[a] > order[b]:
            a, b = b, a
        pairs.add((int(a), int(b)))
    edges = [(a, b, float(rng.uniform(0.1, 5.0))) for a, b in sorted(pairs)]
    return PolyhedralCurrent(space, edges)


def random_current(rng, max_points=12, max_edges=24, p=2, integer=False):
    n = int(rng.integers(2, max_points + 1))
    space = EmbeddedSpace(random_points(rng, n), p)
    edges = []
    for _ in range(int(rng.integers(1, max_edges + 1))):
        a, b = rng.choice(n, size=2, replace=False)
        w = float(rng.integers(1, 6)) if integer else float(rng.uniform(0.1, 5.0))
        edges.append((int(a), int(b), w))
    return PolyhedralCurrent(space, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def line4():
    return EmbeddedSpace([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])


SAMPLES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "samples")


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    mark = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES[number] = f"[{mark}] criterion {number}: {title}" + (f" ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
