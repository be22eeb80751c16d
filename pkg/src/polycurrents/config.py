"""Centralised numerical tolerances."""

import os
import sys

#: absolute tolerance for "exact" comparisons of weights and atoms
ATOL = 1e-12
#: relative tolerance for derived identities (mass additivity, duality)
RTOL = 1e-9
#: weights below this are treated as absent
ZERO = 1e-15

_EPS = sys.float_info.epsilon


def negligible(value: float, scale: float) -> bool:
    """True when ``value`` is cancellation noise of a sum with magnitude ``scale``."""
    return abs(value) <= ZERO + 16.0 * _EPS * scale


def default_tol() -> float:
    """Relative tolerance used by CLI checks; ``POLYCURRENTS_TOL`` overrides it."""
    raw = os.environ.get("POLYCURRENTS_TOL")
    if not raw:
        return RTOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"POLYCURRENTS_TOL must be positive, got {raw!r}")
    return value
