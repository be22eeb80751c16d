"""One-dimensional polyhedral metric currents: decomposition into transports,
cycle extraction, polyhedral approximation and Wasserstein-1 transport."""

__version__ = "0.1.0"

from .approximation import boundary_correct, convergence_report, polyhedralize
from .currents import (
    Affine,
    Form,
    GridCurrent,
    PolyhedralCurrent,
    add,
    boundary,
    evaluate,
    grid_boundary,
    grid_mass,
    is_subcurrent,
    mass,
    mass_bound,
    push_forward,
    restrict,
    scale,
    stokes_pairing,
    subcurrent_defect,
)
from .curves import parametric_length, spiral_suite, theta_distance
from .decomposition import (
    decompose,
    extract_cycles,
    is_acyclic,
    remove_loop,
    synthesize,
    to_arcs,
    verify_decomposition,
)
from .errors import (
    LipschitzError,
    NotAcyclicError,
    PolyCurrentsError,
    SpaceMismatchError,
    UnbalancedError,
    UnsupportedGeodesicError,
)
from .measures import AtomicMeasure, flat_norm_0, jordan, narrow_gap, total_variation
from .paths import Path, Transport
from .spaces import EmbeddedSpace, FiniteMetricSpace, distance, geodesic_chord, validate_metric
from .transport import (
    beckmann,
    duality_gap,
    kantorovich,
    normalize_masses,
    plan_to_transport,
    transport_cost,
)
