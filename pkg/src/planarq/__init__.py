"""planarq: circuit-tailored planar coupling topologies.

Profiles quantum circuits into weighted coupling graphs, synthesizes a
planar degree-bounded physical topology around the heaviest interaction
hubs, routes circuits onto it, and benchmarks the added-gate ratio
against regular lattices.
"""

from .bench import (
    SuiteConfig,
    TrendResult,
    confidence_interval,
    desk_config,
    linreg_slope,
    mann_kendall,
    run_suite,
    smoke_config,
)
from .circuit import (
    Circuit,
    Gate,
    QasmError,
    RandomCircuitSpec,
    generate_random_circuit,
    parse_qasm,
    serialize_qasm,
)
from .design import (
    AllocationError,
    DesignResult,
    allocate,
    design,
    prune,
    rank_vertexes,
    recover,
    search_media_structures,
    split_media_vertex,
)
from .graph import ConstraintSet, CouplingGraph, check_constraints, is_planar
from .lattices import LATTICE_KINDS, lattice, planar_exempt
from .profiling import compute_S, interaction_matrix, profile, profile_matrix
from .routing import (
    RoutedCircuit,
    RoutingError,
    identity_map,
    reverse_traversal_map,
    route,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationError",
    "Circuit",
    "ConstraintSet",
    "CouplingGraph",
    "DesignResult",
    "Gate",
    "LATTICE_KINDS",
    "QasmError",
    "RandomCircuitSpec",
    "RoutedCircuit",
    "RoutingError",
    "SuiteConfig",
    "TrendResult",
    "allocate",
    "check_constraints",
    "compute_S",
    "confidence_interval",
    "design",
    "desk_config",
    "generate_random_circuit",
    "identity_map",
    "interaction_matrix",
    "is_planar",
    "lattice",
    "linreg_slope",
    "mann_kendall",
    "parse_qasm",
    "planar_exempt",
    "profile",
    "profile_matrix",
    "prune",
    "rank_vertexes",
    "recover",
    "reverse_traversal_map",
    "route",
    "run_suite",
    "search_media_structures",
    "serialize_qasm",
    "smoke_config",
    "split_media_vertex",
    "__version__",
]
