"""Circular-arc toolkit: exact circle geometry, minimum covers, chain
reordering and swap calculus, and a brute-force longest-path oracle used to
verify that every longest path of a connected instance shares a vertex."""

from .chains import (
    Chain,
    CoverTrace,
    cover_trace,
    longest_chain_membership_check,
    support,
    try_extend,
    validate_chain,
)
from .family import (
    ArcFamily,
    Cover,
    IntersectionGraph,
    build_graph,
    covers_circle,
    delta_k,
    format_instance,
    generate,
    is_connected,
    minimal_cover,
    parse_instance,
)
from .geometry import (
    Arc,
    Circle,
    Region,
    arc_contains_arc,
    arc_contains_point,
    arc_intersect,
    clockwise_between,
    closed_span,
    region_intersect,
    region_subtract,
    region_union,
)
from .pathsolver import (
    BACKEND,
    LongestPathResult,
    enumerate_longest,
    longest_path_length,
    select_min_cover_longest,
)
from .reorder import (
    CanonicalReport,
    PhaseState,
    PointAssignment,
    assign_points,
    can_swap,
    canonicalize,
    check_properties,
    keil_reorder,
    phase1_sets,
    swap,
)
from .verify import (
    SurgeryResult,
    VerificationReport,
    build_surgery,
    hunt,
    verify_instance,
)

__version__ = "0.1.0"
