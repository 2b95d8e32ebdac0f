"""Perfect matchings on finite forests and finitely presented infinite trees."""

from .baire import ClosurePair, RemainderReport, SweepResult, buffer, closure, sweep_step
from .counterexample import (
    LevelSystem,
    SectionReport,
    advance,
    check_acyclic,
    check_condition1,
    check_condition2,
    dense_schedule,
    init_level,
    levels,
    section_report,
)
from .derivative import DerivativeConflict, DerivativeResult, derive, derive_window
from .errors import (
    BudgetExceededError,
    FormatError,
    InvariantViolationError,
    TreeMatchError,
)
from .graph_core import (
    ROOT,
    AutomaticTree,
    EndDescriptor,
    FiniteGraph,
    Matching,
    TreeVertex,
    Window,
    ends_equivalent,
    has_bad_ray,
    parse_path,
    render_path,
    shortlex,
    tree_distance,
    validate_end,
    window,
)
from .matcher import (
    BijectionResult,
    BSet,
    EndsOutput,
    LineReport,
    MatchingOracle,
    bijection_graph_matching,
    many_end_matching,
    match_ends,
    one_end_matching,
    permutation_graph,
    rooted_matching,
    two_end_matching,
    verify_ends_output,
)
from .oracle import (
    enumerate_perfect_matchings,
    greedy_forest_matching,
    has_perfect_matching,
    max_matching,
)
from .subdivision import (
    SubdivisionGraph,
    matching_to_orientation,
    orientation_to_matching,
    subdivide,
)

__version__ = "0.1.0"

__all__ = [
    "AutomaticTree",
    "BSet",
    "BijectionResult",
    "BudgetExceededError",
    "ClosurePair",
    "DerivativeConflict",
    "DerivativeResult",
    "EndDescriptor",
    "EndsOutput",
    "FiniteGraph",
    "FormatError",
    "InvariantViolationError",
    "LevelSystem",
    "LineReport",
    "Matching",
    "MatchingOracle",
    "ROOT",
    "RemainderReport",
    "SectionReport",
    "SubdivisionGraph",
    "SweepResult",
    "TreeMatchError",
    "TreeVertex",
    "Window",
    "advance",
    "bijection_graph_matching",
    "buffer",
    "check_acyclic",
    "check_condition1",
    "check_condition2",
    "closure",
    "dense_schedule",
    "derive",
    "derive_window",
    "ends_equivalent",
    "enumerate_perfect_matchings",
    "greedy_forest_matching",
    "has_bad_ray",
    "has_perfect_matching",
    "init_level",
    "levels",
    "many_end_matching",
    "match_ends",
    "matching_to_orientation",
    "max_matching",
    "one_end_matching",
    "orientation_to_matching",
    "parse_path",
    "permutation_graph",
    "render_path",
    "rooted_matching",
    "section_report",
    "shortlex",
    "subdivide",
    "sweep_step",
    "tree_distance",
    "two_end_matching",
    "validate_end",
    "verify_ends_output",
    "window",
]
