"""Growth of exclusive groups under consensus (veto) admission.

Simulates the two-candidate admission process on the unit interval, unit
square, and unit disk, and provides numerical checks of its geometric
characterizations, cap acceptance probabilities, and growth laws.
"""

from .analysis import (
    FitResult,
    GrowthModel,
    binned_acceptance,
    fit_decay,
    fit_log,
    fit_logloglog,
    fit_power,
    model_compare,
)
from .capprob import (
    CapRatio,
    ProbEstimate,
    acceptance_prob_event,
    acceptance_prob_integral,
    disk_segment_cap,
    f_disk,
    f_square,
    lower_bound_ratio_disk,
    lower_bound_ratio_square,
    phi,
    phi_grid,
    sample_cap,
    square_triangle_cap,
    upper_bound_integral,
)
from .dynamics import EnsembleStats, Trajectory, run_ensemble, run_trial, trial_seed
from .election import ElectionOutcome, ball_winner, conditional_winner, voronoi_winner
from .errors import DegenerateCandidates, EmptyRegion, InsufficientData, NoChord
from .geometry import (
    INTERVAL,
    UNIT_DISK,
    UNIT_SQUARE,
    Cap,
    ConvexHull,
    DiskSegment,
    Domain,
    HalfPlane,
    IntervalSegment,
    Point,
    SquareTrapezoid,
    SquareTriangle,
    bisector,
    disk_segment_height,
    domain_from_name,
    hull_in_halfplane,
    hull_insert,
    make_cap,
    region_support,
    sample_uniform,
    square_cap_sides,
)

__version__ = "0.1.0"

__all__ = [
    "FitResult",
    "GrowthModel",
    "binned_acceptance",
    "fit_decay",
    "fit_log",
    "fit_logloglog",
    "fit_power",
    "model_compare",
    "CapRatio",
    "ProbEstimate",
    "acceptance_prob_event",
    "acceptance_prob_integral",
    "disk_segment_cap",
    "f_disk",
    "f_square",
    "lower_bound_ratio_disk",
    "lower_bound_ratio_square",
    "phi",
    "phi_grid",
    "square_triangle_cap",
    "upper_bound_integral",
    "EnsembleStats",
    "Trajectory",
    "run_ensemble",
    "run_trial",
    "trial_seed",
    "ElectionOutcome",
    "ball_winner",
    "conditional_winner",
    "voronoi_winner",
    "DegenerateCandidates",
    "EmptyRegion",
    "InsufficientData",
    "NoChord",
    "INTERVAL",
    "UNIT_DISK",
    "UNIT_SQUARE",
    "Cap",
    "ConvexHull",
    "DiskSegment",
    "Domain",
    "HalfPlane",
    "IntervalSegment",
    "Point",
    "SquareTrapezoid",
    "SquareTriangle",
    "bisector",
    "disk_segment_height",
    "domain_from_name",
    "hull_in_halfplane",
    "hull_insert",
    "make_cap",
    "region_support",
    "sample_cap",
    "sample_uniform",
    "square_cap_sides",
]
