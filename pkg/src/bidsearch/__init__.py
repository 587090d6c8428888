"""Query-efficient optimal bidding across multiple auction platforms.

Finds the value-maximizing fractional bidding strategy under a global
budget and return-on-spend constraint, treating each platform's bid-to-
outcome mapping as a black box reachable only through counted bidding
queries.  Ships an exact search, a prediction-guided variant whose cost
scales with the prediction error, and a cutting-plane approximation, plus
a ground-truth reference solver and a benchmarking harness.
"""

from .augmented import branch_out_median_of_medians, prediction_error
from .centroid import (
    CentroidEstimate,
    DegenerateBodyError,
    Halfspace,
    Polytope,
    SeparationResult,
    centroid_method,
    estimate_centroid,
    separation_oracle,
)
from .harness import (
    BenchRow,
    GenConfig,
    SolveReport,
    bench_sweep,
    generate,
    make_prediction,
    rows_to_csv,
    run_solver,
)
from .landscape import (
    FEASIBILITY_TOL,
    BidVector,
    Instance,
    InvalidLandscapeError,
    PlatformLandscape,
    QueryAnswer,
    evaluate,
    feasible,
    instance_from_dict,
    instance_to_dict,
    interpolate,
    load_instance,
    marginal_cost,
    marginal_cost_fractional,
    save_instance,
)
from .oracle import CountingOracle, QueryLedger
from .reference import (
    Binding,
    MarginalItem,
    ReferenceSolution,
    classify_binding,
    feasibility_threshold_scan,
    solve_reference,
    threshold_strategy,
)
from .sampling import active_backend
from .search import (
    SearchRanges,
    Verdict,
    match_marginal_cost,
    median_of_medians,
    opt_check,
    round_up,
)

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "BidVector",
    "Binding",
    "CentroidEstimate",
    "CountingOracle",
    "DegenerateBodyError",
    "FEASIBILITY_TOL",
    "GenConfig",
    "Halfspace",
    "Instance",
    "InvalidLandscapeError",
    "MarginalItem",
    "PlatformLandscape",
    "Polytope",
    "QueryAnswer",
    "QueryLedger",
    "ReferenceSolution",
    "SearchRanges",
    "SeparationResult",
    "SolveReport",
    "Verdict",
    "active_backend",
    "bench_sweep",
    "branch_out_median_of_medians",
    "centroid_method",
    "classify_binding",
    "estimate_centroid",
    "evaluate",
    "feasibility_threshold_scan",
    "feasible",
    "generate",
    "instance_from_dict",
    "instance_to_dict",
    "interpolate",
    "load_instance",
    "make_prediction",
    "marginal_cost",
    "marginal_cost_fractional",
    "match_marginal_cost",
    "median_of_medians",
    "opt_check",
    "prediction_error",
    "round_up",
    "rows_to_csv",
    "run_solver",
    "save_instance",
    "separation_oracle",
    "solve_reference",
    "threshold_strategy",
]
