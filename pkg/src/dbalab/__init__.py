"""DBA iteration-complexity toolkit.

Dynamic time warping, the DBA averaging loop with full iteration tracing,
adversarial instance generation, smoothed-analysis estimators, brute-force
oracles, and an experiment harness.
"""

__version__ = "0.1.0"

from dbalab.core import (
    Instance,
    InputError,
    MeanSequence,
    PointSequence,
    SizeError,
    WarpingPath,
    count_monotone_paths_no_diagonal,
    count_warping_paths,
    dtw_distance,
    enumerate_warping_paths,
    optimal_warping_path,
    validate_warping_path,
)
from dbalab.dba import (
    AssignmentMap,
    DBARun,
    compute_mean,
    inertia,
    optimal_assignment,
    potential_bound,
    run_dba,
    smoothed_bound,
    total_warping_distance,
    worst_case_bound_log,
)
from dbalab.initialization import explicit_init, medoid_init, random_walk_init
from dbalab.lowerbound import (
    GadgetInstance,
    GadgetParams,
    gadget_positions,
    generate_gadget_instance,
    nearest_index_deviation,
    replicate_assignment,
    replicate_instance,
)
from dbalab.oracle import enumerate_assignment_maps, exact_mean, is_fixed_point
from dbalab.smoothed import (
    PerturbationConfig,
    iteration_tail,
    normalization_parameter,
    perturb,
    visited_separation,
)
