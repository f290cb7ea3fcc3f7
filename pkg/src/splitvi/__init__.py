"""Solvers for split variational inclusion problems."""

from .hilbert import (
    DimensionError,
    LinearOperator,
    apply_adjoint,
    apply_operator,
    as_vector,
    check_adjoint_consistency,
    duplicating_shift,
    estimate_norm_sq,
    inner,
    matrix_operator,
    scaled_identity,
)
from .operators import (
    ConvexSet,
    IsmMapping,
    ResolventOperator,
    StronglyMonotoneMapping,
    check_firmly_nonexpansive_sampled,
    forward_backward_map,
    make_diagonal_ism,
    make_scaled_identity_monotone,
    project_convex,
    prox_l1,
    resolvent_eval,
)
from .problems import (
    ScmpSpec,
    SviProblem,
    SvipSpec,
    build_example1,
    build_example2,
    distance_tol,
    example1_initial,
    example2_initial,
    fixed_point_residual,
    lambda_upper_bound,
    residual_tol,
    scmp_to_svi,
    svip_to_svi,
)
from .solvers import (
    Schedule,
    SolveResult,
    SolverConfig,
    example1_schedule,
    example2_schedule,
    regularization_path,
    run,
    solve_rsvi_fixed_alpha,
    step_forward_backward,
    step_moudafi,
    step_regularized,
    validate_schedule,
)

__version__ = "0.1.0"
