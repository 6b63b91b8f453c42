"""Exact face-based analysis of the l1-regularized least squares solution map."""
from .decomposition import (Decomposition, DecompositionCell, NegativeLambda,
                            build_decomposition, cone_hrep, in_interior_DF,
                            locate, member_DF)
from .exact import columns_independent, rank, solve_linear
from .lp import LinearSystem, LpOutcome, lp_solve, strict_interior_point
from .oracle import NonPositiveLambda, bp_lp, kkt_residual, prox_grad_lasso
from .polytope import (DualPolytope, Face, PointOutsidePolytope, RankDeficient,
                       SignPartition, build_dual_polytope, enumerate_faces,
                       partition_of_point)
from .solution import (ConditionReport, FaceNotInF0, PathSegment, SolutionSet,
                       check_conditions, dual_solve, hausdorff_distance,
                       lipschitz_bound, lipschitz_constant, lipschitz_estimate,
                       solution_vertices, solve, trace_path, unique_solve)


def analyze(A) -> Decomposition:
    """Dual polytope faces and the parameter-space decomposition of ``A``."""
    return build_decomposition(build_dual_polytope(A))
