"""curvelab: exact-arithmetic toolkit for real plane algebraic curves.

Certified topology, inflection counting, and convex-hull segment counting of
hyperbolic curves; the perturbation construction pipeline that realizes a
prescribed hull-segment count; and the braid-theoretic obstruction
computation (reduced Burau / Alexander polynomial at t = i).
"""

__version__ = "0.1.0"

from .qmath import Q, q, q_str
from .interval import Box, RatInterval
from .unipoly import (
    UniPoly,
    count_real_roots,
    isolate_real_roots,
    isolate_with_multiplicity,
    refine_root,
    root_bound,
    sturm_count,
)
from .laurent import GaussRat, LaurentPoly, eval_gauss, laurent_arith
from .bivar import BivarPoly, Curve, hessian_curve, resultant_eliminate, restrict_to_line
from .braid import (
    AlexanderResult,
    BraidWord,
    ObstructionVerdict,
    alexander_polynomial,
    build_bn,
    exponent_sum,
    obstruction_check,
    reduced_burau,
)
from .solve2d import SystemSolution, count_solutions, solve_system
from .topology import (
    NonsingularCertificate,
    Oval,
    OvalTree,
    TopologyReport,
    certify_hyperbolic,
    certify_nonsingular,
    compute_topology,
    is_compact,
)
from .inflection import (
    InflectionBudget,
    InflectionPoint,
    InflectionReport,
    count_inflections,
    count_real_intersections,
    inflection_budget,
)
from .hull import (
    HullReport,
    HullSegment,
    convex_hull,
    count_hull_segments,
    segment_inflection_bound,
    trace_outer_oval,
)
from .construct import (
    CertTargets,
    ConstructionPlan,
    LineFamily,
    PerturbationStep,
    StepResult,
    build_hilbert,
    choose_lines,
    epsilon_search,
    example_sextic,
    perturb,
)
