"""orbitred: reduction of invariant polynomial potentials in orbit-space coordinates.

The library represents a symmetric potential through a minimal set of
generating invariants, applies exact coordinate changes generated by
gradient flows of invariant functions, decides which coefficients can be
removed (at a fixed parameter value, or uniformly through a phase
transition), reports the symbolic nondegeneracy conditions, and verifies
the result numerically.
"""

__version__ = "0.1.0"

from .poly import Poly
from .ratfun import RatFun
from .linalg import LinearSolution, det_fraction_free, solve_linear
from .invariants import (
    InvariantBasis,
    NotExpressibleError,
    PMatrix,
    SyzygyRule,
    check_invariance,
    express_in_invariants,
    normal_form,
    p_matrix,
)
from .orbit import (
    Generator,
    OrbitPoly,
    ParameterSpec,
    derivation_apply,
    general_potential,
    lie_transform,
    stability_order,
    u_vector,
    weighted_degree,
)
from .elimination import (
    CriterionResult,
    EliminationPlan,
    NoUsableSourceError,
    ResonanceCondition,
    TransferMatrix,
    build_transfer,
    criterion_check,
    eliminable_sets,
    solve_plan,
    source_component,
)
from .pipeline import (
    ReductionReport,
    Stage,
    Strategy,
    conditions_summary,
    reduce_potential,
    replay_reduction,
)
from .numeric import (
    NumericContext,
    VerifyResult,
    eval_potential,
    flow_map,
    verify_reduction,
)
from .parser import ParseError, parse_orbit, parse_poly
from .problem import BuiltProblem, ProblemError, ProblemFile, build_problem, format_problem, parse_problem

__all__ = [
    "Poly",
    "RatFun",
    "LinearSolution",
    "det_fraction_free",
    "solve_linear",
    "InvariantBasis",
    "NotExpressibleError",
    "PMatrix",
    "SyzygyRule",
    "check_invariance",
    "express_in_invariants",
    "normal_form",
    "p_matrix",
    "Generator",
    "OrbitPoly",
    "ParameterSpec",
    "derivation_apply",
    "general_potential",
    "lie_transform",
    "stability_order",
    "u_vector",
    "weighted_degree",
    "CriterionResult",
    "EliminationPlan",
    "NoUsableSourceError",
    "ResonanceCondition",
    "TransferMatrix",
    "build_transfer",
    "criterion_check",
    "eliminable_sets",
    "solve_plan",
    "source_component",
    "ReductionReport",
    "Stage",
    "Strategy",
    "conditions_summary",
    "reduce_potential",
    "replay_reduction",
    "NumericContext",
    "VerifyResult",
    "eval_potential",
    "flow_map",
    "verify_reduction",
    "ParseError",
    "parse_orbit",
    "parse_poly",
    "BuiltProblem",
    "ProblemError",
    "ProblemFile",
    "build_problem",
    "format_problem",
    "parse_problem",
]
