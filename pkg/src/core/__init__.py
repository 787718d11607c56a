from src.core.lagrangian import (
    eval_lagrangian,
    eval_objective,
    hessian_block,
    lagrangian_gradient,
    lagrangian_hessian,
    tau_lower_bound,
)
from src.core.problem import (
    BoxSet,
    PrimalDualPoint,
    QuadraticForm,
    SQCQPProblem,
    constraint_violation,
    equality_residual,
    linear_slack,
    quad_gradients,
    quad_values,
    validate_problem,
)
from src.core.schema import ProblemDocument, load_point, load_problem_document

__all__ = [
    "BoxSet",
    "PrimalDualPoint",
    "QuadraticForm",
    "SQCQPProblem",
    "ProblemDocument",
    "constraint_violation",
    "equality_residual",
    "eval_lagrangian",
    "eval_objective",
    "hessian_block",
    "lagrangian_gradient",
    "lagrangian_hessian",
    "linear_slack",
    "load_point",
    "load_problem_document",
    "quad_gradients",
    "quad_values",
    "tau_lower_bound",
    "validate_problem",
]
