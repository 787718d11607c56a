from src.solver.initial_point import InitialPointStrategy, make_initial_point, strategy_from_name
from src.solver.line_search import LineSearchResult, apply_step, line_search
from src.solver.newton import NewtonDirection, newton_direction, solve_reduced_system
from src.solver.snsqp import (
    CONVERGED,
    MAX_ITERATIONS,
    STALLED,
    SolveReport,
    multi_start_solve,
    snsqp_solve,
    solve_tau_grid,
)

__all__ = [
    "CONVERGED",
    "MAX_ITERATIONS",
    "STALLED",
    "InitialPointStrategy",
    "LineSearchResult",
    "NewtonDirection",
    "SolveReport",
    "apply_step",
    "line_search",
    "make_initial_point",
    "multi_start_solve",
    "newton_direction",
    "snsqp_solve",
    "solve_reduced_system",
    "solve_tau_grid",
    "strategy_from_name",
]
