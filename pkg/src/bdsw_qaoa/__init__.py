"""Backbone-driven sliding-window QAOA for large QUBO problems.

Tabu search finds an incumbent and ranks variables by flip cost; windows of
the top-ranked variables are re-optimized with a simulated QAOA while every
other variable stays fixed.
"""

from .errors import BdswError, CapacityError, ConfigError, ParseError, TenureError
from .graphs import WeightedGraph, cut_value, format_rudy, load_rudy, maxcut_to_qubo, parse_rudy
from .oracle import ExactSolution, brute_force_maxcut, brute_force_qubo
from .qaoa import (
    CostDiagonal,
    OptimizerConfig,
    QaoaConfig,
    QaoaParams,
    QaoaResult,
    build_cost_diagonal,
    evolve,
    expectation,
    optimize_params,
    sample,
    solve_subqubo,
)
from .qubo import FlipState, IsingModel, QuboProblem, all_flip_costs, apply_flip, evaluate, flip_cost, to_ising
from .solver import RunReport, SolverConfig, approximation_ratio, bdsw_solve, solve_maxcut
from .tabu import TabuConfig, TabuOutcome, random_assignment, run_tabu
from .window import BackboneSet, SubQubo, Window, build_subqubo, iterate_windows, lift_solution, select_backbone

__version__ = "0.1.0"
