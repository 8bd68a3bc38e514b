"""Explanation problems and their exact solvers."""

from .costs import HAMMING, CostFunction
from .enumerate import DEFAULT_MAX_DIM, DEFAULT_MSR_MAX_DIM, max_dim
from .fast import fbdd_cf_fast, perceptron_mcr_fast
from .problem import KINDS, PartialInstance, ProblemSpec, Solution, load_spec
from .solvers import (
    check_sufficiency,
    enumerate_counterfactuals,
    solve,
    solve_classic_cf,
    solve_mca,
    solve_mcr,
    solve_msr,
    solve_plausible_mcr,
    solve_plausible_msr,
    solve_robust_cf,
    solve_wachter,
    wachter_objective,
)
from .verify import verify_solution

__all__ = [
    "HAMMING",
    "KINDS",
    "DEFAULT_MAX_DIM",
    "DEFAULT_MSR_MAX_DIM",
    "CostFunction",
    "PartialInstance",
    "ProblemSpec",
    "Solution",
    "check_sufficiency",
    "enumerate_counterfactuals",
    "fbdd_cf_fast",
    "load_spec",
    "max_dim",
    "perceptron_mcr_fast",
    "solve",
    "solve_classic_cf",
    "solve_mca",
    "solve_mcr",
    "solve_msr",
    "solve_plausible_mcr",
    "solve_plausible_msr",
    "solve_robust_cf",
    "solve_wachter",
    "verify_solution",
    "wachter_objective",
]
