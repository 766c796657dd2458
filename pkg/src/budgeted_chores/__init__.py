"""Fair allocation of chores to agents with budget constraints."""

from .app import Algorithm, ChoreAllocationApp, SolveOutcome
from .divisible import solve_divisible, verify_dd, verify_ef_divisible
from .errors import ChoreDivisionError, InstanceValidationError, IntractableError
from .fairness import EF, EF1, EF2, EFX, EnvyCriterion, EnvyReport, verify
from .indivisible import classify_instance, densest_first, solve_efx, solve_two_agents
from .models import Allocation, Chore, FractionalAllocation, Instance
from .validation import build_instance, validate_instance

__all__ = [
    "Algorithm",
    "ChoreAllocationApp",
    "SolveOutcome",
    "ChoreDivisionError",
    "InstanceValidationError",
    "IntractableError",
    "EF",
    "EF1",
    "EF2",
    "EFX",
    "EnvyCriterion",
    "EnvyReport",
    "verify",
    "classify_instance",
    "densest_first",
    "solve_efx",
    "solve_two_agents",
    "solve_divisible",
    "verify_dd",
    "verify_ef_divisible",
    "Allocation",
    "Chore",
    "FractionalAllocation",
    "Instance",
    "build_instance",
    "validate_instance",
]
