"""High-level orchestrator for solving and certifying chore allocations."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from .config import SearchLimits
from .divisible import DDCertificate, augment_instance, solve_divisible, verify_dd, verify_ef_divisible
from .fairness import EF, EF1, EF2, EFX, EnvyCriterion, EnvyReport, verify
from .indivisible import (
    classify_instance,
    densest_first,
    densest_first_guarantee,
    solve_efx,
    solve_two_agents,
)
from .models import Allocation, FractionalAllocation, Instance, SolverTrace

logger = logging.getLogger(__name__)

DD_LABEL = "DD"


class Algorithm(str, Enum):
    EFX = "efx"
    DENSEST_FIRST = "densest-first"
    TWO_AGENT = "two-agent"
    DIVISIBLE = "divisible"


@dataclass
class SolveOutcome:
    """Everything a solver run produced, ready for reporting or serialisation."""

    algorithm: Algorithm
    instance: Instance
    reports: List[EnvyReport]
    guaranteed: Optional[str]
    allocation: Optional[Allocation] = None
    fractional: Optional[FractionalAllocation] = None
    certificate: Optional[DDCertificate] = None
    iterations: int = 0
    elapsed_seconds: float = 0.0
    special_cases: List[str] = field(default_factory=list)
    set_aside_zero: bool = False

    @property
    def divisible(self) -> bool:
        return self.fractional is not None

    def report_for(self, criterion: str) -> Optional[EnvyReport]:
        return next((r for r in self.reports if r.criterion == criterion), None)

    @property
    def guarantee_met(self) -> bool:
        if self.guaranteed is None:
            return True
        report = self.report_for(self.guaranteed)
        return report is not None and report.satisfied


class ChoreAllocationApp:
    """Coordinates solvers, verifiers and the special-case classifier."""

    indivisible_criteria = (EF, EFX, EF1, EF2)

    def __init__(self, limits: Optional[SearchLimits] = None, set_aside_zero: bool = False):
        self.limits = limits
        self.set_aside_zero = set_aside_zero

    def solve(self, instance: Instance, algorithm: Algorithm | str) -> SolveOutcome:
        algorithm = Algorithm(algorithm)
        special, _ = classify_instance(instance)
        trace = SolverTrace()
        started = time.perf_counter()
        if algorithm is Algorithm.DIVISIBLE:
            fractional, certificate = solve_divisible(instance, trace=trace)
            elapsed = time.perf_counter() - started
            reports = self.certify_divisible(fractional, certificate, instance)
            return SolveOutcome(
                algorithm=algorithm,
                instance=instance,
                reports=reports,
                guaranteed=DD_LABEL,
                fractional=fractional,
                certificate=certificate,
                iterations=trace.iterations,
                elapsed_seconds=elapsed,
                special_cases=special.names(),
            )

        guaranteed: Optional[EnvyCriterion]
        if algorithm is Algorithm.EFX:
            allocation = solve_efx(instance, self.limits, trace=trace)
            guaranteed = EFX
        elif algorithm is Algorithm.TWO_AGENT:
            allocation = solve_two_agents(instance, self.set_aside_zero, trace=trace)
            guaranteed = None
        else:
            allocation = densest_first(instance, set_aside_zero=self.set_aside_zero, trace=trace)
            guaranteed = densest_first_guarantee(instance, self.set_aside_zero)
        elapsed = time.perf_counter() - started
        logger.info("%s finished in %.3fs (%d iterations)", algorithm.value, elapsed, trace.iterations)
        return SolveOutcome(
            algorithm=algorithm,
            instance=instance,
            reports=self.certify(allocation, instance),
            guaranteed=guaranteed.label if guaranteed is not None else None,
            allocation=allocation,
            iterations=trace.iterations,
            elapsed_seconds=elapsed,
            special_cases=special.names(),
            set_aside_zero=self.set_aside_zero,
        )

    def certify(self, allocation: Allocation, instance: Instance) -> List[EnvyReport]:
        return [verify(allocation, c, instance, self.limits) for c in self.indivisible_criteria]

    def certify_divisible(
        self,
        allocation: FractionalAllocation,
        certificate: Optional[DDCertificate],
        instance: Instance,
    ) -> List[EnvyReport]:
        reports = [verify_ef_divisible(allocation, instance)]
        if certificate is not None:
            holds = verify_dd(certificate, augment_instance(instance))
            reports.append(EnvyReport(holds, DD_LABEL))
        return reports

    def check(self, allocation: Allocation, criterion: EnvyCriterion, instance: Instance) -> EnvyReport:
        return verify(allocation, criterion, instance, self.limits)


__all__ = ["Algorithm", "ChoreAllocationApp", "DD_LABEL", "SolveOutcome"]
