"""Divisible chores: density-domination allocations found through a family of LPs.

The instance is augmented with a zero-disutility chore large enough to absorb
every budget. Starting from ``tau = (1, ..., 1)`` the solver increments one
agent's counter at a time, keeping the relaxed program feasible, until the
program with budgets met exactly becomes feasible.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import CounterSearchExhausted, InternalInvariantViolation
from .fairness import EnvyReport, EnvyWitness
from .lp import LinearSystem, Relation, feasible
from .models import (
    ONE,
    ZERO,
    Bundle,
    Chore,
    FractionalAllocation,
    Instance,
    SolverTrace,
)

logger = logging.getLogger(__name__)

TauVector = Tuple[int, ...]

FICTIONAL_NAME = "fictional"


def augment_instance(instance: Instance) -> Instance:
    """Append a zero-disutility chore of size ``2 n max(B)``."""

    size = 2 * instance.n * max(instance.budgets)
    fictional = Chore(id=instance.m, size=size, disutility=ZERO, name=FICTIONAL_NAME)
    matrix = None
    if instance.disutility_matrix is not None:
        matrix = tuple(row + (ZERO,) for row in instance.disutility_matrix)
    return Instance(
        chores=instance.chores + (fictional,),
        budgets=instance.budgets,
        disutility_matrix=matrix,
        agent_names=instance.agent_names,
    )


@dataclass(frozen=True)
class DensityOrdering:
    """Per-agent chore order, densest first with ties to the lower index."""

    orders: Tuple[Tuple[int, ...], ...]

    def rank(self, agent: int, position: int) -> int:
        return self.orders[agent][position]


def density_ordering(augmented: Instance) -> DensityOrdering:
    orders = []
    last = augmented.m - 1
    for agent in range(augmented.n):
        order = tuple(
            sorted(range(augmented.m), key=lambda j: (-augmented.density_for(j, agent), j))
        )
        if order[-1] != last:
            raise InternalInvariantViolation(f"fictional chore not last for agent {agent + 1}")
        orders.append(order)
    return DensityOrdering(tuple(orders))


def validate_tau(tau: Sequence[int], n: int, chore_count: int) -> TauVector:
    """``chore_count`` counts the fictional chore, so each entry lies in ``[1, chore_count + 1]``."""

    if len(tau) != n:
        raise ValueError(f"tau has {len(tau)} entries for {n} agents")
    for i, t in enumerate(tau):
        if not 1 <= t <= chore_count + 1:
            raise ValueError(f"tau[{i + 1}] = {t} outside [1, {chore_count + 1}]")
    return tuple(tau)


def internal_edge_sets(tau: Sequence[int], ordering: DensityOrdering) -> List[Tuple[Bundle, Bundle]]:
    """``(I_i, E_i)`` per agent: the ``tau_i - 1`` densest chores and the next one."""

    sets = []
    for agent, t in enumerate(tau):
        order = ordering.orders[agent]
        internal = frozenset(order[: t - 1])
        edge = frozenset((order[t - 1],)) if t <= len(order) else frozenset()
        sets.append((internal, edge))
    return sets


class LPVariant(str, Enum):
    EXACT_BUDGETS = "lp1"
    RELAXED_BUDGETS = "lp2"


def variable(agent: int, chore: int, chore_count: int) -> int:
    return agent * chore_count + chore


def build_lp(
    tau: Sequence[int],
    variant: LPVariant,
    augmented: Instance,
    ordering: Optional[DensityOrdering] = None,
) -> LinearSystem:
    """Constraint system over ``z[i, j]`` in ``[0, 1]`` for the given counters.

    Variables outside an agent's internal and edge chores are fixed to zero
    through their bounds.
    """

    ordering = ordering or density_ordering(augmented)
    n, count = augmented.n, augmented.m
    tau = validate_tau(tau, n, count)
    sets = internal_edge_sets(tau, ordering)
    internal_any = frozenset().union(*(internal for internal, _ in sets))
    system = LinearSystem.boxed(n * count)

    for i, (internal, edge) in enumerate(sets):
        reachable = internal | edge
        for j in range(count):
            if j not in reachable:
                system.fix(variable(i, j, count), ZERO)
        for j in sorted(internal):
            for other in range(n):
                if other != i:
                    system.add(
                        {variable(i, j, count): ONE, variable(other, j, count): -ONE},
                        Relation.LE,
                        ZERO,
                        label=f"minimal share of chore {j + 1} for agent {i + 1}",
                    )
        relation = Relation.EQ if variant is LPVariant.EXACT_BUDGETS else Relation.LE
        system.add(
            {variable(i, j, count): augmented.chores[j].size for j in sorted(reachable)},
            relation,
            augmented.budgets[i],
            label=f"budget of agent {i + 1}",
        )

    for j in range(count):
        column = {variable(i, j, count): ONE for i in range(n)}
        if j in internal_any:
            system.add(column, Relation.EQ, ONE, label=f"chore {j + 1} fully assigned")
        else:
            system.add(column, Relation.LE, ONE, label=f"chore {j + 1} at most once")
    return system


@dataclass(frozen=True)
class DDCertificate:
    """Counters and the allocation (over the augmented chores) they certify."""

    tau: TauVector
    allocation: FractionalAllocation


def verify_dd(
    certificate: DDCertificate,
    augmented: Instance,
    ordering: Optional[DensityOrdering] = None,
) -> bool:
    """Check minimal internal shares, exact budgets and full assignment of internal chores."""

    ordering = ordering or density_ordering(augmented)
    n, count = augmented.n, augmented.m
    rows = certificate.allocation.fractions
    if len(certificate.tau) != n or len(rows) < n or any(len(rows[i]) != count for i in range(n)):
        return False
    try:
        sets = internal_edge_sets(validate_tau(certificate.tau, n, count), ordering)
    except ValueError:
        return False
    for i, (internal, edge) in enumerate(sets):
        for j in internal:
            if any(rows[i][j] > rows[other][j] for other in range(n)):
                return False
        used = sum((rows[i][j] * augmented.chores[j].size for j in internal | edge), ZERO)
        if used != augmented.budgets[i]:
            return False
    for j in frozenset().union(*(internal for internal, _ in sets)):
        if sum((rows[i][j] for i in range(n)), ZERO) != ONE:
            return False
    return True


def strip_fictional(allocation: FractionalAllocation, m: int) -> FractionalAllocation:
    """Drop the augmented column; the housekeeper row is recomputed from the agents."""

    agent_rows = [row[:m] for row in allocation.fractions[:-1]]
    return FractionalAllocation.from_agent_rows(agent_rows, m)


def solve_divisible(
    instance: Instance,
    trace: Optional[SolverTrace] = None,
) -> Tuple[FractionalAllocation, DDCertificate]:
    """Fractional allocation with a density-domination certificate.

    The certificate refers to the augmented instance; the returned allocation
    covers the original chores only.

    Raises :class:`CounterSearchExhausted` when every single-counter increment
    makes the relaxed program infeasible before the budgets can be met exactly.
    This happens on valid instances: one chore of size 4 and disutility 13 with
    budgets ``(10, 9, 1)`` admits no density-dominating allocation at all.
    """

    augmented = augment_instance(instance)
    ordering = density_ordering(augmented)
    n, count = augmented.n, augmented.m
    tau: TauVector = tuple([1] * n)
    bound = n * count
    iterations = 0
    if trace is not None:
        trace.taus.append(tau)

    result = feasible(build_lp(tau, LPVariant.EXACT_BUDGETS, augmented, ordering))
    while not result:
        for k in range(n):
            if tau[k] > count:
                continue
            candidate = tau[:k] + (tau[k] + 1,) + tau[k + 1 :]
            if feasible(build_lp(candidate, LPVariant.RELAXED_BUDGETS, augmented, ordering)):
                tau = candidate
                break
        else:
            logger.warning("counter search stopped at tau=%s without meeting the budgets", tau)
            raise CounterSearchExhausted(tau)
        iterations += 1
        logger.debug("tau -> %s", tau)
        if trace is not None:
            trace.step()
            trace.taus.append(tau)
        if iterations > bound:
            raise InternalInvariantViolation(f"more than {bound} counter increments")
        result = feasible(build_lp(tau, LPVariant.EXACT_BUDGETS, augmented, ordering))

    point = result.point or ()
    rows = [[point[variable(i, j, count)] for j in range(count)] for i in range(n)]
    augmented_allocation = FractionalAllocation.from_agent_rows(rows, count)
    certificate = DDCertificate(tau, augmented_allocation)
    if not verify_dd(certificate, augmented, ordering):
        raise InternalInvariantViolation(f"exact-budget solution at tau={tau} is not density dominating")
    logger.info("divisible solver settled at tau=%s after %d increments", tau, iterations)
    return strip_fictional(augmented_allocation, instance.m), certificate


# ---------------------------------------------------------------------------
# Envy-freeness for fractional allocations
# ---------------------------------------------------------------------------


def best_fractional_subset(
    row: Sequence[Fraction],
    capacity: Fraction,
    instance: Instance,
    view: int,
) -> Tuple[Fraction, Tuple[Tuple[int, Fraction], ...]]:
    """Max ``d_view(Y)`` over ``Y <= row`` with ``s(Y) <= capacity`` (greedy by density)."""

    held = [j for j, x in enumerate(row) if x > 0]
    held.sort(key=lambda j: (-instance.density_for(j, view), j))
    room = capacity
    total = ZERO
    taken: List[Tuple[int, Fraction]] = []
    for j in held:
        if room <= 0:
            break
        size = instance.chores[j].size
        share = min(row[j], room / size)
        room -= share * size
        total += share * instance.disutility(j, view)
        taken.append((j, share))
    return total, tuple(taken)


def verify_ef_divisible(allocation: FractionalAllocation, instance: Instance) -> EnvyReport:
    """Fractional envy-freeness, the housekeeper judging agent ``j`` by ``d_j``."""

    n = instance.n
    for envier in range(n + 1):
        row = allocation.row(envier)
        for envied in range(n):
            if envied == envier:
                continue
            view = envier if envier < n else envied
            best, taken = best_fractional_subset(row, instance.budgets[envied], instance, view)
            if best > allocation.disutility(envied, instance, view):
                logger.debug(
                    "EF violated: %s envies %s",
                    instance.agent_label(envier), instance.agent_label(envied),
                )
                support = frozenset(j for j, share in taken if share > 0)
                return EnvyReport(False, "EF", EnvyWitness(envier, envied, support, taken))
    return EnvyReport(True, "EF")


__all__ = [
    "DDCertificate",
    "DensityOrdering",
    "LPVariant",
    "TauVector",
    "augment_instance",
    "best_fractional_subset",
    "build_lp",
    "density_ordering",
    "internal_edge_sets",
    "solve_divisible",
    "strip_fictional",
    "validate_tau",
    "verify_dd",
    "verify_ef_divisible",
]
