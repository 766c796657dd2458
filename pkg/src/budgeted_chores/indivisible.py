"""Solvers for indivisible chores under budget constraints.

``solve_efx`` grows agent bundles through manageable sets until none is left,
``densest_first`` is the greedy density-ordered assignment, and
``solve_two_agents`` composes two greedy runs for the two-agent case.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .config import SearchLimits
from .errors import InternalInvariantViolation, WrongAgentCount
from .fairness import EF1, EF2, EnvyCriterion
from .knapsack import items_for, lexicographic_subset_with_value, max_disutility_with_count
from .models import (
    ZERO,
    Allocation,
    Bundle,
    Instance,
    SolverTrace,
    bundle_disutility,
    bundle_size,
    total_agent_disutility,
)

logger = logging.getLogger(__name__)


class SpecialCaseFlag(str, Enum):
    IDENTICALLY_VALUED = "identically-valued"
    BINARY_DISUTILITY = "binary-disutility"
    IDENTICALLY_SIZED = "identically-sized"
    IDENTICALLY_DENSE = "identically-dense"
    IDENTICAL_BUDGETS = "identical-budgets"
    TWO_AGENTS = "two-agents"


# Flags under which the greedy assignment alone is EF1. Identical budgets and
# two agents are not among them: with budgets (10, 10) and chores (5, 6),
# (7, 7), (1, 12) the first agent keeps picking after the second retires.
GREEDY_EF1_FLAGS = frozenset(
    {
        SpecialCaseFlag.IDENTICALLY_VALUED,
        SpecialCaseFlag.BINARY_DISUTILITY,
        SpecialCaseFlag.IDENTICALLY_SIZED,
        SpecialCaseFlag.IDENTICALLY_DENSE,
    }
)


@dataclass(frozen=True)
class SpecialCase:
    flags: FrozenSet[SpecialCaseFlag]

    def __contains__(self, flag: object) -> bool:
        return flag in self.flags

    @property
    def guaranteed(self) -> EnvyCriterion:
        return EF1 if self.flags & GREEDY_EF1_FLAGS else EF2

    def names(self) -> List[str]:
        return sorted(flag.value for flag in self.flags)


@dataclass(frozen=True)
class ManageableSet:
    chores: Bundle
    target_agent: int


# ---------------------------------------------------------------------------
# EFX via manageable sets
# ---------------------------------------------------------------------------


def find_manageable_set(
    allocation: Allocation,
    instance: Instance,
    limits: Optional[SearchLimits] = None,
) -> Optional[ManageableSet]:
    """Smallest housekeeper subset some agent can afford and strictly prefers to swap for.

    Among sets of the minimum cardinality the one of largest disutility wins,
    then the lexicographically smallest chore set, then the lowest agent.
    """

    pool = items_for(allocation.housekeeper, instance)
    if not pool:
        return None
    current = [bundle_disutility(b, instance) for b in allocation.agent_bundles]
    for cardinality in range(1, len(pool) + 1):
        best: Optional[Fraction] = None
        for agent, budget in enumerate(instance.budgets):
            value = max_disutility_with_count(pool, budget, cardinality, limits=limits)
            if value is not None and value > current[agent] and (best is None or value > best):
                best = value
        if best is None:
            continue
        eligible = [k for k in range(instance.n) if current[k] < best]
        capacity = max(instance.budgets[k] for k in eligible)
        chosen = lexicographic_subset_with_value(pool, capacity, cardinality, best, limits)
        if chosen is None:
            raise InternalInvariantViolation(
                f"no {cardinality}-chore set of disutility {best} found within capacity {capacity}"
            )
        size = bundle_size(chosen, instance)
        target = next(k for k in eligible if size <= instance.budgets[k])
        return ManageableSet(frozenset(chosen), target)
    return None


def solve_efx(
    instance: Instance,
    limits: Optional[SearchLimits] = None,
    trace: Optional[SolverTrace] = None,
) -> Allocation:
    """EFX allocation obtained by repeatedly handing a manageable set to its agent."""

    bundles: List[Bundle] = [frozenset() for _ in range(instance.n)]
    housekeeper: Bundle = instance.all_chores()
    allocation = Allocation(tuple(bundles) + (housekeeper,))
    previous = ZERO
    while True:
        manageable = find_manageable_set(allocation, instance, limits)
        if manageable is None:
            break
        k = manageable.target_agent
        released = bundles[k]
        bundles[k] = manageable.chores
        housekeeper = (housekeeper - manageable.chores) | released
        allocation = Allocation(tuple(bundles) + (housekeeper,))
        total = total_agent_disutility(allocation, instance)
        if total <= previous:
            raise InternalInvariantViolation(
                f"agent disutility did not increase ({previous} -> {total})"
            )
        previous = total
        logger.debug(
            "%s takes %s (released %d chores)",
            instance.agent_label(k), sorted(c + 1 for c in manageable.chores), len(released),
        )
        if trace is not None:
            trace.step(allocation)
    logger.info("EFX solver finished; total agent disutility %s", previous)
    return allocation


# ---------------------------------------------------------------------------
# DensestFirst
# ---------------------------------------------------------------------------


def densest_first(
    instance: Instance,
    budgets: Optional[Sequence[Fraction]] = None,
    chores: Optional[Iterable[int]] = None,
    agents: Optional[Sequence[int]] = None,
    set_aside_zero: bool = False,
    trace: Optional[SolverTrace] = None,
) -> Allocation:
    """Greedy assignment of the densest affordable chore to the least-burdened agent.

    ``budgets`` overrides the instance budgets, ``chores`` restricts the pool and
    ``agents`` restricts (and orders, for tie-breaking) the agents that take
    part. Agents outside ``agents`` and chores outside the pool stay empty /
    with the housekeeper. ``set_aside_zero`` leaves zero-disutility chores to
    the housekeeper from the start.
    """

    caps = tuple(budgets) if budgets is not None else instance.budgets
    if len(caps) != instance.n:
        raise ValueError(f"{len(caps)} budgets given for {instance.n} agents")
    order = list(agents) if agents is not None else list(range(instance.n))
    priority: Dict[int, int] = {agent: position for position, agent in enumerate(order)}
    pool: Set[int] = set(chores) if chores is not None else set(instance.all_chores())
    if set_aside_zero:
        pool = {c for c in pool if instance.chores[c].disutility > 0}

    bundles: List[Set[int]] = [set() for _ in range(instance.n)]
    load = [ZERO] * instance.n
    used = [ZERO] * instance.n
    live = set(order)

    def snapshot() -> Allocation:
        frozen = tuple(frozenset(b) for b in bundles)
        taken = frozenset().union(*frozen) if frozen else frozenset()
        return Allocation(frozen + (instance.all_chores() - taken,))

    while live and pool:
        agent = min(live, key=lambda i: (load[i], priority[i]))
        room = caps[agent] - used[agent]
        fitting = [c for c in pool if instance.chores[c].size <= room]
        if not fitting:
            live.discard(agent)
            logger.debug("%s retires", instance.agent_label(agent))
        else:
            pick = min(
                fitting,
                key=lambda c: (-instance.chores[c].density, instance.chores[c].size, c),
            )
            pool.discard(pick)
            bundles[agent].add(pick)
            load[agent] += instance.chores[pick].disutility
            used[agent] += instance.chores[pick].size
        if trace is not None:
            trace.step(snapshot())
    return snapshot()


def solve_two_agents(
    instance: Instance,
    set_aside_zero: bool = False,
    trace: Optional[SolverTrace] = None,
) -> Allocation:
    """Two-agent composition of greedy runs, for arbitrary budgets.

    Both agents first run the greedy with the smaller budget; the smaller-budget
    agent keeps the heavier of the two bundles and the other agent then runs
    the greedy alone with its own budget on what is left.

    The larger-budget agent never ends up lighter than the phase-one bundle the
    other agent gave up, so the smaller-budget agent is EF2 towards it. The
    result is not EF1 in general: budgets ``(12, 10)`` with chores ``(5, 6)``,
    ``(7, 7)``, ``(1, 12)`` leave the smaller-budget agent with ``{c2, c3}``.
    """

    if instance.n != 2:
        raise WrongAgentCount(f"two-agent solver needs exactly 2 agents, got {instance.n}")
    low, high = sorted(range(2), key=lambda i: (instance.budgets[i], i))
    shared = instance.budgets[low]
    phase_one = densest_first(
        instance,
        budgets=(shared, shared),
        agents=(low, high),
        set_aside_zero=set_aside_zero,
        trace=trace,
    )
    first, second = phase_one.bundle(low), phase_one.bundle(high)
    kept = first if bundle_disutility(first, instance) >= bundle_disutility(second, instance) else second
    phase_two = densest_first(
        instance,
        chores=instance.all_chores() - kept,
        agents=(high,),
        set_aside_zero=set_aside_zero,
        trace=trace,
    )
    bundles: List[Bundle] = [frozenset(), frozenset()]
    bundles[low] = kept
    bundles[high] = phase_two.bundle(high)
    rest = instance.all_chores() - kept - bundles[high]
    return Allocation(tuple(bundles) + (rest,))


# ---------------------------------------------------------------------------
# Special cases
# ---------------------------------------------------------------------------


def _uniform(values: Iterable[Fraction]) -> bool:
    return len(set(values)) <= 1


def detect_special_case(instance: Instance) -> SpecialCase:
    flags: Set[SpecialCaseFlag] = set()
    positive = [c.disutility for c in instance.chores if c.disutility > 0]
    if _uniform(positive):
        flags.add(SpecialCaseFlag.IDENTICALLY_VALUED)
        flags.add(SpecialCaseFlag.BINARY_DISUTILITY)
    if _uniform(c.size for c in instance.chores):
        flags.add(SpecialCaseFlag.IDENTICALLY_SIZED)
    if _uniform(c.density for c in instance.chores):
        flags.add(SpecialCaseFlag.IDENTICALLY_DENSE)
    if _uniform(instance.budgets):
        flags.add(SpecialCaseFlag.IDENTICAL_BUDGETS)
    if instance.n == 2:
        flags.add(SpecialCaseFlag.TWO_AGENTS)
    return SpecialCase(frozenset(flags))


def classify_instance(instance: Instance) -> Tuple[SpecialCase, EnvyCriterion]:
    special = detect_special_case(instance)
    return special, special.guaranteed


def densest_first_guarantee(
    instance: Instance, set_aside_zero: bool = False
) -> EnvyCriterion:
    """Criterion the greedy assignment provably meets on ``instance``.

    The valued/binary cases need zero-disutility chores left with the
    housekeeper, so they only count when those are set aside or absent.
    """

    special = detect_special_case(instance)
    flags = set(special.flags & GREEDY_EF1_FLAGS)
    has_zero = any(c.disutility == 0 for c in instance.chores)
    if has_zero and not set_aside_zero:
        flags -= {SpecialCaseFlag.IDENTICALLY_VALUED, SpecialCaseFlag.BINARY_DISUTILITY}
    return EF1 if flags else EF2


__all__ = [
    "GREEDY_EF1_FLAGS",
    "ManageableSet",
    "SpecialCase",
    "SpecialCaseFlag",
    "classify_instance",
    "densest_first",
    "densest_first_guarantee",
    "detect_special_case",
    "find_manageable_set",
    "solve_efx",
    "solve_two_agents",
]
