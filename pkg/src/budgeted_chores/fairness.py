"""Envy verifiers for indivisible allocations and the EFCount/prefix utilities."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .config import SearchLimits
from .errors import IndexOutOfRange
from .knapsack import (
    RemovalMode,
    first_violating_subset,
    items_for,
    removal_surplus,
)
from .models import ZERO, Allocation, Bundle, Instance, bundle_disutility, density_order

logger = logging.getLogger(__name__)


class EnvyKind(Enum):
    EF = "ef"
    EFK = "efk"
    EFX = "efx"


@dataclass(frozen=True)
class EnvyCriterion:
    kind: EnvyKind
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind is EnvyKind.EFK and self.k < 1:
            raise ValueError("EFk needs k >= 1")

    @classmethod
    def ef(cls) -> "EnvyCriterion":
        return cls(EnvyKind.EF)

    @classmethod
    def efx(cls) -> "EnvyCriterion":
        return cls(EnvyKind.EFX)

    @classmethod
    def efk(cls, k: int) -> "EnvyCriterion":
        return cls(EnvyKind.EFK, k)

    @classmethod
    def parse(cls, text: str) -> "EnvyCriterion":
        """Parse ``ef``, ``efx``, ``ef1``, ``ef2`` or ``efk:K`` (case-insensitive)."""

        key = text.strip().lower()
        if key == "ef":
            return cls.ef()
        if key == "efx":
            return cls.efx()
        match = re.fullmatch(r"ef(?:k:)?(\d+)", key)
        if match:
            return cls.efk(int(match.group(1)))
        raise ValueError(f"unknown envy criterion {text!r}")

    @property
    def label(self) -> str:
        if self.kind is EnvyKind.EFK:
            return f"EF{self.k}"
        return self.kind.name

    @property
    def removal(self) -> Tuple[int, RemovalMode]:
        if self.kind is EnvyKind.EF:
            return 0, RemovalMode.BEST_REMOVAL
        if self.kind is EnvyKind.EFX:
            return 1, RemovalMode.WORST_REMOVAL
        return self.k, RemovalMode.BEST_REMOVAL

    def __str__(self) -> str:
        return self.label


EF = EnvyCriterion.ef()
EF1 = EnvyCriterion.efk(1)
EF2 = EnvyCriterion.efk(2)
EFX = EnvyCriterion.efx()


@dataclass(frozen=True)
class EnvyWitness:
    """A violating pair: ``envier`` (``n`` = housekeeper) and the subset it would swap in.

    ``fractions`` is set for divisible allocations and lists ``(chore, fraction)``
    pairs of the fractional subset.
    """

    envier: int
    envied: int
    subset: Bundle
    fractions: Optional[Tuple[Tuple[int, Fraction], ...]] = None


@dataclass(frozen=True)
class EnvyReport:
    satisfied: bool
    criterion: str
    witness: Optional[EnvyWitness] = None

    def __bool__(self) -> bool:
        return self.satisfied


def envy_surplus(
    source: Iterable[int],
    budget: Fraction,
    removal_count: int,
    instance: Instance,
    mode: RemovalMode = RemovalMode.BEST_REMOVAL,
    limits: Optional[SearchLimits] = None,
) -> Fraction:
    """Max over ``S ⊆ source`` with ``s(S) <= budget`` of ``d(S)`` after removal.

    The empty subset contributes 0, so the result is never negative.
    """

    best = removal_surplus(items_for(source, instance), budget, removal_count, mode, limits=limits)
    return best if best is not None else ZERO


def verify(
    allocation: Allocation,
    criterion: EnvyCriterion,
    instance: Instance,
    limits: Optional[SearchLimits] = None,
) -> EnvyReport:
    """Check ``criterion`` for every envier (housekeeper included) and envied agent.

    The first violating ``(envier, envied)`` pair in lexicographic order is
    reported together with its lexicographically smallest violating subset.
    """

    removal_count, mode = criterion.removal
    n = instance.n
    envied_disutility = [bundle_disutility(b, instance) for b in allocation.agent_bundles]
    for envier in range(n + 1):
        items = items_for(allocation.bundle(envier), instance)
        if not items:
            continue
        for envied in range(n):
            if envied == envier:
                continue
            budget = instance.budgets[envied]
            threshold = envied_disutility[envied]
            surplus = removal_surplus(items, budget, removal_count, mode, limits=limits)
            if surplus is None or surplus <= threshold:
                continue
            subset = first_violating_subset(items, budget, removal_count, mode, threshold, limits)
            logger.debug(
                "%s violated: %s envies %s", criterion.label,
                instance.agent_label(envier), instance.agent_label(envied),
            )
            return EnvyReport(
                satisfied=False,
                criterion=criterion.label,
                witness=EnvyWitness(envier, envied, frozenset(subset or ())),
            )
    return EnvyReport(satisfied=True, criterion=criterion.label)


# ---------------------------------------------------------------------------
# EFCount and density-ordered prefixes
# ---------------------------------------------------------------------------


def ef_count_values(values: Iterable[Fraction], bound: Fraction) -> int:
    """Fewest values to drop so the remaining sum is at most ``bound``.

    Dropping the largest values first is optimal because removals are free of
    any size constraint.
    """

    ordered = sorted(values, reverse=True)
    remaining = sum(ordered, ZERO)
    removed = 0
    for value in ordered:
        if remaining <= bound:
            break
        remaining -= value
        removed += 1
    return removed


def ef_count(x: Iterable[int], y: Iterable[int], instance: Instance) -> int:
    """``min |R|`` over ``R ⊆ X`` with ``d(X \\ R) <= d(Y)``."""

    return ef_count_values(
        (instance.chores[c].disutility for c in x), bundle_disutility(y, instance)
    )


@dataclass(frozen=True)
class FractionalPrefix:
    """Density-ordered prefix of a bundle, cut fractionally at a size threshold."""

    whole_chores: Tuple[int, ...]
    fringe: Optional[Tuple[int, Fraction]] = None

    def size(self, instance: Instance) -> Fraction:
        total = sum((instance.chores[c].size for c in self.whole_chores), ZERO)
        if self.fringe is not None:
            chore_id, alpha = self.fringe
            total += alpha * instance.chores[chore_id].size
        return total

    def disutility(self, instance: Instance) -> Fraction:
        return sum(self.values(instance), ZERO)

    def values(self, instance: Instance) -> List[Fraction]:
        """Disutility of each removable item; the fringe counts as one item."""

        values = [instance.chores[c].disutility for c in self.whole_chores]
        if self.fringe is not None:
            chore_id, alpha = self.fringe
            values.append(alpha * instance.chores[chore_id].disutility)
        return values


def prefix_by_count(bundle: Iterable[int], count: int, instance: Instance) -> Bundle:
    ordered = density_order(bundle, instance)
    if count < 0 or count > len(ordered):
        raise IndexOutOfRange(f"prefix of {count} chores requested from {len(ordered)}")
    return frozenset(ordered[:count])


def prefix_by_size(bundle: Iterable[int], threshold: Fraction, instance: Instance) -> FractionalPrefix:
    if threshold < 0:
        raise ValueError("prefix threshold must be non-negative")
    ordered = density_order(bundle, instance)
    whole: List[int] = []
    used = ZERO
    for chore_id in ordered:
        size = instance.chores[chore_id].size
        if used + size <= threshold:
            whole.append(chore_id)
            used += size
            continue
        alpha = (threshold - used) / size
        fringe = (chore_id, alpha) if alpha > 0 else None
        return FractionalPrefix(tuple(whole), fringe)
    return FractionalPrefix(tuple(whole))


def prefix_ef_count(
    x: Iterable[int], y: Iterable[int], threshold: Fraction, instance: Instance
) -> int:
    """EFCount between the size-``threshold`` prefixes of ``X`` and ``Y``."""

    x_prefix = prefix_by_size(x, threshold, instance)
    y_prefix = prefix_by_size(y, threshold, instance)
    return ef_count_values(x_prefix.values(instance), y_prefix.disutility(instance))


def prefix_pair_ef_count(
    z: Iterable[int],
    z_threshold: Fraction,
    y: Iterable[int],
    y_threshold: Fraction,
    instance: Instance,
) -> int:
    """EFCount between prefixes of ``Z`` and ``Y`` cut at different thresholds."""

    z_prefix = prefix_by_size(z, z_threshold, instance)
    y_prefix = prefix_by_size(y, y_threshold, instance)
    return ef_count_values(z_prefix.values(instance), y_prefix.disutility(instance))


def verify_all(
    allocation: Allocation,
    instance: Instance,
    criteria: Sequence[EnvyCriterion] = (EF, EFX, EF1, EF2),
    limits: Optional[SearchLimits] = None,
) -> List[EnvyReport]:
    return [verify(allocation, criterion, instance, limits) for criterion in criteria]


__all__ = [
    "EF",
    "EF1",
    "EF2",
    "EFX",
    "EnvyCriterion",
    "EnvyKind",
    "EnvyReport",
    "EnvyWitness",
    "FractionalPrefix",
    "ef_count",
    "ef_count_values",
    "envy_surplus",
    "prefix_by_count",
    "prefix_by_size",
    "prefix_ef_count",
    "prefix_pair_ef_count",
    "verify",
    "verify_all",
]
