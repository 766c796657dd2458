"""Exact knapsack kernels used by the verifiers and the EFX solver.

Small pools are searched by enumerating size-feasible subsets; larger pools fall
back to a pseudopolynomial dynamic program over integer-scaled sizes. Both paths
are exact. ``SearchLimits`` decides which one runs and when to give up.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .config import SearchLimits, resolve_limits
from .errors import VerificationIntractable
from .models import ZERO, Instance

logger = logging.getLogger(__name__)


class RemovalMode(Enum):
    """Which chores are removed from a candidate subset before comparing.

    BEST_REMOVAL drops the ``k`` largest disutilities (EF with k=0, EFk);
    WORST_REMOVAL drops the ``k`` smallest (EFX with k=1).
    """

    BEST_REMOVAL = "best"
    WORST_REMOVAL = "worst"


@dataclass(frozen=True)
class Item:
    chore_id: int
    size: Fraction
    disutility: Fraction


def items_for(bundle: Iterable[int], instance: Instance) -> List[Item]:
    return [
        Item(c, instance.chores[c].size, instance.chores[c].disutility) for c in sorted(bundle)
    ]


def removal_objective(values: Sequence[Fraction], removal_count: int, mode: RemovalMode) -> Fraction:
    """Disutility left in a subset after removing ``removal_count`` chores."""

    if removal_count <= 0:
        return sum(values, ZERO)
    if len(values) <= removal_count:
        return ZERO
    ordered = sorted(values, reverse=mode is RemovalMode.BEST_REMOVAL)
    return sum(ordered[removal_count:], ZERO)


def _scale(sizes: Iterable[Fraction], capacity: Fraction) -> int:
    return math.lcm(capacity.denominator, *(s.denominator for s in sizes))


def _check_cells(cells: int, pool: int, limits: SearchLimits, what: str) -> None:
    if cells > limits.dp_cell_cap:
        raise VerificationIntractable(
            f"{what}: {pool} chores exceed the enumeration limit "
            f"({limits.enumeration_limit}) and the DP needs {cells} cells "
            f"(cap {limits.dp_cell_cap})"
        )


# ---------------------------------------------------------------------------
# Removal surplus: max over S of d(S) minus the removed chores
# ---------------------------------------------------------------------------


def removal_surplus(
    items: Sequence[Item],
    capacity: Fraction,
    removal_count: int,
    mode: RemovalMode = RemovalMode.BEST_REMOVAL,
    forced: Sequence[Item] = (),
    limits: Optional[SearchLimits] = None,
) -> Optional[Fraction]:
    """Maximum post-removal disutility over subsets ``forced ⊆ S ⊆ items``.

    Only subsets with ``s(S) <= capacity`` count. Returns ``None`` when the
    forced chores alone exceed the capacity.
    """

    limits = resolve_limits(limits)
    forced_ids = {item.chore_id for item in forced}
    pool = [item for item in items if item.chore_id not in forced_ids]
    base_size = sum((item.size for item in forced), ZERO)
    if base_size > capacity:
        return None
    if len(pool) + len(forced) <= limits.enumeration_limit:
        return _enumerate_surplus(pool, forced, capacity, removal_count, mode)
    logger.debug("removal surplus via DP over %d chores", len(pool) + len(forced))
    return _dp_surplus(pool, forced, capacity, removal_count, mode, limits)


def _enumerate_surplus(
    pool: Sequence[Item],
    forced: Sequence[Item],
    capacity: Fraction,
    removal_count: int,
    mode: RemovalMode,
) -> Fraction:
    values = [item.disutility for item in forced]
    best = removal_objective(values, removal_count, mode)

    def visit(start: int, size: Fraction) -> None:
        nonlocal best
        for index in range(start, len(pool)):
            item = pool[index]
            grown = size + item.size
            if grown > capacity:
                continue
            values.append(item.disutility)
            value = removal_objective(values, removal_count, mode)
            if value > best:
                best = value
            visit(index + 1, grown)
            values.pop()

    visit(0, sum((item.size for item in forced), ZERO))
    return best


def _dp_surplus(
    pool: Sequence[Item],
    forced: Sequence[Item],
    capacity: Fraction,
    removal_count: int,
    mode: RemovalMode,
    limits: SearchLimits,
) -> Optional[Fraction]:
    # The removed chores are exactly the first ``removal_count`` taken when
    # items are visited largest-first (BEST) or smallest-first (WORST).
    forced_ids = {item.chore_id for item in forced}
    everything = list(pool) + list(forced)
    descending = mode is RemovalMode.BEST_REMOVAL
    everything.sort(key=lambda it: (-it.disutility if descending else it.disutility, it.chore_id))
    scale = _scale((it.size for it in everything), capacity)
    width = int(capacity * scale)
    skip = max(removal_count, 0)
    _check_cells(len(everything) * (skip + 1) * (width + 1), len(everything), limits, "surplus")

    table: List[List[Optional[Fraction]]] = [[None] * (width + 1) for _ in range(skip + 1)]
    table[0][0] = ZERO
    for item in everything:
        weight = int(item.size * scale)
        if item.chore_id in forced_ids:
            grown: List[List[Optional[Fraction]]] = [[None] * (width + 1) for _ in range(skip + 1)]
        else:
            grown = [row[:] for row in table]
        for removed in range(skip + 1):
            row = table[removed]
            target = grown[min(removed + 1, skip)]
            gain = item.disutility if removed == skip else ZERO
            for used in range(width + 1 - weight):
                value = row[used]
                if value is None:
                    continue
                candidate = value + gain
                current = target[used + weight]
                if current is None or candidate > current:
                    target[used + weight] = candidate
        table = grown

    reachable = [v for row in table for v in row if v is not None]
    return max(reachable) if reachable else None


def first_violating_subset(
    items: Sequence[Item],
    capacity: Fraction,
    removal_count: int,
    mode: RemovalMode,
    threshold: Fraction,
    limits: Optional[SearchLimits] = None,
) -> Optional[Tuple[int, ...]]:
    """Lexicographically smallest id tuple whose post-removal disutility exceeds ``threshold``."""

    limits = resolve_limits(limits)
    ordered = sorted(items, key=lambda it: it.chore_id)
    if len(ordered) <= limits.enumeration_limit:
        return _first_violating_enumerated(ordered, capacity, removal_count, mode, threshold)

    chosen: List[Item] = []
    while True:
        values = [it.disutility for it in chosen]
        if removal_objective(values, removal_count, mode) > threshold:
            return tuple(it.chore_id for it in chosen)
        last = chosen[-1].chore_id if chosen else -1
        for item in ordered:
            if item.chore_id <= last:
                continue
            rest = [it for it in ordered if it.chore_id > item.chore_id]
            best = removal_surplus(
                rest + chosen + [item],
                capacity,
                removal_count,
                mode,
                forced=chosen + [item],
                limits=limits,
            )
            if best is not None and best > threshold:
                chosen.append(item)
                break
        else:
            return None


def _first_violating_enumerated(
    ordered: Sequence[Item],
    capacity: Fraction,
    removal_count: int,
    mode: RemovalMode,
    threshold: Fraction,
) -> Optional[Tuple[int, ...]]:
    # Pre-order DFS over increasing ids visits subsets in lexicographic order.
    values: List[Fraction] = []
    path: List[int] = []

    def visit(start: int, size: Fraction) -> Optional[Tuple[int, ...]]:
        for index in range(start, len(ordered)):
            item = ordered[index]
            grown = size + item.size
            if grown > capacity:
                continue
            values.append(item.disutility)
            path.append(item.chore_id)
            if removal_objective(values, removal_count, mode) > threshold:
                return tuple(path)
            found = visit(index + 1, grown)
            if found is not None:
                return found
            values.pop()
            path.pop()
        return None

    return visit(0, ZERO)


# ---------------------------------------------------------------------------
# Cardinality-constrained max-disutility knapsack
# ---------------------------------------------------------------------------


def max_disutility_with_count(
    items: Sequence[Item],
    capacity: Fraction,
    count: int,
    forced: Sequence[Item] = (),
    limits: Optional[SearchLimits] = None,
) -> Optional[Fraction]:
    """Max ``d(T)`` over ``forced ⊆ T ⊆ items`` with ``|T| = count`` and ``s(T) <= capacity``."""

    limits = resolve_limits(limits)
    forced_ids = {item.chore_id for item in forced}
    pool = [item for item in items if item.chore_id not in forced_ids]
    free = count - len(forced)
    base_size = sum((it.size for it in forced), ZERO)
    base_value = sum((it.disutility for it in forced), ZERO)
    if free < 0 or free > len(pool) or base_size > capacity:
        return None
    if len(pool) + len(forced) <= limits.enumeration_limit:
        best: Optional[Fraction] = None
        for combo in itertools.combinations(pool, free):
            size = base_size + sum((it.size for it in combo), ZERO)
            if size > capacity:
                continue
            value = base_value + sum((it.disutility for it in combo), ZERO)
            if best is None or value > best:
                best = value
        return best

    scale = _scale((it.size for it in pool), capacity - base_size)
    width = int((capacity - base_size) * scale)
    _check_cells(len(pool) * (free + 1) * (width + 1), len(pool) + len(forced), limits, "cardinality")
    table: List[List[Optional[Fraction]]] = [[None] * (width + 1) for _ in range(free + 1)]
    table[0][0] = base_value
    for item in pool:
        weight = int(item.size * scale)
        for taken in range(free - 1, -1, -1):
            row = table[taken]
            target = table[taken + 1]
            for used in range(width - weight, -1, -1):
                value = row[used]
                if value is None:
                    continue
                candidate = value + item.disutility
                current = target[used + weight]
                if current is None or candidate > current:
                    target[used + weight] = candidate
    reachable = [v for v in table[free] if v is not None]
    return max(reachable) if reachable else None


def lexicographic_subset_with_value(
    items: Sequence[Item],
    capacity: Fraction,
    count: int,
    target: Fraction,
    limits: Optional[SearchLimits] = None,
) -> Optional[Tuple[int, ...]]:
    """Lexicographically smallest ``T`` with ``|T| = count``, ``s(T) <= capacity`` and
    ``d(T) >= target``. ``target`` is normally the optimum of :func:`max_disutility_with_count`.
    """

    limits = resolve_limits(limits)
    ordered = sorted(items, key=lambda it: it.chore_id)
    if len(ordered) <= limits.enumeration_limit:
        for combo in itertools.combinations(ordered, count):
            if sum((it.size for it in combo), ZERO) > capacity:
                continue
            if sum((it.disutility for it in combo), ZERO) >= target:
                return tuple(it.chore_id for it in combo)
        return None

    chosen: List[Item] = []
    while len(chosen) < count:
        last = chosen[-1].chore_id if chosen else -1
        for item in ordered:
            if item.chore_id <= last:
                continue
            rest = [it for it in ordered if it.chore_id > item.chore_id]
            best = max_disutility_with_count(
                rest + chosen + [item], capacity, count, forced=chosen + [item], limits=limits
            )
            if best is not None and best >= target:
                chosen.append(item)
                break
        else:
            return None
    return tuple(it.chore_id for it in chosen)


__all__ = [
    "Item",
    "RemovalMode",
    "first_violating_subset",
    "items_for",
    "lexicographic_subset_with_value",
    "max_disutility_with_count",
    "removal_objective",
    "removal_surplus",
]
