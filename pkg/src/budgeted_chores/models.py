"""Data models for budget-constrained chore allocation.

Every numeric quantity is a :class:`fractions.Fraction`; nothing in the package
rounds. Chore and agent indices are 0-based here and 1-based in files and reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidAllocation

Bundle = FrozenSet[int]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: object) -> Fraction:
    """Convert ints, ``"p/q"`` strings, decimal strings and fractions exactly."""

    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        # shortest repr round-trips the literal the user wrote
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty numeric string")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Chore:
    """A chore with an objective size and disutility."""

    id: int
    size: Fraction
    disutility: Fraction
    name: Optional[str] = None

    @property
    def density(self) -> Fraction:
        return density(self)

    def label(self) -> str:
        return self.name or f"c{self.id + 1}"


@dataclass(frozen=True)
class Instance:
    """Chores plus per-agent budgets.

    ``disutility_matrix`` (n rows, m columns) is only meaningful for divisible
    chores; indivisible code always reads the objective ``Chore.disutility``.
    """

    chores: Tuple[Chore, ...]
    budgets: Tuple[Fraction, ...]
    disutility_matrix: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    agent_names: Optional[Tuple[str, ...]] = None

    @property
    def n(self) -> int:
        return len(self.budgets)

    @property
    def m(self) -> int:
        return len(self.chores)

    @property
    def is_subjective(self) -> bool:
        return self.disutility_matrix is not None

    def chore(self, chore_id: int) -> Chore:
        return self.chores[chore_id]

    def disutility(self, chore_id: int, agent: Optional[int] = None) -> Fraction:
        if agent is not None and self.disutility_matrix is not None:
            return self.disutility_matrix[agent][chore_id]
        return self.chores[chore_id].disutility

    def density_for(self, chore_id: int, agent: Optional[int] = None) -> Fraction:
        return self.disutility(chore_id, agent) / self.chores[chore_id].size

    def with_budgets(self, budgets: Sequence[Fraction]) -> "Instance":
        return replace(self, budgets=tuple(Fraction(b) for b in budgets))

    def agent_label(self, agent: int) -> str:
        if agent == self.n:
            return "housekeeper"
        if self.agent_names and agent < len(self.agent_names):
            return self.agent_names[agent]
        return f"agent {agent + 1}"

    def all_chores(self) -> Bundle:
        return frozenset(range(self.m))


def aggregate(bundle: Iterable[int], instance: Instance) -> Tuple[Fraction, Fraction]:
    """Return ``(s(S), d(S))`` for a bundle; the empty bundle gives ``(0, 0)``."""

    size = ZERO
    disutility = ZERO
    for chore_id in bundle:
        chore = instance.chores[chore_id]
        size += chore.size
        disutility += chore.disutility
    return size, disutility


def bundle_size(bundle: Iterable[int], instance: Instance) -> Fraction:
    return sum((instance.chores[c].size for c in bundle), ZERO)


def bundle_disutility(bundle: Iterable[int], instance: Instance) -> Fraction:
    return sum((instance.chores[c].disutility for c in bundle), ZERO)


def density(chore: Chore) -> Fraction:
    return chore.disutility / chore.size


def density_order(bundle: Iterable[int], instance: Instance) -> List[int]:
    """Chores in non-increasing density, ties broken by lower id."""

    return sorted(bundle, key=lambda c: (-instance.chores[c].density, c))


@dataclass(frozen=True)
class Allocation:
    """Partition of the chores into ``n`` agent bundles plus the housekeeper's."""

    bundles: Tuple[Bundle, ...]

    @property
    def n(self) -> int:
        return len(self.bundles) - 1

    @property
    def housekeeper(self) -> Bundle:
        return self.bundles[-1]

    @property
    def agent_bundles(self) -> Tuple[Bundle, ...]:
        return self.bundles[:-1]

    def bundle(self, index: int) -> Bundle:
        return self.bundles[index]

    @classmethod
    def empty(cls, instance: Instance) -> "Allocation":
        return cls(tuple(frozenset() for _ in range(instance.n)) + (instance.all_chores(),))

    @classmethod
    def from_agent_bundles(
        cls, agent_bundles: Sequence[Iterable[int]], instance: Instance
    ) -> "Allocation":
        bundles = [frozenset(b) for b in agent_bundles]
        taken: set[int] = set()
        for bundle in bundles:
            taken.update(bundle)
        rest = instance.all_chores() - taken
        allocation = cls(tuple(bundles) + (frozenset(rest),))
        allocation.validate(instance)
        return allocation

    @classmethod
    def from_assignment(cls, owners: Sequence[int], n: int) -> "Allocation":
        """Build from ``owners[c]`` in ``0..n`` (``n`` is the housekeeper)."""

        buckets: List[set[int]] = [set() for _ in range(n + 1)]
        for chore_id, owner in enumerate(owners):
            buckets[owner].add(chore_id)
        return cls(tuple(frozenset(b) for b in buckets))

    def owners(self, m: int) -> List[int]:
        owners = [-1] * m
        for index, bundle in enumerate(self.bundles):
            for chore_id in bundle:
                owners[chore_id] = index
        return owners

    def validate(self, instance: Instance) -> None:
        if len(self.bundles) != instance.n + 1:
            raise InvalidAllocation(
                f"expected {instance.n + 1} bundles, got {len(self.bundles)}"
            )
        seen: set[int] = set()
        for index, bundle in enumerate(self.bundles):
            for chore_id in bundle:
                if not 0 <= chore_id < instance.m:
                    raise InvalidAllocation(f"unknown chore {chore_id + 1}")
                if chore_id in seen:
                    raise InvalidAllocation(
                        f"chore {chore_id + 1} appears in more than one bundle"
                    )
                seen.add(chore_id)
        if len(seen) != instance.m:
            missing = sorted(instance.all_chores() - seen)
            raise InvalidAllocation(f"chores {[c + 1 for c in missing]} are not allocated")


def is_feasible(allocation: Allocation, instance: Instance) -> bool:
    """True iff every agent bundle fits its budget (the housekeeper has none)."""

    return all(
        bundle_size(bundle, instance) <= budget
        for bundle, budget in zip(allocation.agent_bundles, instance.budgets)
    )


def total_agent_disutility(allocation: Allocation, instance: Instance) -> Fraction:
    return sum((bundle_disutility(b, instance) for b in allocation.agent_bundles), ZERO)


@dataclass(frozen=True)
class FractionalAllocation:
    """``(n+1) x m`` matrix of chore fractions; the last row is the housekeeper."""

    fractions: Tuple[Tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.fractions) - 1

    @property
    def m(self) -> int:
        return len(self.fractions[0]) if self.fractions else 0

    def row(self, index: int) -> Tuple[Fraction, ...]:
        return self.fractions[index]

    @classmethod
    def from_agent_rows(cls, rows: Sequence[Sequence[Fraction]], m: int) -> "FractionalAllocation":
        agent_rows = [tuple(Fraction(x) for x in row) for row in rows]
        housekeeper = tuple(ONE - sum((row[j] for row in agent_rows), ZERO) for j in range(m))
        return cls(tuple(agent_rows) + (housekeeper,))

    def size(self, index: int, instance: Instance) -> Fraction:
        return sum(
            (x * chore.size for x, chore in zip(self.fractions[index], instance.chores)), ZERO
        )

    def disutility(self, index: int, instance: Instance, view: Optional[int] = None) -> Fraction:
        """Disutility of row ``index`` as seen by agent ``view``."""

        return sum(
            (x * instance.disutility(j, view) for j, x in enumerate(self.fractions[index])),
            ZERO,
        )

    def support(self, index: int) -> Bundle:
        return frozenset(j for j, x in enumerate(self.fractions[index]) if x > 0)

    def validate(self, instance: Instance) -> None:
        if len(self.fractions) != instance.n + 1:
            raise InvalidAllocation(
                f"expected {instance.n + 1} rows, got {len(self.fractions)}"
            )
        for index, row in enumerate(self.fractions):
            if len(row) != instance.m:
                raise InvalidAllocation(
                    f"row {index + 1} has {len(row)} entries, expected {instance.m}"
                )
            for j, x in enumerate(row):
                if not ZERO <= x <= ONE:
                    raise InvalidAllocation(f"fraction {x} of chore {j + 1} outside [0, 1]")
        for j in range(instance.m):
            column = sum((row[j] for row in self.fractions), ZERO)
            if column != ONE:
                raise InvalidAllocation(f"chore {j + 1} fractions sum to {column}, not 1")
        for i in range(instance.n):
            if self.size(i, instance) > instance.budgets[i]:
                raise InvalidAllocation(f"{instance.agent_label(i)} exceeds budget")


@dataclass
class SolverTrace:
    """Optional recorder handed to solvers.

    ``iterations`` counts main-loop passes; snapshots hold the allocation after
    every pass when ``record_snapshots`` is set.
    """

    record_snapshots: bool = False
    iterations: int = 0
    snapshots: List[Allocation] = field(default_factory=list)
    taus: List[Tuple[int, ...]] = field(default_factory=list)

    def step(self, allocation: Optional[Allocation] = None) -> None:
        self.iterations += 1
        if self.record_snapshots and allocation is not None:
            self.snapshots.append(allocation)


__all__ = [
    "Bundle",
    "Chore",
    "Instance",
    "Allocation",
    "FractionalAllocation",
    "SolverTrace",
    "aggregate",
    "as_rational",
    "bundle_disutility",
    "bundle_size",
    "density",
    "density_order",
    "format_rational",
    "is_feasible",
    "total_agent_disutility",
]
