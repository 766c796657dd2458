"""Seeded instance generation and exhaustive oracles for small instances."""
from __future__ import annotations

import itertools
import logging
import random
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence

from pydantic import BaseModel, Field, model_validator

from .config import SearchLimits, get_settings
from .errors import OracleTooLarge
from .fairness import EnvyCriterion, EnvyKind, verify
from .indivisible import SpecialCaseFlag
from .models import Allocation, Chore, Instance, bundle_disutility, bundle_size

logger = logging.getLogger(__name__)


class GeneratorConfig(BaseModel):
    """Ranges are inclusive; values are drawn as integers and divided by ``denominator``."""

    seed: int = 0
    agents_min: int = Field(1, ge=1)
    agents_max: int = Field(4, ge=1)
    chores_min: int = Field(0, ge=0)
    chores_max: int = Field(10, ge=0)
    size_min: int = Field(1, ge=1)
    size_max: int = Field(20, ge=1)
    disutility_min: int = Field(0, ge=0)
    disutility_max: int = Field(20, ge=0)
    budget_min: int = Field(1, ge=1)
    budget_max: int = Field(20, ge=1)
    denominator: int = Field(1, ge=1)
    special_case: Optional[SpecialCaseFlag] = None
    subjective: bool = False

    @model_validator(mode="after")
    def check_ranges(self) -> "GeneratorConfig":
        for name in ("agents", "chores", "size", "disutility", "budget"):
            low, high = getattr(self, f"{name}_min"), getattr(self, f"{name}_max")
            if low > high:
                raise ValueError(f"{name} range [{low}, {high}] is empty")
        return self

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return self.model_copy(update={"seed": seed})


def _draw(rng: random.Random, low: int, high: int, denominator: int) -> Fraction:
    return Fraction(rng.randint(low * denominator, high * denominator), denominator)


def generate(config: GeneratorConfig) -> Instance:
    """Deterministic instance for ``config.seed``; ``special_case`` forces that structure."""

    rng = random.Random(config.seed)
    den = config.denominator
    forced = config.special_case
    n = 2 if forced is SpecialCaseFlag.TWO_AGENTS else rng.randint(config.agents_min, config.agents_max)
    m = rng.randint(config.chores_min, config.chores_max)
    positive_low = max(1, config.disutility_min)
    positive_high = max(positive_low, config.disutility_max)

    if forced is SpecialCaseFlag.IDENTICALLY_SIZED:
        common = _draw(rng, config.size_min, config.size_max, den)
        sizes = [common] * m
    else:
        sizes = [_draw(rng, config.size_min, config.size_max, den) for _ in range(m)]

    if forced is SpecialCaseFlag.IDENTICALLY_VALUED:
        value = _draw(rng, positive_low, positive_high, den)
        disutilities = [value] * m
    elif forced is SpecialCaseFlag.BINARY_DISUTILITY:
        value = _draw(rng, positive_low, positive_high, den)
        disutilities = [value if rng.random() < 0.5 else Fraction(0) for _ in range(m)]
    elif forced is SpecialCaseFlag.IDENTICALLY_DENSE:
        rate = Fraction(rng.randint(positive_low, positive_high))
        disutilities = [rate * size for size in sizes]
    else:
        disutilities = [
            _draw(rng, config.disutility_min, config.disutility_max, den) for _ in range(m)
        ]

    if forced is SpecialCaseFlag.IDENTICAL_BUDGETS:
        common_budget = _draw(rng, config.budget_min, config.budget_max, den)
        budgets = tuple([common_budget] * n)
    else:
        budgets = tuple(_draw(rng, config.budget_min, config.budget_max, den) for _ in range(n))

    matrix = None
    if config.subjective:
        matrix = tuple(
            tuple(_draw(rng, config.disutility_min, config.disutility_max, den) for _ in range(m))
            for _ in range(n)
        )

    chores = tuple(Chore(id=j, size=sizes[j], disutility=disutilities[j]) for j in range(m))
    return Instance(chores=chores, budgets=budgets, disutility_matrix=matrix)


def generate_many(config: GeneratorConfig, count: int) -> Iterator[Instance]:
    for offset in range(count):
        yield generate(config.with_seed(config.seed + offset))


# ---------------------------------------------------------------------------
# Exhaustive oracles
# ---------------------------------------------------------------------------


def enumerate_allocations(instance: Instance, cap: Optional[int] = None) -> Iterator[Allocation]:
    """Every feasible allocation, each exactly once."""

    cap = cap if cap is not None else get_settings().oracle_cap
    total = (instance.n + 1) ** instance.m
    if total > cap:
        raise OracleTooLarge(f"{total} assignments exceed the oracle cap {cap}")
    sizes = [chore.size for chore in instance.chores]
    for owners in itertools.product(range(instance.n + 1), repeat=instance.m):
        used = [Fraction(0)] * instance.n
        fits = True
        for chore_id, owner in enumerate(owners):
            if owner == instance.n:
                continue
            used[owner] += sizes[chore_id]
            if used[owner] > instance.budgets[owner]:
                fits = False
                break
        if fits:
            yield Allocation.from_assignment(owners, instance.n)


def oracle_allocations(
    instance: Instance,
    criterion: EnvyCriterion,
    limits: Optional[SearchLimits] = None,
    cap: Optional[int] = None,
) -> Iterator[Allocation]:
    for allocation in enumerate_allocations(instance, cap):
        if verify(allocation, criterion, instance, limits):
            yield allocation


def oracle_exists(
    instance: Instance,
    criterion: EnvyCriterion,
    limits: Optional[SearchLimits] = None,
    cap: Optional[int] = None,
) -> bool:
    return next(oracle_allocations(instance, criterion, limits, cap), None) is not None


def brute_force_verify(allocation: Allocation, criterion: EnvyCriterion, instance: Instance) -> bool:
    """Literal check of the envy definitions by enumerating every subset and removal set."""

    for envier in range(instance.n + 1):
        held = sorted(allocation.bundle(envier))
        for envied in range(instance.n):
            if envied == envier:
                continue
            budget = instance.budgets[envied]
            target = bundle_disutility(allocation.bundle(envied), instance)
            for size in range(1, len(held) + 1):
                for subset in itertools.combinations(held, size):
                    if bundle_size(subset, instance) > budget:
                        continue
                    if _envies(subset, criterion, target, instance):
                        return False
    return True


def _envies(subset: Sequence[int], criterion: EnvyCriterion, target: Fraction, instance: Instance) -> bool:
    if criterion.kind is EnvyKind.EF:
        return bundle_disutility(subset, instance) > target
    if criterion.kind is EnvyKind.EFX:
        return any(
            bundle_disutility([c for c in subset if c != removed], instance) > target
            for removed in subset
        )
    drop = min(criterion.k, len(subset))
    remainders: List[Fraction] = [
        bundle_disutility([c for c in subset if c not in removed], instance)
        for removed in itertools.combinations(subset, drop)
    ]
    return min(remainders) > target


__all__ = [
    "GeneratorConfig",
    "brute_force_verify",
    "enumerate_allocations",
    "generate",
    "generate_many",
    "oracle_allocations",
    "oracle_exists",
]
