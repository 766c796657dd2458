"""Validation routines turning raw parsed data into checked instances."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    DimensionMismatch,
    InstanceValidationError,
    NegativeDisutility,
    NonPositiveBudget,
    NonPositiveSize,
)
from .models import Chore, Instance, as_rational


def _rational(value: Any, what: str) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceValidationError(f"{what}: {value!r} is not a rational number") from exc


def validate_chore(index: int, raw: Mapping[str, Any]) -> Chore:
    label = raw.get("name") or f"chore {index + 1}"
    size = _rational(raw.get("size"), f"{label} size")
    disutility = _rational(raw.get("disutility"), f"{label} disutility")
    if size <= 0:
        raise NonPositiveSize(f"{label} has size {size}; sizes must be positive")
    if disutility < 0:
        raise NegativeDisutility(f"{label} has disutility {disutility}; must be non-negative")
    return Chore(id=index, size=size, disutility=disutility, name=raw.get("name"))


def validate_budgets(raw_budgets: Iterable[Any]) -> Tuple[Fraction, ...]:
    budgets: List[Fraction] = []
    for index, raw in enumerate(raw_budgets):
        budget = _rational(raw, f"agent {index + 1} budget")
        if budget <= 0:
            raise NonPositiveBudget(f"agent {index + 1} has budget {budget}; must be positive")
        budgets.append(budget)
    if not budgets:
        raise DimensionMismatch("an instance needs at least one agent")
    return tuple(budgets)


def validate_disutility_matrix(
    raw_matrix: Sequence[Sequence[Any]], n: int, m: int
) -> Tuple[Tuple[Fraction, ...], ...]:
    if len(raw_matrix) != n:
        raise DimensionMismatch(f"disutility matrix has {len(raw_matrix)} rows, expected {n}")
    rows: List[Tuple[Fraction, ...]] = []
    for i, raw_row in enumerate(raw_matrix):
        if len(raw_row) != m:
            raise DimensionMismatch(
                f"disutility matrix row {i + 1} has {len(raw_row)} entries, expected {m}"
            )
        row = tuple(_rational(v, f"disutility of agent {i + 1}") for v in raw_row)
        for j, value in enumerate(row):
            if value < 0:
                raise NegativeDisutility(
                    f"agent {i + 1} has disutility {value} for chore {j + 1}"
                )
        rows.append(row)
    return tuple(rows)


def validate_instance(raw: Mapping[str, Any]) -> Instance:
    """Validate parsed instance data.

    ``raw`` holds ``chores`` (mappings with ``size``, ``disutility`` and an
    optional ``name``), ``budgets``, and optionally ``disutility_matrix`` and
    ``agent_names``.
    """

    chores = tuple(validate_chore(i, c) for i, c in enumerate(raw.get("chores") or []))
    budgets = validate_budgets(raw.get("budgets") or [])
    matrix = None
    if raw.get("disutility_matrix") is not None:
        matrix = validate_disutility_matrix(raw["disutility_matrix"], len(budgets), len(chores))
    names = raw.get("agent_names")
    if names is not None:
        names = tuple(str(name) for name in names)
        if len(names) != len(budgets):
            raise DimensionMismatch(f"{len(names)} agent names for {len(budgets)} budgets")
    return Instance(chores=chores, budgets=budgets, disutility_matrix=matrix, agent_names=names)


def build_instance(
    chores: Sequence[Tuple[Any, Any]],
    budgets: Sequence[Any],
    disutility_matrix: Optional[Sequence[Sequence[Any]]] = None,
) -> Instance:
    """Shorthand for ``validate_instance`` from ``(size, disutility)`` pairs."""

    return validate_instance(
        {
            "chores": [{"size": s, "disutility": d} for s, d in chores],
            "budgets": list(budgets),
            "disutility_matrix": disutility_matrix,
        }
    )


def instance_to_raw(instance: Instance) -> dict:
    """Inverse of :func:`validate_instance` (values stay as fractions)."""

    raw: dict = {
        "chores": [
            {"size": c.size, "disutility": c.disutility, "name": c.name} for c in instance.chores
        ],
        "budgets": list(instance.budgets),
        "disutility_matrix": (
            [list(row) for row in instance.disutility_matrix]
            if instance.disutility_matrix is not None
            else None
        ),
    }
    if instance.agent_names is not None:
        raw["agent_names"] = list(instance.agent_names)
    return raw


__all__ = [
    "build_instance",
    "instance_to_raw",
    "validate_budgets",
    "validate_chore",
    "validate_disutility_matrix",
    "validate_instance",
]
