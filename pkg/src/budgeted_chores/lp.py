"""Exact rational feasibility for small linear systems.

``feasible`` presolves fixed variables and single-variable rows into bounds,
then runs a phase-one simplex over :class:`fractions.Fraction` with Bland's
rule. Any point it returns is checked against the original system before
being handed back.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InternalInvariantViolation
from .models import ONE, ZERO

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    LE = "<="
    EQ = "=="
    GE = ">="

    def holds(self, lhs: Fraction, rhs: Fraction) -> bool:
        if self is Relation.LE:
            return lhs <= rhs
        if self is Relation.GE:
            return lhs >= rhs
        return lhs == rhs

    def flipped(self) -> "Relation":
        if self is Relation.LE:
            return Relation.GE
        if self is Relation.GE:
            return Relation.LE
        return self


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coefficients[v] * x[v]) relation rhs`` with sparse coefficients."""

    coefficients: Dict[int, Fraction]
    relation: Relation
    rhs: Fraction
    label: str = ""

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * point[v] for v, a in self.coefficients.items()), ZERO)

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        return self.relation.holds(self.lhs(point), self.rhs)


@dataclass
class LinearSystem:
    """Variables with box bounds plus a list of linear constraints.

    ``upper`` entries may be ``None`` for an unbounded variable.
    """

    lower: List[Fraction]
    upper: List[Optional[Fraction]]
    constraints: List[LinearConstraint] = field(default_factory=list)

    @classmethod
    def boxed(cls, variables: int, lo: Fraction = ZERO, hi: Optional[Fraction] = ONE) -> "LinearSystem":
        return cls([lo] * variables, [hi] * variables)

    @property
    def variables(self) -> int:
        return len(self.lower)

    def add(
        self,
        coefficients: Dict[int, Fraction],
        relation: Relation,
        rhs: Fraction,
        label: str = "",
    ) -> None:
        cleaned = {v: Fraction(a) for v, a in coefficients.items() if a != 0}
        for v in cleaned:
            if not 0 <= v < self.variables:
                raise ValueError(f"constraint {label or len(self.constraints)} uses unknown variable {v}")
        self.constraints.append(LinearConstraint(cleaned, relation, Fraction(rhs), label))

    def fix(self, variable: int, value: Fraction) -> None:
        self.lower[variable] = value
        self.upper[variable] = value

    def validate(self) -> None:
        if len(self.upper) != len(self.lower):
            raise ValueError("bound vectors differ in length")
        for v, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if hi is not None and lo > hi:
                raise ValueError(f"variable {v} has empty bounds [{lo}, {hi}]")


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    point: Optional[Tuple[Fraction, ...]] = None

    def __bool__(self) -> bool:
        return self.feasible


INFEASIBLE = FeasibilityResult(False)


def recheck(system: LinearSystem, point: Sequence[Fraction]) -> List[str]:
    """Describe every bound or constraint the point violates (empty when it is feasible)."""

    problems: List[str] = []
    if len(point) != system.variables:
        return [f"point has {len(point)} entries, system has {system.variables} variables"]
    for v, value in enumerate(point):
        hi = system.upper[v]
        if value < system.lower[v] or (hi is not None and value > hi):
            problems.append(f"x{v} = {value} outside [{system.lower[v]}, {hi}]")
    for index, constraint in enumerate(system.constraints):
        if not constraint.satisfied_by(point):
            problems.append(
                f"constraint {constraint.label or index}: {constraint.lhs(point)} "
                f"{constraint.relation.value} {constraint.rhs} fails"
            )
    return problems


# ---------------------------------------------------------------------------
# Presolve
# ---------------------------------------------------------------------------


class _Infeasible(Exception):
    pass


def _tighten(
    lower: List[Fraction], upper: List[Optional[Fraction]], v: int, a: Fraction, relation: Relation, rhs: Fraction
) -> bool:
    bound = rhs / a
    if a < 0:
        relation = relation.flipped()
    changed = False
    if relation in (Relation.LE, Relation.EQ):
        if upper[v] is None or bound < upper[v]:
            upper[v] = bound
            changed = True
    if relation in (Relation.GE, Relation.EQ):
        if bound > lower[v]:
            lower[v] = bound
            changed = True
    hi = upper[v]
    if hi is not None and lower[v] > hi:
        raise _Infeasible
    return changed


def _presolve(
    system: LinearSystem,
) -> Tuple[List[Fraction], List[Optional[Fraction]], List[Tuple[Dict[int, Fraction], Relation, Fraction]]]:
    lower = list(system.lower)
    upper = list(system.upper)
    for v in range(system.variables):
        hi = upper[v]
        if hi is not None and lower[v] > hi:
            raise _Infeasible
    rows = [(dict(c.coefficients), c.relation, c.rhs) for c in system.constraints]
    changed = True
    while changed:
        changed = False
        remaining = []
        for coefficients, relation, rhs in rows:
            free: Dict[int, Fraction] = {}
            for v, a in coefficients.items():
                if upper[v] is not None and lower[v] == upper[v]:
                    rhs -= a * lower[v]
                else:
                    free[v] = a
            if not free:
                if not relation.holds(ZERO, rhs):
                    raise _Infeasible
                continue
            if len(free) == 1:
                ((v, a),) = free.items()
                changed = _tighten(lower, upper, v, a, relation, rhs) or changed
                continue
            remaining.append((free, relation, rhs))
        rows = remaining
    return lower, upper, rows


# ---------------------------------------------------------------------------
# Phase-one simplex
# ---------------------------------------------------------------------------


def _phase_one(
    columns: int, rows: List[Tuple[List[Fraction], Fraction]], basis: List[Optional[int]]
) -> Optional[List[Fraction]]:
    """Minimise the artificial sum for ``A y = b, y >= 0`` with ``b >= 0``.

    ``basis[r]`` names a slack column already forming an identity column for
    row ``r``, or ``None`` when the row needs an artificial. Returns the
    values of the ``columns`` structural+slack variables, or ``None`` when the
    artificial sum cannot be driven to zero.
    """

    artificial_rows = [r for r, b in enumerate(basis) if b is None]
    width = columns + len(artificial_rows)
    tableau: List[List[Fraction]] = []
    heads: List[int] = []
    next_artificial = columns
    for r, (coefficients, rhs) in enumerate(rows):
        row = coefficients + [ZERO] * len(artificial_rows) + [rhs]
        if basis[r] is None:
            row[next_artificial] = ONE
            heads.append(next_artificial)
            next_artificial += 1
        else:
            heads.append(basis[r])
        tableau.append(row)

    # reduced costs of the artificial-sum objective
    cost = [ZERO] * (width + 1)
    for r in artificial_rows:
        for col in range(width + 1):
            cost[col] -= tableau[r][col]
    for col in range(columns, width):
        cost[col] = ZERO

    pivots = 0
    while True:
        entering = next((col for col in range(width) if cost[col] < 0), None)
        if entering is None:
            break
        leaving: Optional[int] = None
        best_ratio: Optional[Fraction] = None
        for r, row in enumerate(tableau):
            a = row[entering]
            if a <= 0:
                continue
            ratio = row[-1] / a
            if (
                best_ratio is None
                or ratio < best_ratio
                or (ratio == best_ratio and heads[r] < heads[leaving])
            ):
                best_ratio = ratio
                leaving = r
        if leaving is None:
            # unbounded direction; cannot happen with a non-negative objective
            raise InternalInvariantViolation("phase-one objective unbounded")
        _pivot(tableau, cost, leaving, entering)
        heads[leaving] = entering
        pivots += 1

    logger.debug("phase one finished after %d pivots", pivots)
    if -cost[-1] > 0:
        return None
    values = [ZERO] * columns
    for r, head in enumerate(heads):
        if head < columns:
            values[head] = tableau[r][-1]
    return values


def _pivot(tableau: List[List[Fraction]], cost: List[Fraction], row_index: int, col: int) -> None:
    pivot_row = tableau[row_index]
    factor = pivot_row[col]
    if factor != ONE:
        tableau[row_index] = pivot_row = [x / factor for x in pivot_row]
    nonzero = [j for j, x in enumerate(pivot_row) if x != 0]
    for r, row in enumerate(tableau):
        if r == row_index:
            continue
        scale = row[col]
        if scale == 0:
            continue
        for j in nonzero:
            row[j] -= scale * pivot_row[j]
    scale = cost[col]
    if scale != 0:
        for j in nonzero:
            cost[j] -= scale * pivot_row[j]


def feasible(system: LinearSystem) -> FeasibilityResult:
    """Decide feasibility exactly; a feasible verdict carries a witness point."""

    system.validate()
    try:
        lower, upper, rows = _presolve(system)
    except _Infeasible:
        return INFEASIBLE

    free = [v for v in range(system.variables) if upper[v] is None or lower[v] != upper[v]]
    column_of = {v: index for index, v in enumerate(free)}
    bounded = [v for v in free if upper[v] is not None]
    structural = len(free)

    # Shift y = x - lower; rows become A y (rel) b - A lower.
    standard: List[Tuple[Dict[int, Fraction], Relation, Fraction]] = []
    for coefficients, relation, rhs in rows:
        shifted = rhs - sum((a * lower[v] for v, a in coefficients.items()), ZERO)
        standard.append(({column_of[v]: a for v, a in coefficients.items()}, relation, shifted))
    for v in bounded:
        standard.append(({column_of[v]: ONE}, Relation.LE, upper[v] - lower[v]))

    slack_count = sum(1 for _, relation, _ in standard if relation is not Relation.EQ)
    columns = structural + slack_count
    dense_rows: List[Tuple[List[Fraction], Fraction]] = []
    basis: List[Optional[int]] = []
    slack = structural
    for coefficients, relation, rhs in standard:
        row = [ZERO] * columns
        for col, a in coefficients.items():
            row[col] = a
        slack_col: Optional[int] = None
        if relation is not Relation.EQ:
            row[slack] = ONE if relation is Relation.LE else -ONE
            slack_col = slack
            slack += 1
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        head = slack_col if slack_col is not None and row[slack_col] == ONE else None
        dense_rows.append((row, rhs))
        basis.append(head)

    values = _phase_one(columns, dense_rows, basis)
    if values is None:
        return INFEASIBLE

    point = list(lower)
    for v in free:
        point[v] = lower[v] + values[column_of[v]]
    problems = recheck(system, point)
    if problems:
        raise InternalInvariantViolation("LP witness fails recheck: " + "; ".join(problems[:3]))
    return FeasibilityResult(True, tuple(point))


__all__ = [
    "FeasibilityResult",
    "LinearConstraint",
    "LinearSystem",
    "Relation",
    "feasible",
    "recheck",
]
