import itertools
import random
from fractions import Fraction
from typing import List, Optional

import pytest

from budgeted_chores.lp import LinearSystem, Relation, feasible, recheck


def _solve_square(matrix: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Gaussian elimination; ``None`` for a singular system."""

    size = len(matrix)
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        factor = rows[col][col]
        rows[col] = [x / factor for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                scale = rows[r][col]
                rows[r] = [x - scale * y for x, y in zip(rows[r], rows[col])]
    return [row[-1] for row in rows]


def _vertex_oracle(system: LinearSystem) -> bool:
    """A bounded non-empty polyhedron has a vertex: try every basis of tight rows."""

    n = system.variables
    hyperplanes = []
    for v in range(n):
        unit = [Fraction(0)] * n
        unit[v] = Fraction(1)
        hyperplanes.append((unit, system.lower[v]))
        hyperplanes.append((unit, system.upper[v]))
    for constraint in system.constraints:
        dense = [constraint.coefficients.get(v, Fraction(0)) for v in range(n)]
        hyperplanes.append((dense, constraint.rhs))
    for chosen in itertools.combinations(hyperplanes, n):
        point = _solve_square([list(h[0]) for h in chosen], [h[1] for h in chosen])
        if point is not None and not recheck(system, point):
            return True
    return False


def _random_system(rng: random.Random) -> LinearSystem:
    variables = rng.randint(1, 4)
    system = LinearSystem.boxed(variables, hi=Fraction(rng.randint(1, 3)))
    for _ in range(rng.randint(0, 6)):
        coefficients = {v: Fraction(rng.randint(-3, 3)) for v in range(variables) if rng.random() < 0.7}
        relation = rng.choice(list(Relation))
        system.add(coefficients, relation, Fraction(rng.randint(-4, 6), rng.choice([1, 2])))
    return system


def test_single_variable_feasible_and_infeasible():
    system = LinearSystem.boxed(1)
    system.add({0: Fraction(1)}, Relation.EQ, Fraction(1))
    result = feasible(system)
    assert result
    assert result.point == (Fraction(1),)

    system = LinearSystem.boxed(1)
    system.add({0: Fraction(1)}, Relation.GE, Fraction(2))
    assert not feasible(system)


def test_multi_variable_infeasible():
    system = LinearSystem.boxed(2)
    system.add({0: Fraction(1), 1: Fraction(1)}, Relation.GE, Fraction(3, 2))
    system.add({0: Fraction(1), 1: Fraction(-1)}, Relation.EQ, Fraction(1))
    assert not feasible(system)


def test_equalities_are_solved_exactly():
    system = LinearSystem.boxed(3)
    system.add({0: Fraction(10), 1: Fraction(2)}, Relation.EQ, Fraction(4))
    system.add({0: Fraction(1), 2: Fraction(1)}, Relation.EQ, Fraction(1))
    system.add({1: Fraction(1)}, Relation.LE, Fraction(1, 3))
    result = feasible(system)
    assert result
    assert recheck(system, result.point) == []


def test_unbounded_variables():
    system = LinearSystem([Fraction(0), Fraction(0)], [None, None])
    system.add({0: Fraction(1), 1: Fraction(-1)}, Relation.GE, Fraction(7))
    system.add({1: Fraction(1)}, Relation.GE, Fraction(3))
    result = feasible(system)
    assert result
    assert result.point[0] - result.point[1] >= 7


def test_fixed_variables_and_empty_bounds():
    system = LinearSystem.boxed(2)
    system.fix(0, Fraction(1, 2))
    system.add({0: Fraction(2), 1: Fraction(1)}, Relation.LE, Fraction(1))
    assert feasible(system).point[0] == Fraction(1, 2)

    broken = LinearSystem([Fraction(2)], [Fraction(1)])
    with pytest.raises(ValueError):
        feasible(broken)


def test_unknown_variable_is_rejected():
    system = LinearSystem.boxed(1)
    with pytest.raises(ValueError):
        system.add({3: Fraction(1)}, Relation.LE, Fraction(1))


def test_recheck_reports_violations():
    system = LinearSystem.boxed(2)
    system.add({0: Fraction(1), 1: Fraction(1)}, Relation.EQ, Fraction(1), label="sum")
    assert recheck(system, [Fraction(1, 2), Fraction(1, 2)]) == []
    problems = recheck(system, [Fraction(1), Fraction(1)])
    assert len(problems) == 1
    assert problems[0].startswith("constraint sum")
    assert recheck(system, [Fraction(2), Fraction(-1)])[0].startswith("x0")


def test_feasible_is_deterministic():
    rng = random.Random(7)
    system = _random_system(rng)
    assert feasible(system) == feasible(system)


@pytest.mark.parametrize("seed", range(500))
def test_verdict_matches_vertex_enumeration(seed):
    system = _random_system(random.Random(seed))
    result = feasible(system)
    assert bool(result) == _vertex_oracle(system)
    if result:
        assert recheck(system, result.point) == []
